"""IFS construction of the Weierstrass graph approximations.

The contractions are

    T_i(x, y) = ((x + i) / nb, lam * y + cos(2 pi (x + i) / nb)),  i = 0..nb-1

and V_m is the set of images of the fixed points P_0..P_{nb-1} under every
word of length m.  Words are tuples of letters ``(M_1, ..., M_m)`` acting as
``T_{M_1} o ... o T_{M_m}``; the integer index of a word is its base-nb
reading with ``M_1`` as the most significant digit, which is also the order
of increasing abscissa.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import LevelTooLargeError, ParameterError, StrictnessError

#: two generated vertices are the same vertex when both coordinates agree to this
DEDUP_TOL = 1e-9

#: upper bound on raw (pre-deduplication) points generated by one call
MAX_RAW_POINTS = 60_000_000


class NonStrictWarning(UserWarning):
    """Geometry requested with lambda * nb <= 1 (the graph is then rectifiable)."""


@dataclass(frozen=True)
class WeierstrassParams:
    lam: float
    nb: int
    d_w: float
    eta: float
    strict: bool = True

    @property
    def is_strict_regime(self) -> bool:
        return self.lam * self.nb > 1.0

    @property
    def box_exponent(self) -> float:
        """2 - D_W, the Hoelder exponent of the height bound."""
        return 2.0 - self.d_w


def eta_constant(lam: float, nb: int) -> float:
    """Closed-form constant bounding edge heights by ``eta * L_m**(2 - D_W)``."""
    d_w = 2.0 + math.log(lam) / math.log(nb)
    a = lam * nb**2 - 1.0
    b = lam * nb**3 - 1.0
    first = (2 * nb - 1) * lam * (nb**2 - 1) / ((nb - 1) ** 2 * (1.0 - lam) * a)
    second = 2.0 * nb / (a * b)
    return 2.0 * math.pi**2 * (nb - 1) ** (2.0 - d_w) * (first + second)


def make_params(lam: float, nb: int, strict: bool = True) -> WeierstrassParams:
    """Validate ``(lam, nb)`` and attach the derived constants D_W and eta.

    Raises
    ------
    ParameterError
        ``lam`` outside (0, 1) or ``nb < 2``.
    StrictnessError
        ``strict`` is set and ``lam * nb <= 1``.
    """
    if isinstance(nb, bool) or int(nb) != nb:
        raise ParameterError(f"nb must be an integer, got {nb!r}")
    nb = int(nb)
    lam = float(lam)
    if not (0.0 < lam < 1.0) or not math.isfinite(lam):
        raise ParameterError(f"lambda must lie in (0,1), got {lam}")
    if nb < 2:
        raise ParameterError(f"nb must be >= 2, got {nb}")
    if strict and lam * nb <= 1.0:
        raise StrictnessError("lambda*nb <= 1")
    d_w = 2.0 + math.log(lam) / math.log(nb)
    eta = eta_constant(lam, nb)
    if not (eta > 0.0 and math.isfinite(eta)):
        # only reachable in the non-strict regime with lam * nb**2 <= 1
        eta = math.nan
    return WeierstrassParams(lam=lam, nb=nb, d_w=d_w, eta=eta, strict=strict)


def _warn_if_rectifiable(params: WeierstrassParams) -> None:
    if not params.is_strict_regime:
        warnings.warn(
            f"lambda*nb = {params.lam * params.nb:g} <= 1: the graph is rectifiable",
            NonStrictWarning,
            stacklevel=3,
        )


class Point2(NamedTuple):
    x: float
    y: float


def _check_letter(params: WeierstrassParams, i: int) -> int:
    if isinstance(i, bool) or int(i) != i or not 0 <= i < params.nb:
        raise ParameterError(f"contraction index must be in [0, {params.nb - 1}], got {i!r}")
    return int(i)


def _contract(lam: float, nb: int, i: int, xy: np.ndarray) -> np.ndarray:
    x = (xy[..., 0] + i) / nb
    y = lam * xy[..., 1] + np.cos(2.0 * np.pi * x)
    return np.stack([x, y], axis=-1)


def contraction(params: WeierstrassParams, i: int, p: Sequence[float]) -> Point2:
    i = _check_letter(params, i)
    x = (p[0] + i) / params.nb
    return Point2(x, params.lam * p[1] + math.cos(2.0 * math.pi * x))


def fixed_point(params: WeierstrassParams, i: int) -> Point2:
    i = _check_letter(params, i)
    t = i / (params.nb - 1)
    return Point2(t, math.cos(2.0 * math.pi * t) / (1.0 - params.lam))


def fixed_points(params: WeierstrassParams) -> np.ndarray:
    """V_0 as an ``(nb, 2)`` array."""
    return np.array([fixed_point(params, i) for i in range(params.nb)])


def apply_word(params: WeierstrassParams, word: Sequence[int], p: Sequence[float]) -> Point2:
    """Evaluate ``T_{M_1} o ... o T_{M_m}`` at ``p`` (innermost letter last)."""
    letters = [_check_letter(params, i) for i in word]
    q = Point2(float(p[0]), float(p[1]))
    for i in reversed(letters):
        q = contraction(params, i, q)
    return q


def word_of_index(j: int, m: int, nb: int) -> tuple[int, ...]:
    """Base-nb digits of ``j`` (length ``m``, most significant first)."""
    if not 0 <= j < nb**m:
        raise ParameterError(f"index {j} outside [0, {nb**m - 1}]")
    digits = []
    for _ in range(m):
        j, d = divmod(j, nb)
        digits.append(d)
    return tuple(reversed(digits))


def index_of_word(word: Sequence[int], nb: int) -> int:
    j = 0
    for d in word:
        j = j * nb + int(d)
    return j


def _check_level(nb: int, m: int) -> None:
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise ParameterError(f"level must be a non-negative integer, got {m!r}")
    if nb ** (m + 1) > MAX_RAW_POINTS:
        raise LevelTooLargeError(
            f"level {m} needs {nb ** (m + 1)} raw points (budget {MAX_RAW_POINTS})"
        )


def raw_images(params: WeierstrassParams, m: int) -> np.ndarray:
    """All ``T_M(P_j)`` as an array of shape ``(nb**m, nb, 2)``.

    Axis 0 is the word index (see :func:`word_of_index`), axis 1 the fixed
    point index ``j``.
    """
    _check_level(params.nb, m)
    pts = fixed_points(params)
    for _ in range(m):
        # the new letter is the outermost contraction
        pts = np.concatenate([_contract(params.lam, params.nb, i, pts) for i in range(params.nb)])
    return pts.reshape(params.nb**m, params.nb, 2)


@dataclass(frozen=True)
class LevelGraph:
    """Ordered vertex chain of Gamma_{W_m}."""

    level: int
    nb: int
    vertices: np.ndarray
    boundary_indices: tuple[int, ...]
    n_coincident: int = 0

    def __post_init__(self):
        self.vertices.setflags(write=False)

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def x(self) -> np.ndarray:
        return self.vertices[:, 0]

    @property
    def y(self) -> np.ndarray:
        return self.vertices[:, 1]

    @property
    def edges(self) -> np.ndarray:
        """``(n-1, 2)`` array of consecutive index pairs."""
        idx = np.arange(len(self) - 1)
        return np.stack([idx, idx + 1], axis=1)

    @property
    def interior_mask(self) -> np.ndarray:
        mask = np.ones(len(self), dtype=bool)
        mask[list(self.boundary_indices)] = False
        return mask

    @property
    def interior_indices(self) -> np.ndarray:
        return np.flatnonzero(self.interior_mask)

    def neighbors(self, k: int) -> tuple[int, ...]:
        return tuple(j for j in (k - 1, k + 1) if 0 <= j < len(self))

    def index_of(self, point: Sequence[float], tol: float = DEDUP_TOL) -> int:
        """Chain position of a vertex given by its coordinates."""
        k = int(np.searchsorted(self.x, point[0] - tol))
        for j in (k, k + 1):
            if j < len(self) and np.all(np.abs(self.vertices[j] - point) < tol):
                return j
        raise ParameterError(f"{tuple(point)} is not a vertex of level {self.level}")


def vertex_chain(params: WeierstrassParams, m: int) -> LevelGraph:
    """Generate, deduplicate and order V_m.

    Every ``T_M(P_j)`` is produced, points whose coordinates agree within
    :data:`DEDUP_TOL` are merged, and the survivors are sorted by abscissa.
    """
    _warn_if_rectifiable(params)
    raw = raw_images(params, m).reshape(-1, 2)
    order = np.lexsort((raw[:, 1], raw[:, 0]))
    pts = raw[order]
    same = np.all(np.abs(np.diff(pts, axis=0)) < DEDUP_TOL, axis=1)
    keep = np.concatenate([[True], ~same])
    verts = np.ascontiguousarray(pts[keep])
    if np.any(np.diff(verts[:, 0]) <= 0.0):
        raise LevelTooLargeError(f"abscissas no longer separable at level {m}")
    v0 = fixed_points(params)
    boundary = []
    for p in v0:
        k = int(np.argmin(np.abs(verts[:, 0] - p[0])))
        boundary.append(k)
    return LevelGraph(
        level=m,
        nb=params.nb,
        vertices=verts,
        boundary_indices=tuple(boundary),
        n_coincident=int(np.count_nonzero(same)),
    )


def closed_form_vertex_count(nb: int, m: int) -> int:
    """The count 2 nb^m + nb - 2 quoted for V_m."""
    return 2 * nb**m + nb - 2


def construction_vertex_count(nb: int, m: int) -> int:
    """nb^m cells of nb points, adjacent cells sharing one endpoint."""
    return (nb - 1) * nb**m + 1


@dataclass(frozen=True)
class Polygon:
    level: int
    index: int
    vertices: np.ndarray

    @property
    def word(self) -> tuple[int, ...]:
        return word_of_index(self.index, self.level, len(self.vertices))


def polygons(params: WeierstrassParams, m: int) -> list[Polygon]:
    """The nb^m cells ``P_{m,j}``; vertices of cell j are ``T_M(P_0..P_{nb-1})``."""
    _warn_if_rectifiable(params)
    raw = raw_images(params, m)
    return [Polygon(level=m, index=j, vertices=raw[j]) for j in range(len(raw))]


def cell_width(nb: int, m: int) -> float:
    """L_m = 1 / ((nb - 1) nb^m), the abscissa gap between consecutive vertices."""
    return 1.0 / ((nb - 1) * nb**m)


def height_lower_constant(params: WeierstrassParams) -> float:
    """The bracket of the height lower bound, evaluated verbatim.

    ``|2/(1-lam) * min_j sin(pi (2j+1)/(nb-1)) - pi / (nb (nb-1)(lam nb - 1))|``
    with j running over 0..nb-1.  The inner expression can be negative, so
    the result is reported but not used as a per-edge guarantee.
    """
    nb, lam = params.nb, params.lam
    s = min(math.sin(math.pi * (2 * j + 1) / (nb - 1)) for j in range(nb))
    return abs(2.0 / (1.0 - lam) * s - math.pi / (nb * (nb - 1) * (lam * nb - 1.0)))


def cover_constant(params: WeierstrassParams) -> float:
    """C = max((nb-1)^(2-D_W) * lower bracket, eta)."""
    low = (params.nb - 1) ** params.box_exponent * height_lower_constant(params)
    return max(low, params.eta)


@dataclass(frozen=True)
class EdgeHeights:
    level: int
    start: np.ndarray  # chain index of T_M(P_j)
    height: np.ndarray  # |y(T_M(P_{j+1})) - y(T_M(P_j))|
    extent: np.ndarray  # vertical extent of the refined graph over the edge
    lower_bound: float  # lam^m * height_lower_constant
    upper_bound: float  # eta * L_m^(2 - D_W)
    refine: int

    def __len__(self) -> int:
        return len(self.start)

    @property
    def upper_holds(self) -> np.ndarray:
        return self.height <= self.upper_bound


def edge_heights(params: WeierstrassParams, m: int, refine: int = 4) -> EdgeHeights:
    """Height of the rectangle spanned by every intra-cell edge at level m.

    Intra-cell edges ``(T_M(P_j), T_M(P_{j+1}))`` are exactly the chain edges,
    so heights are consecutive differences along the chain.  ``extent`` is the
    vertical extent of the level ``m + refine`` chain over the same abscissa
    interval.
    """
    chain = vertex_chain(params, m)
    height = np.abs(np.diff(chain.y))
    fine = vertex_chain(params, m + refine)
    per = params.nb**refine
    y = fine.y
    n_edges = len(chain) - 1
    body = y[:-1].reshape(n_edges, per)
    ends = y[per::per]
    hi = np.maximum(body.max(axis=1), ends)
    lo = np.minimum(body.min(axis=1), ends)
    upper = params.eta * cell_width(params.nb, m) ** params.box_exponent
    lower = params.lam**m * height_lower_constant(params)
    return EdgeHeights(
        level=m,
        start=np.arange(n_edges),
        height=height,
        extent=hi - lo,
        lower_bound=lower,
        upper_bound=upper,
        refine=refine,
    )

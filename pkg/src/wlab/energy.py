"""Renormalized energies, harmonic extension, resistance metric and its dimension.

Two normalizations of the level-m energy weight ``eta^-2 * r_inv^m`` are
available:

``paper``
    ``r_inv = nb^(5 - 2 D_W) = nb / lam^2``; the constant used for the
    resistance estimates and the dimension formulas.
``conservative``
    ``r_inv = nb``; the only value for which harmonic extension preserves
    the energy on the chain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal, NamedTuple, Sequence

import numpy as np
from scipy.linalg import solve_banded

from .errors import BoundaryVertexError, ParameterError
from .geometry import LevelGraph, WeierstrassParams, vertex_chain
from .measure import integrate

ModeTag = Literal["paper", "conservative"]

SPLINE_DEPTH = 3


@dataclass(frozen=True)
class NormalizationMode:
    tag: ModeTag
    r_inverse: float


def normalization(params: WeierstrassParams, mode: ModeTag = "paper") -> NormalizationMode:
    if mode == "paper":
        return NormalizationMode("paper", params.nb ** (5.0 - 2.0 * params.d_w))
    if mode == "conservative":
        return NormalizationMode("conservative", float(params.nb))
    raise ParameterError(f"unknown normalization mode {mode!r}")


def energy_weight(params: WeierstrassParams, m: int, mode: ModeTag = "paper") -> float:
    """``eta^-2 * r_inv^m``."""
    return normalization(params, mode).r_inverse ** m / params.eta**2


def n_vertices(params: WeierstrassParams, m: int) -> int:
    return (params.nb - 1) * params.nb**m + 1


def _values(params: WeierstrassParams, m: int, u, what: str = "u") -> np.ndarray:
    u = np.asarray(u, dtype=float)
    n = n_vertices(params, m)
    if u.shape != (n,):
        raise ParameterError(f"{what} must have {n} values on V_{m}, got shape {u.shape}")
    if not np.all(np.isfinite(u)):
        raise ParameterError(f"{what} has missing (non-finite) values")
    return u


def energy(params: WeierstrassParams, m: int, u, mode: ModeTag = "paper") -> float:
    u = _values(params, m, u)
    return energy_weight(params, m, mode) * float(np.sum(np.diff(u) ** 2))


def _segment_matrix(k: int) -> np.ndarray:
    """Banded storage of the k-point second-difference matrix (2 on the diagonal)."""
    ab = np.empty((3, k))
    ab[0] = -1.0
    ab[1] = 2.0
    ab[2] = -1.0
    return ab


def harmonic_extend(params: WeierstrassParams, m: int, u_parent) -> np.ndarray:
    """Minimal-energy extension of values on V_{m-1} to V_m.

    Each parent edge is refined into nb chain edges; the nb-1 new values
    solve the segment's Dirichlet problem with the parent values as ends.
    All segments share one matrix and are solved together.
    """
    if m < 1:
        raise ParameterError("harmonic extension needs m >= 1")
    u_parent = _values(params, m - 1, u_parent, "parent values")
    nb = params.nb
    k = nb - 1
    left, right = u_parent[:-1], u_parent[1:]
    rhs = np.zeros((k, len(left)))
    rhs[0] += left
    rhs[-1] += right
    inner = solve_banded((1, 1), _segment_matrix(k), rhs)
    out = np.empty(n_vertices(params, m))
    out[::nb] = u_parent
    for r in range(k):
        out[r + 1 :: nb] = inner[r]
    return out


def chain_laplacian_banded(n: int) -> np.ndarray:
    """Banded ``-Delta`` of the n-vertex path, with boundary rows left open."""
    ab = np.zeros((3, n))
    ab[0, 1:] = -1.0
    ab[1, :] = 2.0
    ab[1, 0] = ab[1, -1] = 1.0
    ab[2, :-1] = -1.0
    return ab


def _pinned_solve(n: int, pinned: dict[int, float]) -> np.ndarray:
    """Solve ``Delta u = 0`` on the n-vertex path off ``pinned``."""
    ab = chain_laplacian_banded(n)
    b = np.zeros(n)
    for k, val in pinned.items():
        # replace row k by the identity row u_k = val
        if k > 0:
            ab[2, k - 1] = 0.0
        ab[1, k] = 1.0
        if k < n - 1:
            ab[0, k + 1] = 0.0
        b[k] = val
    return solve_banded((1, 1), ab, b)


def dirichlet_solve(params: WeierstrassParams, m: int, boundary: Sequence[float]) -> np.ndarray:
    """Harmonic function on V_m with prescribed values on V_0 (one global tridiagonal solve)."""
    boundary = np.asarray(boundary, dtype=float)
    if boundary.shape != (params.nb,):
        raise ParameterError(f"need {params.nb} boundary values, got shape {boundary.shape}")
    n = n_vertices(params, m)
    step = params.nb**m
    return _pinned_solve(n, {i * step: float(v) for i, v in enumerate(boundary)})


def _check_interior(chain: LevelGraph, k: int) -> int:
    if isinstance(k, bool) or int(k) != k or not 0 <= k < len(chain):
        raise ParameterError(f"vertex index {k!r} outside level {chain.level}")
    if k in chain.boundary_indices:
        raise BoundaryVertexError(f"vertex {k} belongs to V_0")
    return int(k)


def _boundary_positions(params: WeierstrassParams, m: int) -> tuple[int, ...]:
    return tuple(i * params.nb**m for i in range(params.nb))


def laplacian(params: WeierstrassParams, m: int, u) -> np.ndarray:
    """``Delta_m u`` at every vertex; V_0 entries are NaN."""
    u = _values(params, m, u)
    out = np.full_like(u, np.nan)
    out[1:-1] = u[:-2] + u[2:] - 2.0 * u[1:-1]
    out[list(_boundary_positions(params, m))] = np.nan
    return out


def laplacian_apply(params: WeierstrassParams, m: int, u, k: int) -> float:
    """``Delta_m u(X) = sum_{Y ~ X} (u(Y) - u(X))`` at chain position ``k``."""
    u = _values(params, m, u)
    if isinstance(k, bool) or int(k) != k or not 0 <= k < len(u):
        raise ParameterError(f"vertex index {k!r} outside level {m}")
    if k in _boundary_positions(params, m):
        raise BoundaryVertexError(f"vertex {k} belongs to V_0")
    return float(u[k - 1] + u[k + 1] - 2.0 * u[k])


def tent(params: WeierstrassParams, m: int, k: int, depth: int = 0) -> np.ndarray:
    """Spline equal to 1 at chain position k of V_m, 0 at the other V_m vertices,
    harmonically extended ``depth`` levels."""
    psi = np.zeros(n_vertices(params, m))
    psi[k] = 1.0
    for level in range(m + 1, m + depth + 1):
        psi = harmonic_extend(params, level, psi)
    return psi


def spline_integral(params: WeierstrassParams, k: int, m: int, depth: int = SPLINE_DEPTH) -> float:
    """Quadrature value of the tent at interior vertex ``k`` of V_m."""
    if isinstance(k, bool) or int(k) != k or not 0 <= k < n_vertices(params, m):
        raise ParameterError(f"vertex index {k!r} outside level {m}")
    if k in _boundary_positions(params, m):
        raise BoundaryVertexError(f"vertex {k} belongs to V_0")
    return integrate(params, m + depth, tent(params, m, k, depth))


def pointwise_laplacian(
    params: WeierstrassParams,
    u,
    k: int,
    m: int,
    mode: ModeTag = "paper",
    depth: int = SPLINE_DEPTH,
) -> float:
    """``eta^-2 r_inv^m (int psi_X^m dmu)^-1 Delta_m u(X)`` at chain position k.

    ``u`` is either the array of values on V_m or a callable ``u(x, y)``
    evaluated on the level-m vertices.
    """
    if callable(u):
        chain = vertex_chain(params, m)
        u = u(chain.x, chain.y)
    lap = laplacian_apply(params, m, u, k)
    return energy_weight(params, m, mode) * lap / spline_integral(params, k, m, depth)


class LaplacianSample(NamedTuple):
    level: int
    index: int
    value: float
    ratio: float  # value / previous level's value (nan on the first row)


def pointwise_laplacian_table(
    params: WeierstrassParams,
    u: Callable[[np.ndarray, np.ndarray], np.ndarray],
    x: float,
    levels: Sequence[int],
    mode: ModeTag = "paper",
    depth: int = SPLINE_DEPTH,
) -> list[LaplacianSample]:
    """Evaluate the pointwise Laplacian at the vertex of abscissa ``x`` on successive levels.

    No limit is asserted; the ratios are a convergence diagnostic.
    """
    rows: list[LaplacianSample] = []
    prev = math.nan
    for m in levels:
        chain = vertex_chain(params, m)
        k = int(round(x * (len(chain) - 1)))
        if abs(chain.x[k] - x) > 1e-12:
            raise ParameterError(f"x={x} is not a vertex abscissa at level {m}")
        val = pointwise_laplacian(params, u(chain.x, chain.y), k, m, mode, depth)
        rows.append(LaplacianSample(m, k, val, val / prev if prev else math.nan))
        prev = val
    return rows


def resistance(
    params: WeierstrassParams, m: int, i: int, j: int, mode: ModeTag = "paper"
) -> float:
    """Effective resistance between chain positions ``i`` and ``j`` of V_m.

    Computed as the reciprocal of the minimal level-m energy among functions
    with ``u(i) = 0`` and ``u(j) = 1`` (free everywhere else).
    """
    n = n_vertices(params, m)
    for k in (i, j):
        if isinstance(k, bool) or int(k) != k or not 0 <= k < n:
            raise ParameterError(f"vertex index {k!r} outside level {m}")
    if i == j:
        return 0.0
    u = _pinned_solve(n, {int(i): 0.0, int(j): 1.0})
    return 1.0 / energy(params, m, u, mode)


def resistance_between(
    params: WeierstrassParams, m: int, X: Sequence[float], Y: Sequence[float], mode: ModeTag = "paper"
) -> float:
    """Resistance between two points given by coordinates; both must lie in V_m."""
    chain = vertex_chain(params, m)
    return resistance(params, m, chain.index_of(X), chain.index_of(Y), mode)


class ResistanceDimension(NamedTuple):
    case: Literal["i", "ii"]
    d: float


def resistance_dimension(params: WeierstrassParams) -> ResistanceDimension:
    """Dimension of the graph in the resistance metric.

    Case i (lam > 1/nb): ``ln(nb/lam) / ((5 - 2 D_W) ln nb)``;
    case ii (lam < 1/nb): ``2 / (5 - 2 D_W)``.
    """
    lam, nb = params.lam, params.nb
    expo = 5.0 - 2.0 * params.d_w
    if lam * nb == 1.0:
        raise ParameterError("lambda*nb == 1: resistance dimension undefined at the boundary case")
    if lam * nb > 1.0:
        return ResistanceDimension("i", math.log(nb / lam) / (expo * math.log(nb)))
    return ResistanceDimension("ii", 2.0 / expo)


def spectral_exponent(d: float) -> float:
    """Weyl exponent ``d / (d + 1)`` attached to a resistance dimension."""
    return d / (d + 1.0)

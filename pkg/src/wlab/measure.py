"""Polygon areas, the self-similar measure and the vertex quadrature rule."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import ParameterError
from .geometry import Polygon, WeierstrassParams, polygons

DEGENERATE_AREA = 1e-15

Mode = Literal["raw", "normalized"]


class DegeneratePolygonWarning(UserWarning):
    pass


def _cross(u: np.ndarray, v: np.ndarray) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def polygon_area(poly: Polygon | np.ndarray) -> float:
    """Lebesgue area of a cell from its ordered vertices.

    Triangles use half the cross product of the two edges leaving vertex 0.
    For nb >= 4 the fan sum ``1/2 sum_j |V_jV_{j+1} x V_jV_{nb-1}|`` is used
    as is; it equals the area for convex cells.  Areas below
    :data:`DEGENERATE_AREA` are returned as 0 with a warning.
    """
    v = np.asarray(poly.vertices if isinstance(poly, Polygon) else poly, dtype=float)
    n = len(v)
    if n < 3:
        raise ParameterError(f"a polygon needs at least 3 vertices, got {n}")
    if n == 3:
        area = 0.5 * abs(_cross(v[1] - v[0], v[2] - v[0]))
    else:
        area = 0.5 * sum(abs(_cross(v[j + 1] - v[j], v[n - 1] - v[j])) for j in range(n - 1))
    if area < DEGENERATE_AREA:
        warnings.warn("degenerate polygon, area reported as 0", DegeneratePolygonWarning, stacklevel=2)
        return 0.0
    return area


@dataclass(frozen=True)
class MeasureWeights:
    raw: tuple[float, ...]
    normalized: tuple[float, ...]

    def select(self, mode: Mode) -> tuple[float, ...]:
        if mode == "raw":
            return self.raw
        if mode == "normalized":
            return self.normalized
        raise ParameterError(f"unknown measure mode {mode!r}")


def measure_weights(params: WeierstrassParams) -> MeasureWeights:
    """Area ratios ``mu_i = area(T_i(P_0)) / area(P_0)`` and their normalization."""
    base = polygon_area(polygons(params, 0)[0])
    if base <= 0.0:
        raise ParameterError("base cell has zero area")
    raw = tuple(polygon_area(p) / base for p in polygons(params, 1))
    total = sum(raw)
    return MeasureWeights(raw=raw, normalized=tuple(r / total for r in raw))


def cell_measure(
    params: WeierstrassParams,
    word: Sequence[int],
    mode: Mode = "normalized",
    weights: MeasureWeights | None = None,
) -> float:
    w = (weights or measure_weights(params)).select(mode)
    out = 1.0
    for letter in word:
        if not 0 <= letter < params.nb:
            raise ParameterError(f"invalid letter {letter}")
        out *= w[letter]
    return out


def cell_measures(params: WeierstrassParams, m: int, mode: Mode = "normalized") -> np.ndarray:
    """Measures of all nb^m cells in word-index order."""
    w = np.asarray(measure_weights(params).select(mode))
    out = np.ones(1)
    for _ in range(m):
        # outer letter is the most significant digit
        out = np.outer(w, out).ravel()
    return out


def cell_vertex_indices(nb: int, m: int) -> np.ndarray:
    """Chain positions of the vertices of every cell, shape ``(nb**m, nb)``."""
    return (nb - 1) * np.arange(nb**m)[:, None] + np.arange(nb)[None, :]


def integrate(
    params: WeierstrassParams,
    m: int,
    u: Sequence[float] | np.ndarray,
    kappa: float | None = None,
) -> float:
    """Vertex quadrature ``kappa * sum_j mu(P_{m,j}) sum_{X in P_{m,j}} u(X)``.

    ``u`` holds one value per vertex of the level-m chain.  ``kappa`` defaults
    to ``1/nb`` so that constants integrate exactly; ``kappa=1`` gives the
    unscaled sum.
    """
    u = np.asarray(u, dtype=float)
    n = (params.nb - 1) * params.nb**m + 1
    if u.shape != (n,):
        raise ParameterError(f"expected {n} vertex values at level {m}, got shape {u.shape}")
    if kappa is None:
        kappa = 1.0 / params.nb
    mu = cell_measures(params, m)
    per_cell = u[cell_vertex_indices(params.nb, m)].sum(axis=1)
    return float(kappa * np.dot(mu, per_cell))


"""Box counting on the level-m columns of the graph."""
from __future__ import annotations

import logging
from typing import NamedTuple, Sequence

import numpy as np

from .errors import LevelTooLargeError, ParameterError
from .geometry import WeierstrassParams, cell_width, cover_constant, vertex_chain

log = logging.getLogger(__name__)

#: deepest chain level sampled by box counting
MAX_SAMPLE_LEVEL = 14


class BoxCount(NamedTuple):
    count: int  # squares touched by the sampled graph
    bound: float  # n_columns * (C L_m^(1-D_W) n_sub^D_W + n_sub)
    side: float
    n_columns: int


def _column_ranges(x: np.ndarray, y: np.ndarray, edges: np.ndarray):
    """Min and max of the piecewise-linear interpolant of (x, y) on each [edges[k], edges[k+1]]."""
    y_at = np.interp(edges, x, y)
    xs = np.concatenate([x, edges])
    ys = np.concatenate([y, y_at])
    order = np.argsort(xs, kind="stable")
    xs, ys = xs[order], ys[order]
    starts = np.searchsorted(xs, edges[:-1], side="left")
    lo = np.minimum.reduceat(ys, starts)
    hi = np.maximum.reduceat(ys, starts)
    # reduceat stops one short of the next column's left edge; include it
    lo = np.minimum(lo, y_at[1:])
    hi = np.maximum(hi, y_at[1:])
    return lo, hi


def box_count(
    params: WeierstrassParams, m: int, n_sub: int = 1, refine: int = 4
) -> BoxCount:
    """Count grid squares of side ``L_m / n_sub`` meeting the graph.

    The graph is represented by the chain of level ``m + refine``; each of the
    ``(nb-1) nb^m`` columns of width L_m is split into ``n_sub`` strips and a
    strip needs every grid square between the lowest and highest point of the
    interpolated chain over it.
    """
    if n_sub < 1:
        raise ParameterError(f"n_sub must be >= 1, got {n_sub}")
    if refine < 0 or m + refine > MAX_SAMPLE_LEVEL:
        raise LevelTooLargeError(f"sampling level {m + refine} exceeds {MAX_SAMPLE_LEVEL}")
    fine = vertex_chain(params, m + refine)
    width = cell_width(params.nb, m)
    side = width / n_sub
    n_columns = (params.nb - 1) * params.nb**m
    edges = np.linspace(0.0, 1.0, n_columns * n_sub + 1)
    lo, hi = _column_ranges(fine.x, fine.y, edges)
    per_strip = np.floor(hi / side) - np.floor(lo / side) + 1
    count = int(per_strip.sum())
    c = cover_constant(params)
    bound = n_columns * (c * width ** (1.0 - params.d_w) * n_sub**params.d_w + n_sub)
    return BoxCount(count=count, bound=bound, side=side, n_columns=n_columns)


class BoxDimension(NamedTuple):
    slope: float
    intercept: float
    levels: tuple[int, ...]
    counts: tuple[int, ...]
    sides: tuple[float, ...]


def box_dimension(
    params: WeierstrassParams,
    levels: Sequence[int] = range(2, 8),
    n_sub: int = 1,
    refine: int = 4,
) -> BoxDimension:
    """Least-squares slope of ln(count) against ln(1/side) over ``levels``."""
    levels = tuple(levels)
    counts, sides = [], []
    for m in levels:
        log.info("box count at level %d (sampling level %d)", m, m + refine)
        bc = box_count(params, m, n_sub=n_sub, refine=refine)
        counts.append(bc.count)
        sides.append(bc.side)
    slope, intercept = np.polyfit(np.log(1.0 / np.array(sides)), np.log(counts), 1)
    return BoxDimension(float(slope), float(intercept), levels, tuple(counts), tuple(sides))

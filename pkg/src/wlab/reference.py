"""Closed-form anchors: the unit interval and the Sierpinski gasket."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple, Sequence

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class GasketConstants:
    r_sg: float
    beta_sg: float
    d_sg: float


def gasket_constants() -> GasketConstants:
    """Renormalization 3/5, resistance exponent ln(5/3)/ln 2, dimension ln 3/ln(5/3)."""
    return GasketConstants(
        r_sg=3.0 / 5.0,
        beta_sg=math.log(5.0 / 3.0) / math.log(2.0),
        d_sg=math.log(3.0) / math.log(5.0 / 3.0),
    )


def _check_unit(*pts: float) -> None:
    for t in pts:
        if not 0.0 <= t <= 1.0:
            raise ParameterError(f"point {t} outside [0, 1]")


def interval_resistance(x: float, y: float) -> float:
    """Effective resistance on [0, 1] with the standard energy: |y - x|."""
    _check_unit(x, y)
    return abs(y - x)


def interval_energy(
    x: float, y: float, p: int, weight: Literal["positive", "inverse"] = "positive"
) -> float:
    """Dyadic level-p energy of the ramp equal to 0 left of x and 1 right of y.

    ``weight="positive"`` multiplies the squared increments by ``2**p``, which
    is constant in p for dyadic endpoints and tends to ``1/|y - x|``;
    ``weight="inverse"`` uses ``2**-p`` and tends to 0.
    """
    _check_unit(x, y)
    if x == y:
        raise ParameterError("energy minimum undefined for x == y")
    lo, hi = min(x, y), max(x, y)
    t = np.linspace(0.0, 1.0, 2**p + 1)
    u = np.clip((t - lo) / (hi - lo), 0.0, 1.0)
    s = float(np.sum(np.diff(u) ** 2))
    if weight == "positive":
        return 2.0**p * s
    if weight == "inverse":
        return 2.0**-p * s
    raise ParameterError(f"unknown weight {weight!r}")


class EnergyRow(NamedTuple):
    p: int
    energy: float
    error: float  # energy - 1/|y - x|


def interval_energy_table(
    x: float, y: float, levels: Sequence[int], weight: Literal["positive", "inverse"] = "positive"
) -> list[EnergyRow]:
    target = 1.0 / abs(y - x)
    return [EnergyRow(p, e, e - target) for p in levels for e in [interval_energy(x, y, p, weight)]]

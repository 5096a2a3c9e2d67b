"""Dirichlet spectra of the level-m Laplacians and spectral decimation.

Eigenvalues are those of ``-Delta_m`` restricted to ``V_m \\ V_0``, so they
lie in (0, 4).  The decimation recurrence maps a level-(m-1) eigenvalue to
its level-m continuations through

    phi(L) = (-2 + L - eps * sqrt((L - 2)^2 - 4)) / 2,
    L_child = (z + 1)^2 / z,   z^nb = phi(L),

enumerated over both signs ``eps`` and all nb complex roots ``z``.
"""
from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass, field
from typing import Literal, NamedTuple, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import eigvalsh_tridiagonal, solve_banded

from .errors import ForbiddenValueError, LevelTooLargeError, ParameterError
from .geometry import WeierstrassParams, vertex_chain

GROUP_TOL = 1e-9
IMAG_TOL = 1e-10
DEFAULT_MAX_LEVEL = 7
MAX_MATRIX_SIZE = 20_000

Provenance = Literal["direct", "oracle", "decimation"]
Scale = Literal["none", "paper"]


def max_eigensolve_level() -> int:
    """Level cap for eigensolves, from ``WLAB_MAX_LEVEL`` (default 7)."""
    raw = os.environ.get("WLAB_MAX_LEVEL", "")
    try:
        return int(raw) if raw.strip() else DEFAULT_MAX_LEVEL
    except ValueError:
        raise ParameterError(f"WLAB_MAX_LEVEL must be an integer, got {raw!r}") from None


def dirichlet_size(nb: int, m: int) -> int:
    """Card(V_m \\ V_0) = (nb - 1)(nb^m - 1)."""
    return (nb - 1) * (nb**m - 1)


@dataclass(frozen=True)
class Spectrum:
    level: int
    values: np.ndarray  # distinct eigenvalues, ascending
    multiplicities: np.ndarray
    provenance: Provenance

    @property
    def entries(self) -> list[tuple[float, int]]:
        return [(float(v), int(k)) for v, k in zip(self.values, self.multiplicities)]

    @property
    def total(self) -> int:
        return int(self.multiplicities.sum())

    def __len__(self) -> int:
        return len(self.values)

    def contains(self, value: float, tol: float = GROUP_TOL) -> bool:
        if len(self.values) == 0:
            return False
        k = np.searchsorted(self.values, value)
        near = [j for j in (k - 1, k) if 0 <= j < len(self.values)]
        return any(abs(self.values[j] - value) <= tol for j in near)

    def multiplicity_of(self, value: float, tol: float = GROUP_TOL) -> int:
        hit = np.flatnonzero(np.abs(self.values - value) <= tol)
        return int(self.multiplicities[hit].sum())

    def expanded(self) -> np.ndarray:
        """Eigenvalues repeated by multiplicity."""
        return np.repeat(self.values, self.multiplicities)


def group_eigenvalues(values: Sequence[float], tol: float = GROUP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Merge sorted eigenvalues closer than ``tol`` into (value, multiplicity) pairs."""
    v = np.sort(np.asarray(values, dtype=float))
    if len(v) == 0:
        return v, np.zeros(0, dtype=int)
    breaks = np.flatnonzero(np.diff(v) > tol) + 1
    starts = np.concatenate([[0], breaks])
    counts = np.diff(np.concatenate([starts, [len(v)]]))
    means = np.add.reduceat(v, starts) / counts
    return means, counts


def _check_level(nb: int, m: int) -> None:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise ParameterError(f"Dirichlet spectra need a level m >= 1, got {m!r}")
    cap = max_eigensolve_level()
    if m > cap:
        raise LevelTooLargeError(f"level {m} exceeds the eigensolve cap {cap} (WLAB_MAX_LEVEL)")
    if dirichlet_size(nb, m) > MAX_MATRIX_SIZE:
        raise LevelTooLargeError(f"matrix size {dirichlet_size(nb, m)} exceeds {MAX_MATRIX_SIZE}")


def dirichlet_matrix(params: WeierstrassParams, m: int) -> sp.csr_matrix:
    """``-Delta_m`` on the interior vertices of the level-m chain (sparse, symmetric)."""
    _check_level(params.nb, m)
    chain = vertex_chain(params, m)
    interior = chain.interior_indices
    pos = -np.ones(len(chain), dtype=int)
    pos[interior] = np.arange(len(interior))
    rows, cols, vals = [], [], []
    for k in interior:
        i = pos[k]
        nbrs = chain.neighbors(int(k))
        rows.append(i)
        cols.append(i)
        vals.append(float(len(nbrs)))
        for j in nbrs:
            if pos[j] >= 0:
                rows.append(i)
                cols.append(pos[j])
                vals.append(-1.0)
    n = len(interior)
    return sp.csr_matrix((vals, (rows, cols)), shape=(n, n))


def _tridiagonal_parts(a: sp.spmatrix) -> tuple[np.ndarray, np.ndarray]:
    a = sp.csr_matrix(a)
    offsets = sp.triu(a, 2).nnz + sp.tril(a, -2).nnz
    if offsets:
        raise ParameterError("Dirichlet matrix is not tridiagonal in chain order")
    return a.diagonal(), a.diagonal(1)


def direct_spectrum(params: WeierstrassParams, m: int) -> Spectrum:
    """Dense symmetric eigensolve of :func:`dirichlet_matrix`.

    The matrix is tridiagonal in chain order; it is cut at vanishing couplings
    (the V_0 vertices) and every block is solved with LAPACK's tridiagonal
    symmetric eigensolver.
    """
    d, e = _tridiagonal_parts(dirichlet_matrix(params, m))
    cuts = np.flatnonzero(e == 0.0) + 1
    bounds = np.concatenate([[0], cuts, [len(d)]])
    eig = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi - lo == 1:
            eig.append(d[lo : lo + 1])
        else:
            eig.append(eigvalsh_tridiagonal(d[lo:hi], e[lo : hi - 1]))
    values, mult = group_eigenvalues(np.concatenate(eig))
    return Spectrum(level=m, values=values, multiplicities=mult, provenance="direct")


def oracle_spectrum(params: WeierstrassParams, m: int) -> Spectrum:
    """Closed-form path spectrum ``2 - 2 cos(k pi / nb^m)``, each value nb-1 times.

    Only used to check :func:`direct_spectrum`.
    """
    if m < 1:
        raise ParameterError("Dirichlet spectra need m >= 1")
    n = params.nb**m
    k = np.arange(1, n)
    values = 2.0 - 2.0 * np.cos(k * np.pi / n)
    return Spectrum(
        level=m,
        values=values,
        multiplicities=np.full(n - 1, params.nb - 1),
        provenance="oracle",
    )


# --- spectral decimation ------------------------------------------------------

FORBIDDEN = 2.0


class Child(NamedTuple):
    value: float
    root_index: int
    from_forbidden: bool  # parent was the forbidden value 2


def phi(parent: float, eps: int) -> complex:
    rad = cmath.sqrt((parent - 2.0) ** 2 - 4.0)
    return (-2.0 + parent - eps * rad) / 2.0


def decimate_step(params: WeierstrassParams, parent: float, eps: int) -> list[Child]:
    """Real level-m continuations of a level-(m-1) eigenvalue for one sign ``eps``."""
    if eps not in (-1, 1):
        raise ParameterError(f"eps must be +1 or -1, got {eps!r}")
    if not -1e-12 <= parent <= 4.0 + 1e-12:
        raise ParameterError(f"parent eigenvalue {parent} outside [0, 4]")
    nb = params.nb
    f = phi(parent, eps)
    r, theta = abs(f) ** (1.0 / nb), cmath.phase(f)
    forbidden = abs(parent - FORBIDDEN) <= GROUP_TOL
    out = []
    for k in range(nb):
        z = r * cmath.exp(1j * (theta + 2.0 * math.pi * k) / nb)
        child = (z + 1.0) ** 2 / z
        if abs(child.imag) <= IMAG_TOL:
            out.append(Child(min(max(child.real, 0.0), 4.0), k, forbidden))
    return out


def decimation_forward(child: float, nb: int) -> float:
    """Map a level-m eigenvalue back to its level-(m-1) parent.

    Inverts ``L_child = z + 2 + 1/z`` for z, then ``parent = 2 + z^nb + z^-nb``
    (the two values of phi for +/- eps are reciprocal with sum ``parent - 2``).
    """
    s = child - 2.0
    z = (s + cmath.sqrt(s * s - 4.0)) / 2.0
    w = z**nb
    return float((2.0 + w + 1.0 / w).real)


@dataclass(frozen=True, eq=False)
class DecimationNode:
    value: float
    level: int
    parent: "DecimationNode | None" = None
    epsilon: int = 0  # 0 for newborn nodes
    root_index: int = -1
    is_newborn: bool = False


@dataclass
class LevelReport:
    level: int
    continued: list[float]
    newborn: list[float]
    unreached: list[float]  # direct values not produced by the tree
    spurious: list[float]  # continued values absent from the direct spectrum
    direct: Spectrum | None = None
    stated_claims: list[tuple[str, float, int, int]] = field(default_factory=list)

    @property
    def reconciled(self) -> bool | None:
        if self.direct is None:
            return None
        return not self.unreached and not self.spurious


@dataclass
class DecimationTree:
    nodes: list[DecimationNode]
    reports: list[LevelReport]

    def level(self, m: int) -> list[DecimationNode]:
        return [n for n in self.nodes if n.level == m]

    def values(self, m: int) -> np.ndarray:
        return np.sort([n.value for n in self.level(m)])

    def contains(self, m: int, value: float, tol: float = GROUP_TOL) -> bool:
        return any(abs(n.value - value) <= tol for n in self.level(m))

    def continued_contains(self, m: int, value: float, tol: float = GROUP_TOL) -> bool:
        return any(abs(n.value - value) <= tol and not n.is_newborn for n in self.level(m))


# Multiplicities stated alongside the nb = 3 closed forms, kept as annotations
# to be shown beside the computed ones.
_STATED_NB3: dict[int, list[tuple[str, float, int]]] = {
    1: [("1", 1.0, 2), ("3", 3.0, 2)],
    2: [
        ("1", 1.0, 5),
        ("3", 3.0, 5),
        ("2+cos(pi/9)+sqrt3 sin(pi/9)", 2 + math.cos(math.pi / 9) + math.sqrt(3) * math.sin(math.pi / 9), 4),
        ("2(1+cos(pi/9))", 2 * (1 + math.cos(math.pi / 9)), 4),
    ],
    3: [
        ("1", 1.0, 8),
        ("3", 3.0, 8),
        ("4cos^2(pi/27)", 4 * math.cos(math.pi / 27) ** 2, 4),
        ("4cos^2(pi/54)", 4 * math.cos(math.pi / 54) ** 2, 4),
    ],
    4: [
        ("1", 1.0, 2),
        ("3", 3.0, 2),
        ("4cos^2(pi/81)", 4 * math.cos(math.pi / 81) ** 2, 2**3),
        ("2(1+cos(pi/81))", 2 * (1 + math.cos(math.pi / 81)), 2**3),
    ],
}


def stated_claims(nb: int, m: int) -> list[tuple[str, float, int]]:
    return list(_STATED_NB3.get(m, [])) if nb == 3 else []


def _match(values: np.ndarray, targets: Sequence[float], tol: float) -> np.ndarray:
    """Boolean mask over ``values``: within ``tol`` of some target."""
    if len(targets) == 0 or len(values) == 0:
        return np.zeros(len(values), dtype=bool)
    t = np.sort(np.asarray(targets))
    k = np.clip(np.searchsorted(t, values), 1, len(t) - 1) if len(t) > 1 else np.zeros(len(values), int)
    dist = np.abs(t[k] - values)
    if len(t) > 1:
        dist = np.minimum(dist, np.abs(t[k - 1] - values))
    return dist <= tol


def decimation_tree(params: WeierstrassParams, depth: int) -> DecimationTree:
    """Build the genealogy of Dirichlet eigenvalues from level 1 to ``depth``.

    Level 1 is seeded from the direct spectrum.  At each later level every
    node is continued over both signs and all roots; direct spectrum values
    not reached this way are added as newborn nodes.  Past the eigensolve cap
    only continued values are produced and no reconciliation is made.
    """
    if depth < 1:
        raise ParameterError("depth must be >= 1")
    nb = params.nb
    cap = max_eigensolve_level()

    def solvable(m: int) -> bool:
        return m <= cap and dirichlet_size(nb, m) <= MAX_MATRIX_SIZE

    first = direct_spectrum(params, 1)
    nodes = [DecimationNode(float(v), 1, is_newborn=True) for v in first.values]
    reports = [
        LevelReport(1, [], list(map(float, first.values)), [], [], first, _claims(first, nb, 1))
    ]
    prev = nodes
    for m in range(2, depth + 1):
        children: list[DecimationNode] = []
        for node in prev:
            for eps in (1, -1):
                for c in decimate_step(params, node.value, eps):
                    children.append(DecimationNode(c.value, m, node, eps, c.root_index))
        children.sort(key=lambda n: n.value)
        level_nodes: list[DecimationNode] = []
        for n in children:
            if level_nodes and abs(n.value - level_nodes[-1].value) <= GROUP_TOL:
                continue
            level_nodes.append(n)
        cont = np.array([n.value for n in level_nodes])
        if solvable(m):
            direct = direct_spectrum(params, m)
            reached = _match(direct.values, cont, GROUP_TOL)
            newborn = direct.values[~reached]
            spurious = cont[~_match(cont, direct.values, GROUP_TOL)]
            level_nodes += [DecimationNode(float(v), m, is_newborn=True) for v in newborn]
            level_nodes.sort(key=lambda n: n.value)
            reports.append(
                LevelReport(
                    m,
                    list(map(float, cont)),
                    list(map(float, newborn)),
                    [],
                    list(map(float, spurious)),
                    direct,
                    _claims(direct, nb, m),
                )
            )
        else:
            reports.append(LevelReport(m, list(map(float, cont)), [], [], []))
        nodes += level_nodes
        prev = level_nodes
    return DecimationTree(nodes, reports)


def _claims(direct: Spectrum, nb: int, m: int) -> list[tuple[str, float, int, int]]:
    """(label, value, claimed multiplicity, computed multiplicity)."""
    return [(label, v, k, direct.multiplicity_of(v)) for label, v, k in stated_claims(nb, m)]


def extend_eigenfunction(params: WeierstrassParams, m: int, u_parent, lam_child: float) -> np.ndarray:
    """Extend a level-(m-1) eigenfunction to V_m for the continued eigenvalue ``lam_child``.

    Inside each refined segment the nb-1 new values solve
    ``(2 - L) u_k = u_{k-1} + u_{k+1}`` with the parent values as ends.

    Raises
    ------
    ForbiddenValueError
        ``lam_child`` lies in the Dirichlet spectrum of a segment, so the
        local system is singular.
    """
    if m < 1:
        raise ParameterError("extension needs m >= 1")
    nb = params.nb
    u_parent = np.asarray(u_parent, dtype=float)
    n_parent = (nb - 1) * nb ** (m - 1) + 1
    if u_parent.shape != (n_parent,):
        raise ParameterError(f"parent values must have {n_parent} entries, got {u_parent.shape}")
    k = nb - 1
    local = 2.0 - 2.0 * np.cos(np.arange(1, nb) * np.pi / nb)
    if np.any(np.abs(local - lam_child) <= GROUP_TOL):
        raise ForbiddenValueError(
            f"eigenvalue {lam_child} is a forbidden value for {k}-point segments"
        )
    ab = np.empty((3, k))
    ab[0] = -1.0
    ab[1] = 2.0 - lam_child
    ab[2] = -1.0
    rhs = np.zeros((k, n_parent - 1))
    rhs[0] += u_parent[:-1]
    rhs[-1] += u_parent[1:]
    inner = solve_banded((1, 1), ab, rhs)
    out = np.empty((nb - 1) * nb**m + 1)
    out[::nb] = u_parent
    for r in range(k):
        out[r + 1 :: nb] = inner[r]
    return out


def eigen_residual(u: np.ndarray, lam: float, nb: int, m: int) -> np.ndarray:
    """``Delta_m u + L u`` at every interior vertex."""
    lap = u[:-2] + u[2:] - 2.0 * u[1:-1]
    res = lap + lam * u[1:-1]
    keep = np.ones(len(res), dtype=bool)
    keep[[i * nb**m - 1 for i in range(1, nb - 1)]] = False
    return res[keep]


# --- counting function and Weyl ratios --------------------------------------


def scale_factor(params: WeierstrassParams, m: int, scale: Scale) -> float:
    if scale == "none":
        return 1.0
    if scale == "paper":
        return params.eta * params.nb**m
    raise ParameterError(f"unknown counting scale {scale!r}")


def count_below(spectrum: Spectrum, x, factor: float = 1.0):
    """Eigenvalues (with multiplicity) whose scaled value is <= x."""
    cum = np.concatenate([[0], np.cumsum(spectrum.multiplicities)])
    # tolerate rounding at the eigenvalues themselves
    idx = np.searchsorted(spectrum.values * factor, np.asarray(x) * (1 + 1e-12), side="right")
    return cum[idx]


def counting_function(
    params: WeierstrassParams,
    m: int,
    x: float,
    scale: Scale = "none",
    spectrum: Spectrum | None = None,
) -> int:
    spectrum = spectrum if spectrum is not None else direct_spectrum(params, m)
    return int(count_below(spectrum, x, scale_factor(params, m, scale)))


def scaled_top(params: WeierstrassParams, m: int, scale: Scale = "paper") -> float:
    """The bracket value ``4 * eta * nb^m`` (or 4 unscaled) above every eigenvalue."""
    return 4.0 * scale_factor(params, m, scale)


def renormalization_sequence(params: WeierstrassParams, levels: Sequence[int]) -> list[tuple[int, float]]:
    """``eta^-2 nb^((5 - 2 D_W) m)``; grows without bound since the exponent is positive."""
    e = 5.0 - 2.0 * params.d_w
    return [(m, params.nb ** (e * m) / params.eta**2) for m in levels]


@dataclass
class WeylTable:
    rows: list[tuple[int, int, float, float]]  # (m, N_total, ln N / m, ln(N_m / N_{m-1}))
    samples: list[tuple[float, int, float]]  # (x, N(x), N(x)/x) at the top level, top decade
    overlay: list[tuple[int, float, float]]  # (m, ln x - m ln nb, N(x)/x)
    periodicity: list[tuple[int, float]]  # (m, max relative gap between levels m and m+1)


def periodicity_gap(
    params: WeierstrassParams,
    m: int,
    scale: Scale = "paper",
    n_samples: int = 64,
    spectra: dict[int, Spectrum] | None = None,
) -> float:
    """Max relative difference of N(x)/x at level m and N(nb x)/(nb x) at level m+1,
    over the top decade of the level-m scaled spectrum."""
    spectra = spectra or {}
    s0 = spectra.get(m) or direct_spectrum(params, m)
    s1 = spectra.get(m + 1) or direct_spectrum(params, m + 1)
    f0, f1 = scale_factor(params, m, scale), scale_factor(params, m + 1, scale)
    top = s0.values[-1] * f0
    # start no lower than the first eigenvalue so N(x)/x stays positive
    xs = np.geomspace(max(top / 10.0, s0.values[0] * f0), top, n_samples)
    r0 = count_below(s0, xs, f0) / xs
    r1 = count_below(s1, params.nb * xs, f1) / (params.nb * xs)
    return float(np.max(np.abs(r1 - r0) / r0))


def weyl_analysis(
    params: WeierstrassParams,
    m_range: Sequence[int],
    scale: Scale = "paper",
    n_samples: int = 64,
) -> WeylTable:
    """Growth of the eigenvalue count and the data for the periodic Weyl factor."""
    levels = sorted(m_range)
    spectra = {m: direct_spectrum(params, m) for m in levels}
    rows = []
    prev = None
    for m in levels:
        n = spectra[m].total
        step = math.log(n / prev) if prev else math.nan
        rows.append((m, n, math.log(n) / m, step))
        prev = n
    top_m = levels[-1]
    f = scale_factor(params, top_m, scale)
    top = spectra[top_m].values[-1] * f
    xs = np.geomspace(top / 10.0, top, n_samples)
    counts = count_below(spectra[top_m], xs, f)
    samples = [(float(x), int(c), float(c / x)) for x, c in zip(xs, counts)]
    overlay = []
    for m in levels:
        fm = scale_factor(params, m, scale)
        xm = np.geomspace(spectra[m].values[0] * fm, spectra[m].values[-1] * fm, n_samples)
        cm = count_below(spectra[m], xm, fm)
        for x, c in zip(xm, cm):
            overlay.append((m, float(math.log(x) - m * math.log(params.nb)), float(c / x)))
    gaps = [
        (m, periodicity_gap(params, m, scale, n_samples, spectra))
        for m in levels
        if m + 1 in spectra
    ]
    return WeylTable(rows, samples, overlay, gaps)

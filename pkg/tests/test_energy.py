import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wlab import energy as en
from wlab import geometry as g
from wlab.errors import BoundaryVertexError, ParameterError


@pytest.fixture(scope="module")
def p():
    return g.make_params(0.5, 3)


def test_normalizations(p):
    assert en.normalization(p, "paper").r_inverse == pytest.approx(3 / 0.25, rel=1e-13)
    assert en.normalization(p, "conservative").r_inverse == 3.0
    with pytest.raises(ParameterError):
        en.normalization(p, "nope")


def test_energy_of_constant_is_zero(p):
    assert en.energy(p, 2, np.full(19, 4.2)) == 0.0


def test_energy_rejects_bad_input(p):
    with pytest.raises(ParameterError):
        en.energy(p, 1, np.ones(6))
    u = np.ones(7)
    u[3] = np.nan
    with pytest.raises(ParameterError, match="missing"):
        en.energy(p, 1, u)


def test_harmonic_extension_is_linear(p):
    u = en.harmonic_extend(p, 1, [0.0, 0.5, 1.0])
    np.testing.assert_allclose(u, np.arange(7) / 6, atol=1e-15)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=7, max_size=7))
def test_extension_restricts_and_minimizes(vals):
    q = g.make_params(0.5, 3)
    u = np.array(vals)
    v = en.harmonic_extend(q, 2, u)
    np.testing.assert_allclose(v[::3], u)
    # unweighted sum drops by exactly nb; so conservative energy is preserved
    assert en.energy(q, 2, v, "conservative") == pytest.approx(en.energy(q, 1, u, "conservative"), rel=1e-9, abs=1e-12)
    # any perturbation off V_1 raises the energy
    w = v.copy()
    w[1] += 0.01
    assert en.energy(q, 2, w) > en.energy(q, 2, v)


@pytest.mark.parametrize("nb", [3, 4, 5])
def test_level_ratio_paper_mode(nb):
    q = g.make_params(0.6, nb)
    b = np.linspace(0, 1, nb) ** 2
    es = [en.energy(q, m, en.dirichlet_solve(q, m, b)) for m in range(4)]
    for a, c in zip(es, es[1:]):
        assert c / a == pytest.approx(nb ** (4 - 2 * q.d_w), rel=1e-10)


def test_dirichlet_solve_matches_iterated_extension(p):
    u = en.dirichlet_solve(p, 0, [1.0, -2.0, 3.0])
    for m in range(1, 5):
        u = en.harmonic_extend(p, m, u)
        np.testing.assert_allclose(u, en.dirichlet_solve(p, m, [1.0, -2.0, 3.0]), atol=1e-12)


def test_laplacian(p):
    u = np.arange(7.0) ** 2
    lap = en.laplacian(p, 1, u)
    assert np.isnan(lap[[0, 3, 6]]).all()
    np.testing.assert_allclose(lap[[1, 2, 4, 5]], 2.0)
    assert en.laplacian_apply(p, 1, u, 2) == 2.0
    with pytest.raises(BoundaryVertexError):
        en.laplacian_apply(p, 1, u, 3)
    with pytest.raises(ParameterError):
        en.laplacian_apply(p, 1, u, 7)


def test_spline_integrals(p):
    vals = [en.spline_integral(p, k, 1) for k in (1, 2, 4, 5)]
    assert vals[0] == pytest.approx(vals[3], rel=1e-12)
    assert vals[1] == pytest.approx(vals[2], rel=1e-12)
    assert all(v > 0 for v in vals)
    # tents at level m sum to 1, so the integrals (with the boundary tents) sum to 1
    total = sum(en.integrate(p, 4, en.tent(p, 1, k, 3)) for k in range(7))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_pointwise_laplacian_of_harmonic(p):
    for m in range(1, 5):
        u = en.dirichlet_solve(p, m, [0.3, -1.0, 2.0])
        for k in range(1, len(u) - 1):
            if k % 3**m:
                assert abs(en.pointwise_laplacian(p, u, k, m)) <= 1e-10


def test_pointwise_laplacian_callable(p):
    val = en.pointwise_laplacian(p, lambda x, y: x, 1, 1)
    assert abs(val) < 1e-10


def test_laplacian_table_diagnostic(p):
    rows = en.pointwise_laplacian_table(p, lambda x, y: x**2, 1 / 3, [1, 2, 3], "conservative")
    assert [r.level for r in rows] == [1, 2, 3]
    assert math.isnan(rows[0].ratio)
    with pytest.raises(ParameterError):
        en.pointwise_laplacian_table(p, lambda x, y: x, 0.1, [1])


def test_resistance_level0(p):
    # two unit edges in series between P0 and P2
    assert en.resistance(p, 0, 0, 2) == pytest.approx(2 * p.eta**2, rel=1e-12)
    assert en.resistance(p, 0, 0, 1) == pytest.approx(p.eta**2, rel=1e-12)
    assert en.resistance(p, 3, 5, 5) == 0.0


def test_resistance_is_path_length(p):
    # on a chain the resistance is (number of edges) / weight
    m = 2
    w = en.energy_weight(p, m)
    for i, j in [(0, 18), (3, 7), (10, 2)]:
        assert en.resistance(p, m, i, j) == pytest.approx(abs(i - j) / w, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 54), st.integers(0, 54), st.integers(0, 54))
def test_resistance_metric(i, j, k):
    q = g.make_params(0.5, 3)
    r = lambda a, b: en.resistance(q, 3, a, b)
    assert r(i, j) == pytest.approx(r(j, i))
    assert r(i, k) <= r(i, j) + r(j, k) + 1e-9


def test_resistance_between_coordinates(p):
    assert en.resistance_between(p, 1, g.fixed_point(p, 0), g.fixed_point(p, 1)) == pytest.approx(
        en.resistance(p, 1, 0, 3)
    )


def test_resistance_dimension_cases():
    d = en.resistance_dimension(g.make_params(0.5, 3))
    assert d.case == "i"
    assert d.d == pytest.approx(math.log(6) / math.log(12), abs=1e-12)
    d2 = en.resistance_dimension(g.make_params(0.25, 3, strict=False))
    assert d2.case == "ii"
    assert d2.d == pytest.approx(0.567582, abs=1e-6)
    with pytest.raises(ParameterError):
        en.resistance_dimension(g.make_params(1 / 3, 3, strict=False))
    assert en.spectral_exponent(1.0) == 0.5

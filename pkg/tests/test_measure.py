import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wlab import geometry as g
from wlab import measure as ms
from wlab.errors import ParameterError


@pytest.fixture(scope="module")
def p():
    return g.make_params(0.5, 3)


def shoelace(v):
    x, y = np.asarray(v).T
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def test_base_triangle_area(p):
    # P0 = (0, 2), P1 = (1/2, -2), P2 = (1, 2): base 1, height 4
    assert ms.polygon_area(g.polygons(p, 0)[0]) == pytest.approx(2.0, abs=1e-14)


def test_area_against_shoelace(p):
    for poly in g.polygons(p, 2):
        assert ms.polygon_area(poly) == pytest.approx(shoelace(poly.vertices), rel=1e-12)


def test_convex_quadrilateral_fan():
    sq = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], float)
    assert ms.polygon_area(sq) == pytest.approx(1.0)


def test_degenerate_polygon_warns():
    with pytest.warns(ms.DegeneratePolygonWarning):
        assert ms.polygon_area(np.array([[0, 0], [1, 1], [2, 2]], float)) == 0.0
    with pytest.raises(ParameterError):
        ms.polygon_area(np.zeros((2, 2)))


def test_weights(p):
    w = ms.measure_weights(p)
    np.testing.assert_allclose(w.raw, [7 / 48, 5 / 24, 7 / 48], rtol=1e-12)
    np.testing.assert_allclose(w.normalized, [7 / 24, 5 / 12, 7 / 24], rtol=1e-12)
    assert math.fsum(w.normalized) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ParameterError):
        w.select("other")


def test_level_one_cells_match_areas(p):
    base = ms.polygon_area(g.polygons(p, 0)[0])
    for poly in g.polygons(p, 1):
        assert ms.cell_measure(p, poly.word, "raw") == pytest.approx(ms.polygon_area(poly) / base)


@pytest.mark.parametrize("m", range(0, 9))
def test_partition_of_unity(p, m):
    assert ms.cell_measures(p, m).sum() == pytest.approx(1.0, abs=1e-10)


@given(st.lists(st.integers(0, 2), max_size=6))
def test_cell_measure_is_product(word):
    q = g.make_params(0.5, 3)
    w = ms.measure_weights(q).normalized
    want = math.prod(w[i] for i in word)
    assert ms.cell_measure(q, word) == pytest.approx(want, rel=1e-12)
    j = g.index_of_word(word, 3)
    assert ms.cell_measures(q, len(word))[j] == pytest.approx(want, rel=1e-12)


def test_cell_vertex_indices():
    np.testing.assert_array_equal(ms.cell_vertex_indices(3, 1), [[0, 1, 2], [2, 3, 4], [4, 5, 6]])


@settings(max_examples=20, deadline=None)
@given(st.floats(0.4, 0.9), st.integers(3, 5), st.integers(0, 4))
def test_constants_integrate_exactly(lam, nb, m):
    q = g.make_params(lam, nb)
    n = (nb - 1) * nb**m + 1
    assert ms.integrate(q, m, np.ones(n)) == pytest.approx(1.0, abs=1e-12)
    assert ms.integrate(q, m, np.full(n, 2.5), kappa=1.0) == pytest.approx(2.5 * nb, abs=1e-11)


def test_integrate_shape_check(p):
    with pytest.raises(ParameterError):
        ms.integrate(p, 1, np.ones(5))

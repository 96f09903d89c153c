# ThetaBlocks, AGPL-3.0 license
import random
from fractions import Fraction
from math import isqrt

import hypothesis.strategies as st
import pytest
from hypothesis import given

from hull import check_multiplicativity, random_laurent
from models.common import FJSeries, SeriesError, fj_exact_div
from models.theta import ThetaBlockSpec, build_theta_block, ord_profile, ord_value
from utils.valuation import (
    SupportHull,
    hull_of_points,
    hull_of_support,
    minkowski_sum,
    ord_via_hull,
    series_valuation_1d,
)


def laurent(recession):
    n = st.integers(0 if recession else -3, 3).map(lambda x: 24 * x)
    r = st.integers(-3, 3).map(lambda x: 2 * x)
    coeffs = st.dictionaries(st.tuples(n, r), st.integers(-3, 3).filter(bool), min_size=1, max_size=5)
    return coeffs.map(FJSeries.from_coefficients)


def _window(spec):
    # q-order past which no extreme point of the support hull can appear
    t, v = spec.t, spec.v
    return int(v + Fraction(t, 4) + isqrt(int(t * v)) + 2)


@given(laurent(False), laurent(False))
def test_laurent_multiplicative(f, g):
    assert hull_of_support(f * g, recession=False) == minkowski_sum(
        hull_of_support(f, recession=False), hull_of_support(g, recession=False)
    )


@given(laurent(True), laurent(True))
def test_jacobi_multiplicative(f, g):
    assert hull_of_support(f * g) == minkowski_sum(hull_of_support(f), hull_of_support(g))


def test_check_multiplicativity():
    assert check_multiplicativity(50, seed=1, recession=False) == 0
    assert check_multiplicativity(50, seed=2, recession=True) == 0
    assert not random_laurent(random.Random(0), recession=True).is_zero


def test_hull_of_points():
    square = [(0, 0), (0, 1), (1, 0), (1, 1), (Fraction(1, 2), Fraction(1, 2))]
    assert len(hull_of_points(square, recession=False)) == 4
    # with the ray only the lowest n per r survives
    h = hull_of_points([(2, 0), (1, 1), (1, -1), (5, 3)])
    assert h.points == ((1, -1), (1, 1), (5, 3))
    assert h.below(1) == ((1, -1), (1, 1))
    assert str(hull_of_points([(0, 0)])) == "conv{(0, 0)} + ray(1, 0)"
    with pytest.raises(ValueError):
        hull_of_points([])


def test_hull_rejects():
    with pytest.raises(SeriesError):
        hull_of_support(FJSeries.zero())
    a, b = hull_of_points([(0, 0)]), hull_of_points([(0, 0)], recession=False)
    with pytest.raises(ValueError):
        minkowski_sum(a, b)
    with pytest.raises(ValueError):
        ord_via_hull(b, 0)


def test_json():
    h = SupportHull(((0, Fraction(1, 2)),), recession=False)
    assert h.to_json() == {"points": [["0", "1/2"]], "recession": False}


@pytest.mark.parametrize("u, d", [(18, (1, 1)), (12, (1, 1, 2, 2)), (15, (1, 1, 2)), (12, (1, 1, 1, 3))])
def test_ord_matches_formula(u, d):
    spec = ThetaBlockSpec(u, d)
    h = hull_of_support(build_theta_block(spec, _window(spec)))
    xs = set(ord_profile(spec).argmin) | {Fraction(0), Fraction(1, 3), Fraction(1, 2)}
    for x in xs:
        assert ord_via_hull(h, x) + spec.t * x * x == ord_value(spec, x)


def test_phi10_hull():
    h = hull_of_support(build_theta_block(ThetaBlockSpec(18, (1, 1)), 4))
    assert (1, -1) in h.points and (1, 1) in h.points
    assert ord_via_hull(h, Fraction(1, 2)) == Fraction(1, 2)


def test_series_valuation():
    assert series_valuation_1d(FJSeries.monomial(-12)) == Fraction(-1, 2)
    with pytest.raises(SeriesError):
        series_valuation_1d(FJSeries.zero())


@pytest.mark.parametrize("u, d", [(18, (1, 1)), (12, (1, 1, 2, 2))])
def test_truncation_stability(u, d):
    # extreme points of the wider hull that lie inside the narrow window are extreme for the narrow one
    spec = ThetaBlockSpec(u, d)
    narrow = hull_of_support(build_theta_block(spec, 3))
    wide = hull_of_support(build_theta_block(spec, 6))
    assert set(wide.below(3)) <= set(narrow.points)


@pytest.mark.parametrize("u, d", [(18, (1, 1)), (12, (1, 1, 2, 2)), (12, (1, 1, 1, 1)), (0, (1,) * 8)])
def test_dilation_quotient_keeps_hull(u, d):
    # hull(phi(2 tau, 2z) / phi) = 2 hull(phi) - hull(phi) = hull(phi)
    spec = ThetaBlockSpec(u, d)
    phi = build_theta_block(spec, _window(spec))
    quotient = fj_exact_div(phi.dilate(2, 2), phi)
    assert quotient.trunc == phi.trunc
    h, hq = hull_of_support(phi), hull_of_support(quotient)
    for x in set(ord_profile(spec).argmin) | {Fraction(0), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)}:
        assert ord_via_hull(hq, x) == ord_via_hull(h, x)

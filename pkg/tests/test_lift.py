# ThetaBlocks, AGPL-3.0 license
from fractions import Fraction

import mpmath
import pytest

from models.common import FJSeries, SeriesError, TruncationError
from models.lift import (
    FJExpansion,
    apply_Vm,
    eisenstein_series,
    grit_coefficient,
    grit_expansion_for_spec,
    grit_fj_expansion,
    hecke_weight_factor,
)
from models.theta import ThetaBlockSpec, build_theta_block


def test_hecke_weight_factor():
    assert hecke_weight_factor(2, 10) == 512
    assert hecke_weight_factor(3, 0) == Fraction(1, 3)
    assert hecke_weight_factor(2, 1) == 1


def test_v1_is_identity(phi10):
    assert apply_Vm(phi10, 10, 1) == phi10


def test_v2(phi10):
    f = apply_Vm(phi10, 10, 2)
    assert f.trunc == 2 * 24
    # c(n, r; phi|V_2) = c(2n, r) + 2^9 c(n/2, r/2)
    assert f.coeff(1, 1) == phi10.coeff(2, 1)
    assert f.coeff(2, 2) == phi10.coeff(4, 2) + 512 * phi10.coeff(1, 1)
    assert f.coeff(2, 1) == phi10.coeff(4, 1)


def test_vm_rejects(phi10):
    with pytest.raises(ValueError):
        apply_Vm(phi10, 10, 0)
    with pytest.raises(SeriesError):
        apply_Vm(FJSeries.monomial(3, 1), 1, 2)


def test_eisenstein():
    g = eisenstein_series(4, 3)
    assert [g.coeff(n, 0) for n in range(4)] == [Fraction(1, 240), 1, 9, 28]
    assert eisenstein_series(6, 0).coeff(0, 0) == Fraction(-1, 504)
    with pytest.raises(ValueError):
        eisenstein_series(5, 2)


def test_grit_coefficient_matches_expansion():
    spec = ThetaBlockSpec(18, (1, 1))
    grit = grit_expansion_for_spec(spec, 3, 2)
    phi = build_theta_block(spec, 6)
    assert grit.indices == (1, 2, 3)
    for m, f in grit:
        for q, z2, c in f.coefficients():
            assert grit_coefficient(phi, spec.k, spec.t, (q // f.qden, z2 // 2, m)) == c


def test_igusa_chi10():
    # Grit(phi_10,1) = chi_10
    spec = ThetaBlockSpec(18, (1, 1))
    phi = build_theta_block(spec, 4)
    assert grit_coefficient(phi, 10, 1, (1, 1, 1)) == 1
    assert grit_coefficient(phi, 10, 1, (1, 0, 1)) == -2
    assert grit_coefficient(phi, 10, 1, (2, 2, 1)) == -2
    assert grit_coefficient(phi, 10, 1, (2, 0, 2)) == phi.coeff(4, 0) + 512 * phi.coeff(1, 0)


def test_eisenstein_branch():
    # c(0,0) != 0 adds the Eisenstein entry at m = 0, which needs even weight >= 4
    phi = FJSeries.monomial(0, 0, 1, trunc=24 * 4)
    exp = grit_fj_expansion(phi, 4, 1, 1, 2)
    assert exp.indices == (0, 1)
    assert exp.entry(0).coeff(1, 0) == 1
    with pytest.raises(ValueError):
        grit_fj_expansion(phi, 5, 1, 1, 2)


def test_window_too_small(phi10):
    with pytest.raises(TruncationError):
        grit_fj_expansion(phi10, 10, 1, 3, 2)  # phi|V_3 is known to q^1 only


def test_expansion_container():
    f = FJSeries.one()
    exp = FJExpansion(1, 10, ((1, f), (2, f)))
    assert 2 in exp and exp.entry(1) == f
    assert exp.to_json()["entries"][1]["index"] == 2
    with pytest.raises(KeyError):
        exp.entry(3)
    with pytest.raises(ValueError):
        FJExpansion(1, 10, ((2, f), (1, f)))


@pytest.mark.parametrize("k", [4, 6, 8, 10, 12])
def test_eisenstein_constant(k):
    # -B_k / (2k) = (k - 1)! zeta(k) / (2 pi i)^k
    c = eisenstein_series(k, 0).coeff(0, 0)
    with mpmath.workdps(30):
        value = mpmath.factorial(k - 1) * mpmath.zeta(k) / (2j * mpmath.pi) ** k
        assert mpmath.almosteq(value.real, mpmath.mpf(c.numerator) / c.denominator, rel_eps=mpmath.mpf(10) ** -25)
        assert abs(value.imag) < mpmath.mpf(10) ** -25


@pytest.mark.parametrize(
    "u, d", [(18, (1, 1)), (12, (1, 1, 1, 1)), (12, (1, 1, 2, 2)), (0, (1,) * 8), (36, (1, 1, 1, 1))]
)
@pytest.mark.parametrize("m", [2, 3])
def test_vm_keeps_support_condition(u, d, m):
    # phi|V_m has index m t and stays on 4 m t n - r^2 >= 0
    spec = ThetaBlockSpec(u, d)
    f = apply_Vm(build_theta_block(spec, 6), spec.k, m)
    assert not f.is_zero
    assert f.min_discriminant(m * spec.t) >= 0

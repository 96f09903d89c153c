# ThetaBlocks, AGPL-3.0 license
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, seed

from models.borcherds import (
    BorcherdsData,
    HumbertClass,
    borch_expansion_for_spec,
    borcherds_data,
    build_psi,
    build_psi_division,
    build_psi_product,
    canonical_r,
    compare_fj,
    fj_psi_window,
    humbert_divisor,
    humbert_multiplicity,
    invariance_violations,
    pole_bound,
    singular_table,
    theta_block_from_row,
    weyl_vector,
)
from models.common import FJSeries, TruncationError
from models.lift import FJExpansion, grit_expansion_for_spec
from models.theta import Classification, ThetaBlockSpec, classify_theta_block, random_theta_block
from utils.general import ROOT, parse_ints, yaml_load
from verify import corpus_specs

GOLDEN = yaml_load(ROOT / "data" / "golden.yaml")
CORPUS = corpus_specs()  # fixed specs plus the seeded random ones


# eta^(24v - 3l) prod theta_d of integral order v and integral index, holomorphic or not
random_specs = st.builds(random_theta_block, st.randoms(use_true_random=False))


def _spec(row):
    return ThetaBlockSpec(int(row["u"]), tuple(row["d"]))


def _psi(spec):
    return build_psi(spec, max(2, int(spec.t) // 4))


def test_helpers():
    assert [pole_bound(v) for v in (1, 2, 3, 5)] == [0, 1, 1, 2]
    assert [canonical_r(r, 5) for r in (5, 6, -5, -4, 15)] == [5, -4, 5, -4, 5]
    assert fj_psi_window(3, 1, 0, 2) == 4
    assert fj_psi_window(0, 5, 0, 1) == 0


def test_psi_phi10():
    psi = build_psi(ThetaBlockSpec(18, (1, 1)), 1)
    assert [psi.coeff(0, r) for r in (-1, 0, 1)] == [2, 20, 2]
    assert psi.coeff(1, 0) == 216
    assert psi.is_integral()


@pytest.mark.parametrize("spec", CORPUS, ids=str)
def test_psi_routes_agree(spec):
    assert build_psi_product(spec, 6) == build_psi_division(spec, 6)


def test_psi_rejects():
    with pytest.raises(ValueError):
        build_psi(ThetaBlockSpec(21, (1,)), 2)  # t = 1/2
    with pytest.raises(ValueError):
        build_psi(ThetaBlockSpec(-24), 2)  # v < 1
    with pytest.raises(ValueError):
        build_psi(ThetaBlockSpec(18, (1, 1)), 2, route="sum")


@pytest.mark.parametrize("row", GOLDEN["levels"], ids=lambda r: r["name"])
def test_golden_singular(row):
    spec = _spec(row)
    table = singular_table(_psi(spec), spec.t, pole_bound(spec.v))
    assert table.representative() == {parse_ints(k): v for k, v in row["singular"].items()}


@pytest.mark.parametrize("row", GOLDEN["levels"], ids=lambda r: r["name"])
def test_golden_divisor(row):
    spec = _spec(row)
    divisor = humbert_divisor(singular_table(_psi(spec), spec.t, pole_bound(spec.v)))
    assert {(h.D, h.r): h.multiplicity for h in divisor} == {parse_ints(k): v for k, v in row["divisor"].items()}
    assert [h.D for h in divisor] == sorted((h.D for h in divisor), reverse=True)


@pytest.mark.parametrize("row", GOLDEN["levels"], ids=lambda r: r["name"])
def test_golden_data(row):
    spec = _spec(row)
    psi = _psi(spec)
    data = borcherds_data(psi, spec.t, spec.v)
    assert data.character_trivial and data.holomorphic
    assert data.C == spec.t  # leading Fourier-Jacobi index 1
    assert data.D1 == 0
    assert theta_block_from_row(psi) == spec


def test_weyl_vector_level5():
    spec = ThetaBlockSpec(12, (1, 1, 2, 2))
    assert weyl_vector(_psi(spec)) == (1, 3, 5)
    data = borcherds_data(_psi(spec), 5, 1)
    assert data.weight == 8
    assert data.to_json()["characterTrivial"] is True


@pytest.mark.parametrize("spec", CORPUS, ids=str)
def test_corpus_identity(spec):
    # t A - t D1 - C = 0 holds or borcherds_data raises
    psi = build_psi(spec, int(spec.t) // 4)
    data = borcherds_data(psi, spec.t, spec.v)
    assert isinstance(data, BorcherdsData)
    assert data.weight == Fraction(psi.coeff(0, 0), 2)
    assert spec.t * data.A - spec.t * data.D1 == data.C


def test_family_v2_pole():
    psi = build_psi(ThetaBlockSpec(42, (1, 1)), 0)
    assert psi.valuation == -24
    data = borcherds_data(psi, 1, 2)
    assert data.weight == 475 and data.D0 % 2 == 1 and not data.symmetric


def test_singular_window():
    with pytest.raises(TruncationError):
        singular_table(build_psi(ThetaBlockSpec(12, (1, 1, 2, 2)), 0), 5, 0)


def test_humbert_class():
    h = HumbertClass(5, 5, 5, 2)
    assert str(h) == "2H_5(5,5)" and h.primitive == (1, 5, 1)
    assert h.to_json()["T0"] == [1, 5, 1]
    assert str(HumbertClass(1, 1, 1, 1)) == "H_1(1,1)"


def test_humbert_multiplicity_sums_multiples():
    # H_37(1, 1) collects c(0, n) for n = 1..5 through the class table
    spec = ThetaBlockSpec(-6, (1, 1, 1, 2, 2, 2, 3, 3, 4, 5))
    table = singular_table(_psi(spec), 37, 0)
    assert humbert_multiplicity(table, 1, 1) == 3 + 3 + 2 + 1 + 1
    assert str(table).startswith("q^6ζ^30")


def test_grit_equals_borch():
    spec = ThetaBlockSpec(18, (1, 1))
    borch = borch_expansion_for_spec(spec, 3, 3)
    grit = grit_expansion_for_spec(spec, 3, 3)
    assert borch.indices == (1, 2, 3)
    assert compare_fj(borch, grit, 3).equal


@pytest.mark.parametrize("u, d", [(18, (1, 1)), (12, (1, 1, 1, 1)), (12, (1, 1, 2, 2))])
def test_exp_equals_product(u, d):
    spec = ThetaBlockSpec(u, d)
    a = borch_expansion_for_spec(spec, 2, 2)
    b = borch_expansion_for_spec(spec, 2, 2, method="product")
    assert compare_fj(a, b, 2).equal


def test_compare_reports_mismatch():
    f = FJSeries({24: {2: 1}}, trunc=48)
    a = FJExpansion(1, 10, ((1, f),))
    b = FJExpansion(1, 10, ((1, f + FJSeries.monomial(48, 0, 3, trunc=48)), (2, f)))
    cmp = compare_fj(a, b, 2)
    assert not cmp.equal
    assert cmp.checks[0].status == "mismatch" and cmp.checks[0].location == (2, 0, 0, 3)
    assert cmp.checks[1].status == "missing"
    assert "m=1: mismatch at q^2 zeta^0 (0 != 3)" in str(cmp)


def test_fjmax_below_leading_index():
    with pytest.raises(ValueError):
        borch_expansion_for_spec(ThetaBlockSpec(18, (1, 1)), 0, 2)


@pytest.mark.parametrize("spec", CORPUS, ids=str)
def test_psi_jacobi_invariance(spec):
    # c(n, r) = c(n, -r) = c(n + lr + l^2 t, r + 2lt)
    assert invariance_violations(build_psi(spec, 4), spec.t) == []


def test_invariance_reports_breaks():
    psi = build_psi(ThetaBlockSpec(18, (1, 1)), 2)
    broken = psi + FJSeries.monomial(24, 2, 1, trunc=psi.trunc)  # c(1, 1) += 1 only
    assert (1, 1) in invariance_violations(broken, 1)
    assert invariance_violations(psi, 1) == []


@pytest.mark.parametrize(
    "spec",
    [s for s in CORPUS if s.v % 2 == 0 or classify_theta_block(s) in {Classification.CUSP, Classification.HOLOMORPHIC}],
    ids=str,
)
def test_singular_nonnegative(spec):
    # strictly singular coefficients, 4tn - r^2 < 0, of psi are nonnegative
    t = int(spec.t)
    table = singular_table(build_psi(spec, max(4, t // 4)), t, pole_bound(spec.v))
    assert {k: c for k, c in table.rows.items() if k[0] < 0 and c < 0} == {}


def test_theta1_8_boundary():
    # phi = theta_1^8 is holomorphic, not cusp: psi has c(1, 4) = -8 on 4tn - r^2 = 0
    spec = ThetaBlockSpec(0, (1,) * 8)
    psi = build_psi(spec, 2)
    table = singular_table(psi, 4, pole_bound(1))
    assert psi.coeff(1, 4) == table.get(0, 4) == -8
    assert not table.holomorphic
    assert all(c >= 0 for (D, _), c in table.rows.items() if D < 0)
    assert all(h.D > 0 for h in humbert_divisor(table))


@seed(20261017)
@given(random_specs)
def test_random_spec_identity(spec):
    # t A - t D1 - C = 0 beyond the corpus; borcherds_data raises otherwise
    t = int(spec.t)
    data = borcherds_data(build_psi(spec, max(1, t // 4)), t, spec.v)
    assert t * data.A - t * data.D1 == data.C

# ThetaBlocks, AGPL-3.0 license
import json

import pytest

import verify
from verify import Case, VerificationReport, identity37_reduced, identity37_terms, run_case


def test_report_json():
    r = VerificationReport("weights", "weights/v=1", "(10, 2)", "(10, 2)", True, 1.5, "k = c(0,0)/2")
    assert r.to_json() == {
        "suite": "weights",
        "caseId": "weights/v=1",
        "expected": "(10, 2)",
        "computed": "(10, 2)",
        "pass": True,
    }
    assert r.to_json(timings=True, refs=True)["runtimeMs"] == 1.5
    assert r.to_json(refs=True)["ref"] == "k = c(0,0)/2"


def test_run_case():
    ok = run_case(Case("s", "s/ok", lambda: ({(1, 2): 3}, {(1, 2): 3})))
    assert ok.passed and ok.expected == "{(1, 2): 3}"

    def boom():
        raise ArithmeticError("no")

    bad = run_case(Case("s", "s/bad", boom))
    assert not bad.passed and bad.computed == "ArithmeticError: no"
    with pytest.raises(ArithmeticError):
        run_case(Case("s", "s/bad", boom), hard_fail=True)


def test_identity37_terms():
    for n, r in [(0, 1), (3, -7), (-2, 15)]:
        for alpha, D in identity37_terms(n, r):
            assert D == 148 * (6 * alpha * alpha + n * alpha) - (30 * alpha + r) ** 2 > 0
    assert identity37_terms(0, 0) == []


def test_weights():
    reports = verify.verify_weight_table(vmax=3)
    assert [r.case_id for r in reports] == ["weights/v=1", "weights/v=2", "weights/v=3"]
    assert all(r.passed for r in reports)
    with pytest.raises(ValueError):
        verify.weight_cases(11)


def test_parity_suite():
    assert all(r.passed for r in verify.verify_parity(pmax=8, threads=2))


def test_identity37():
    # no cap: the form is expanded as far as the grid reads
    reports = verify.verify_index37_identity(nmax=2, rmax=6)
    assert len(reports) == 5 * 13
    assert all(r.passed for r in reports), [r.case_id for r in reports if not r.passed]


def test_identity37_full_grid():
    cases = verify.identity37_cases(5, 20, 12)
    assert len(cases) == 11 * 41 == 451
    need = max(nn for n in range(-5, 6) for r in range(-20, 21) for nn, _ in identity37_reduced(n, r))
    assert 500 < need < 560


def test_identity37_capped_window():
    reports = verify.run_cases(verify.identity37_cases(5, 20, 12))
    not_run = [r for r in reports if r.computed.startswith("NOT-RUN")]
    assert len(not_run) == 376
    assert not any(r.passed for r in not_run)
    assert all(r.passed for r in reports if r not in not_run)


def test_identity37_reduced():
    for n, r in [(0, 1), (3, -7), (-5, 20)]:
        for (alpha, D), (nn, rr) in zip(identity37_terms(n, r), identity37_reduced(n, r)):
            assert -37 < rr <= 37 and (rr - 30 * alpha - r) % 74 == 0
            assert 148 * nn - rr * rr == D


def test_corpus_specs():
    specs = verify.corpus_specs()
    assert len(specs) == len(set(specs)) > 28
    assert all(s.integral_order and s.v >= 1 and s.two_t % 2 == 0 for s in specs)
    assert specs == verify.corpus_specs()  # seeded


def test_corpus_suite():
    reports = verify.verify_corpus(trunc=6, threads=2)
    assert {r.case_id.rsplit("/", 1)[-1] for r in reports} == {"routes", "identity", "invariance", "singular"}
    assert all(r.passed for r in reports), [(r.case_id, r.computed) for r in reports if not r.passed]


def test_lemmas_suite():
    reports = verify.verify_lemmas()
    assert len(reports) == len(list(verify.subset_identity_grid(3, 3, 3)))
    assert all(r.passed for r in reports)


def test_small_levels():
    reports = verify.verify_small_levels(trunc=2, fjmax=2)
    assert reports and all(r.passed for r in reports), [r.case_id for r in reports if not r.passed]


def test_main_json(capsys):
    code = verify.main(verify.parse_opt(["table1", "--vmax", "2", "--json", "--refs"]))
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert [x["caseId"] for x in out] == ["weights/v=1", "weights/v=2"]
    assert all(x["pass"] and "ref" in x and "runtimeMs" not in x for x in out)


def test_unknown_suite():
    with pytest.raises(ValueError):
        verify.run(suite="nope")

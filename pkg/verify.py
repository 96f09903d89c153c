# ThetaBlocks, AGPL-3.0 license
"""
Verify golden values: weights and multiplicities of the level-one family, D0 parity, singular parts and divisors at
small levels, the index-37 vanishing identity, and Grit = Borch on Fourier-Jacobi entries.

Suite       | Checks
---         | ---
weights     | weight and H_1(1,1) multiplicity of Borch(psi_v), v = 1..--vmax
parity      | D0 mod 2 read off psi_v against its closed and reduced forms, v = 1..--pmax
levels      | singular parts, Humbert divisors and Fourier-Jacobi agreement for data/golden.yaml levels
identity37  | sum_alpha c(6 alpha^2 + n alpha, 30 alpha + r; f) = 0 for the index-37 cusp form f, full (n, r) grid
families    | Grit(phi) = Borch(psi) through --fjmax for the eta^(3(8-l)) family and quark products
corpus      | psi routes agree, Jacobi invariance, t A - t D1 - C = 0 and singular signs over data/corpus.yaml
lemmas      | subset-sum square identities for l <= 3, entries <= 3, every subset size and size profile

Usage:
    $ python verify.py all
    $ python verify.py weights --vmax 5 --json
    $ python verify.py identity37 --timings
    $ python verify.py identity37 --zagier-trunc 12  # cap the window, cases past it report NOT-RUN
"""

import argparse
import random
import sys
import threading
from dataclasses import dataclass
from functools import lru_cache, partial
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import Callable, NamedTuple

import pandas as pd
from tqdm import tqdm

FILE = Path(__file__).resolve()
ROOT = FILE.parents[0]  # ThetaBlocks root directory
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))  # add ROOT to PATH

from models.borcherds import (
    borch_expansion_for_spec,
    borcherds_data,
    build_psi,
    build_psi_division,
    build_psi_product,
    canonical_r,
    compare_fj,
    humbert_divisor,
    humbert_multiplicity,
    invariance_violations,
    pole_bound,
    singular_table,
)
from models.lift import grit_expansion_for_spec
from models.parity import comb_identity_check, d0_direct, d0_parity_reduced, family_spec, subset_identity_grid
from models.theta import (
    Classification,
    ThetaBlockSpec,
    build_theta_block_window,
    classify_theta_block,
    random_theta_block,
)
from utils import TryExcept
from utils.general import (
    LOGGER,
    TQDM_BAR_FORMAT,
    Profile,
    RunConfig,
    colorstr,
    json_dumps,
    parse_ints,
    print_args,
    yaml_load,
)

GOLDEN = ROOT / "data" / "golden.yaml"
CORPUS = ROOT / "data" / "corpus.yaml"
INDEX37 = ThetaBlockSpec(-6, (1, 1, 1, 2, 2, 2, 3, 3, 4, 5))
SUITES = ("weights", "parity", "levels", "identity37", "families", "corpus", "lemmas")
ALIASES = {"table1": "weights", "section2": "levels", "zagier": "identity37"}


@dataclass
class VerificationReport:
    suite: str
    case_id: str
    expected: str
    computed: str
    passed: bool
    runtime_ms: float = 0.0
    ref: str = ""

    def to_json(self, timings=False, refs=False):
        d = {"suite": self.suite, "caseId": self.case_id, "expected": self.expected, "computed": self.computed}
        d["pass"] = self.passed
        if timings:
            d["runtimeMs"] = self.runtime_ms
        if refs:
            d["ref"] = self.ref
        return d


class Case(NamedTuple):
    suite: str
    case_id: str
    fn: Callable  # () -> (expected, computed)
    ref: str = ""


def _fmt(x):
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {v}" for k, v in sorted(x.items())) + "}"
    return str(x)


def run_case(case, hard_fail=False):
    with Profile() as dt:
        try:
            expected, computed = case.fn()
            passed = expected == computed
        except Exception as e:
            if hard_fail:
                raise
            LOGGER.warning(f"WARNING ⚠️ {case.case_id}: {type(e).__name__}: {e}")
            expected, computed, passed = "", f"{type(e).__name__}: {e}", False
    return VerificationReport(case.suite, case.case_id, _fmt(expected), _fmt(computed), passed, dt.ms, case.ref)


@lru_cache(maxsize=None)
def golden():
    return yaml_load(GOLDEN)


@lru_cache(maxsize=None)
def _psi(u, d, trunc):
    spec = ThetaBlockSpec(u, d)
    return build_psi(spec, max(trunc, int(spec.t) // 4))


def _keyed(d):
    # {"n,r": c} -> {(n, r): c}
    return {parse_ints(k): int(v) for k, v in d.items()}


def weight_cases(vmax=10):
    table = golden()["weights"]
    if not 1 <= vmax <= max(table):
        raise ValueError(f"vmax must lie in 1..{max(table)}, not {vmax}")

    def case(v):
        psi = build_psi(family_spec(v), 0)
        data = borcherds_data(psi, 1, v)
        mult = humbert_multiplicity(singular_table(psi, 1, pole_bound(v)), 1, 1)
        return tuple(table[v]), (int(data.weight), mult)

    ref = "k = c(0,0; psi_v)/2 and mult H_1(1,1) = sum_{n >= 1} c(0,n; psi_v)"
    return [Case("weights", f"weights/v={v}", partial(case, v), ref) for v in range(1, vmax + 1)]


def parity_cases(pmax=12):
    def case(v):
        return d0_parity_reduced(v).parity, d0_direct(v) % 2

    ref = "D0 = sum_{n < 0} sigma_0(-n) c(n,0; psi_v) is odd iff v = 2^beta with beta odd"
    return [Case("parity", f"parity/v={v}", partial(case, v), ref) for v in range(1, pmax + 1)]


def level_cases(trunc=6, fjmax=3):
    cases = []
    for row in golden()["levels"]:
        u, d, name = int(row["u"]), tuple(row["d"]), row["name"]
        spec = ThetaBlockSpec(u, d)

        def singular(u=u, d=d, spec=spec):
            table = singular_table(_psi(u, d, trunc), spec.t, pole_bound(spec.v))
            return _keyed(row_of(u, d)["singular"]), table.representative()

        def divisor(u=u, d=d, spec=spec):
            table = singular_table(_psi(u, d, trunc), spec.t, pole_bound(spec.v))
            return _keyed(row_of(u, d)["divisor"]), {(h.D, h.r): h.multiplicity for h in humbert_divisor(table)}

        def identity(u=u, d=d, spec=spec):
            data = borcherds_data(_psi(u, d, trunc), spec.t, spec.v)
            return (True, True), (data.character_trivial, data.holomorphic)

        def fj(spec=spec):
            borch = borch_expansion_for_spec(spec, fjmax, trunc)
            return True, compare_fj(borch, grit_expansion_for_spec(spec, fjmax, trunc), fjmax).equal

        def product(spec=spec):
            borch = borch_expansion_for_spec(spec, fjmax, trunc)
            direct = borch_expansion_for_spec(spec, fjmax, trunc, method="product")
            return True, compare_fj(borch, direct, fjmax).equal

        cases += [
            Case("levels", f"levels/{name}/singular", singular, "c(n, r; psi) with 4tn - r^2 <= 0, r >= 0"),
            Case("levels", f"levels/{name}/divisor", divisor, "mult H_t(D, r) = sum_{n >= 1} c(n^2 n0 m0, n r0)"),
            Case("levels", f"levels/{name}/character", identity, "t A - t D1 - C = 0, A, C in Z, t | C, sing >= 0"),
            Case("levels", f"levels/{name}/grit", fj, f"Borch(psi) = Grit(phi) through xi^({fjmax} t)"),
            Case("levels", f"levels/{name}/product", product, "theta block * exp(-Grit(psi)) = infinite product"),
        ]
    return cases


def row_of(u, d):
    return next(r for r in golden()["levels"] if int(r["u"]) == u and tuple(r["d"]) == d)


def identity37_terms(n, r, t=37):
    # (alpha, D) with D = 4 t (6 alpha^2 + n alpha) - (30 alpha + r)^2 > 0
    b = 4 * t * n - 60 * r
    bound = abs(b) // 12 + 1
    out = []
    for alpha in range(-bound, bound + 1):
        D = 4 * t * (6 * alpha * alpha + n * alpha) - (30 * alpha + r) ** 2
        if D > 0:
            out.append((alpha, D))
    return out


def identity37_reduced(n, r, t=37):
    # the identity's coefficients read at class representatives (n', r'), r' in (-t, t], n' = (D + r'^2)/(4t)
    out = []
    for alpha, D in identity37_terms(n, r, t):
        rr = canonical_r(30 * alpha + r, t)
        out.append(((D + rr * rr) // (4 * t), rr))
    return out


_INDEX37_LOCK = threading.Lock()


@lru_cache(maxsize=None)
def _index37_form(trunc):
    return build_theta_block_window(INDEX37, trunc, zmax=37)


def index37_form(trunc):
    # one expansion per window, shared by the worker threads
    with _INDEX37_LOCK:
        return _index37_form(trunc)


def identity37_cases(nmax=5, rmax=20, trunc=None):
    """
    One case per (n, r) with |n| <= nmax, |r| <= rmax.

    Each c(6 alpha^2 + n alpha, 30 alpha + r) is read at the class representative r' in (-37, 37] with
    n' = (D + r'^2)/148, so f is expanded through the largest n' the grid needs, keeping only |r| <= 37. A trunc
    caps that window; cases reaching past the cap are reported NOT-RUN and fail.
    """
    grid = {(n, r): identity37_reduced(n, r) for n in range(-nmax, nmax + 1) for r in range(-rmax, rmax + 1)}
    need = max((nn for terms in grid.values() for nn, _ in terms), default=0)
    window = need if trunc is None else trunc
    ref = "sum_alpha c(6 alpha^2 + n alpha, 30 alpha + r; f) = 0"
    cases, not_run = [], 0
    for (n, r), terms in grid.items():
        top = max((nn for nn, _ in terms), default=0)
        if top > window:
            not_run += 1

            def case(top=top):
                return 0, f"NOT-RUN: needs q^{top}, window q^{window}"

        else:

            def case(terms=terms):
                f = index37_form(window)
                return 0, sum(f.coeff(nn, rr) for nn, rr in terms)

        cases.append(Case("identity37", f"identity37/n={n},r={r}", case, ref))
    if not_run:
        LOGGER.warning(
            f"WARNING ⚠️ identity37: {not_run}/{len(cases)} cases need more than q^{window} (grid needs q^{need}), "
            f"reported NOT-RUN"
        )
    return cases


def family_cases(trunc=4, fjmax=3):
    cases = []
    for row in golden()["families"]:
        spec = ThetaBlockSpec(int(row["u"]), tuple(row["d"]))

        def fj(spec=spec):
            borch = borch_expansion_for_spec(spec, fjmax, trunc)
            return True, compare_fj(borch, grit_expansion_for_spec(spec, fjmax, trunc), fjmax).equal

        ref = f"Grit(phi) = Borch(psi) in M_k(K(t)) through xi^({fjmax} t)"
        cases.append(Case("families", f"families/{row['name']}", fj, ref))
    return cases


def corpus_specs(path=CORPUS):
    """Fixed corpus specs followed by the seeded random ones, duplicates dropped."""
    data = yaml_load(path)
    specs = [ThetaBlockSpec(int(row["u"]), tuple(row["d"])) for row in data.get("specs", [])]
    rnd = data.get("random") or {}
    rng = random.Random(rnd.get("seed", 0))
    kwargs = {k: int(rnd[k]) for k in ("vmax", "lmax", "dmax") if k in rnd}
    specs += [random_theta_block(rng, **kwargs) for _ in range(int(rnd.get("count", 0)))]
    return list(dict.fromkeys(specs))


def corpus_cases(trunc=6):
    cases = []
    for spec in corpus_specs():
        name = f"corpus/{spec.u};{','.join(map(str, spec.d))}"
        t = int(spec.t)

        def routes(spec=spec):
            return True, build_psi_product(spec, trunc) == build_psi_division(spec, trunc)

        def identity(spec=spec, t=t):
            data = borcherds_data(build_psi(spec, max(trunc, t // 4)), t, spec.v)
            return 0, t * data.A - t * data.D1 - data.C

        def invariance(spec=spec, t=t):
            return [], invariance_violations(build_psi(spec, trunc), t)

        def singular(spec=spec, t=t):
            table = singular_table(build_psi(spec, max(trunc, t // 4)), t, pole_bound(spec.v))
            return {}, {k: c for k, c in table.rows.items() if k[0] < 0 and c < 0}

        cases += [
            Case("corpus", f"{name}/routes", routes, "psi by exact division = psi by the product formula"),
            Case("corpus", f"{name}/identity", identity, "t A - t D1 - C = 0"),
            Case("corpus", f"{name}/invariance", invariance, "c(n, r) = c(n, -r) = c(n + lr + l^2 t, r + 2lt)"),
        ]
        # negative singular coefficients can only come from a non-holomorphic phi of odd order
        if spec.v % 2 == 0 or classify_theta_block(spec) in {Classification.CUSP, Classification.HOLOMORPHIC}:
            cases.append(Case("corpus", f"{name}/singular", singular, "c(n, r; psi) >= 0 for 4tn - r^2 < 0"))
    return cases


def lemma_cases(lmax=3, dmax=3, beta_max=3):
    def case(d, kind, x):
        return True, comb_identity_check(d, **{kind: x})

    ref = {
        "a": "sum_{|S| = a} e_S^2 = binom(2l - 2, a - 1) sum e_i^2",
        "b": "sum_{|S_i| = b_i} (e_S_1 + ... + e_S_beta)^2 = 0 mod sum e_i^2",
    }
    return [
        Case("lemmas", f"lemmas/d={','.join(map(str, d))}/{kind}={x}", partial(case, d, kind, x), ref[kind])
        for d, kind, x in subset_identity_grid(lmax, dmax, beta_max)
    ]


def verify_weight_table(vmax=10, threads=1, hard_fail=False):
    return run_cases(weight_cases(vmax), threads, hard_fail)


def verify_parity(pmax=12, threads=1, hard_fail=False):
    return run_cases(parity_cases(pmax), threads, hard_fail)


def verify_small_levels(trunc=6, fjmax=3, threads=1, hard_fail=False):
    return run_cases(level_cases(trunc, fjmax), threads, hard_fail)


def verify_index37_identity(nmax=5, rmax=20, trunc=None, threads=1, hard_fail=False):
    return run_cases(identity37_cases(nmax, rmax, trunc), threads, hard_fail)


def verify_families(trunc=4, fjmax=3, threads=1, hard_fail=False):
    return run_cases(family_cases(trunc, fjmax), threads, hard_fail)


def verify_corpus(trunc=6, threads=1, hard_fail=False):
    return run_cases(corpus_cases(trunc), threads, hard_fail)


def verify_lemmas(lmax=3, dmax=3, beta_max=3, threads=1, hard_fail=False):
    return run_cases(lemma_cases(lmax, dmax, beta_max), threads, hard_fail)


def run_cases(cases, threads=1, hard_fail=False):
    """Run cases on a thread pool; reports come back in case order."""
    if not cases:
        return []
    desc = f"{colorstr('verify: ')}{cases[0].suite}"
    with ThreadPool(max(1, threads)) as pool:
        it = pool.imap(partial(run_case, hard_fail=hard_fail), cases)
        return list(tqdm(it, total=len(cases), desc=desc, bar_format=TQDM_BAR_FORMAT, leave=False))


@TryExcept("verify: summary")
def print_summary(reports):
    df = pd.DataFrame([(r.suite, r.passed, r.runtime_ms) for r in reports], columns=["Suite", "Pass", "ms"])
    summary = df.groupby("Suite", sort=False).agg(Cases=("Pass", "size"), Passed=("Pass", "sum"), ms=("ms", "sum"))
    summary["Failed"] = summary["Cases"] - summary["Passed"]
    LOGGER.info(f"\n{summary}")
    for r in reports:
        if not r.passed:
            LOGGER.info(f"❌ {r.case_id}: expected {r.expected}, computed {r.computed}")


def run(
    suite="all",  # all or one of SUITES
    vmax=10,  # largest v of the weight table
    pmax=12,  # largest v of the parity check
    nmax=5,  # identity37: |n| <= nmax
    rmax=20,  # identity37: |r| <= rmax
    trunc=None,  # q-order window of the level and family suites, None = config default
    zagier_trunc=None,  # cap on the q-order window of identity37, None = what the grid needs
    fjmax=None,  # largest Fourier-Jacobi index, None = config default
    threads=None,  # verification threads, None = config default
    hard_fail=False,  # raise on the first failing case
    cfg=None,  # optional config yaml
):
    c = RunConfig.load(cfg, trunc=trunc, fjmax=fjmax, threads=threads)
    suite = ALIASES.get(suite, suite)
    names = SUITES if suite == "all" else (suite,)
    if any(s not in SUITES for s in names):
        raise ValueError(f"unknown suite {suite!r}, choose from all, {', '.join(SUITES)}")
    reports = []
    for s in names:
        if s == "weights":
            reports += verify_weight_table(vmax, c.threads, hard_fail)
        elif s == "parity":
            reports += verify_parity(pmax, c.threads, hard_fail)
        elif s == "levels":
            reports += verify_small_levels(c.trunc, c.fjmax, c.threads, hard_fail)
        elif s == "identity37":
            reports += verify_index37_identity(nmax, rmax, zagier_trunc, c.threads, hard_fail)
        elif s == "families":
            reports += verify_families(min(c.trunc, 4), c.fjmax, c.threads, hard_fail)
        elif s == "corpus":
            reports += verify_corpus(c.trunc, c.threads, hard_fail)
        else:
            reports += verify_lemmas(threads=c.threads, hard_fail=hard_fail)
    if hard_fail and not all(r.passed for r in reports):
        raise AssertionError(f"{sum(not r.passed for r in reports)} verification cases failed")
    return reports


def parse_opt(argv=None):
    parser = argparse.ArgumentParser(prog="verify")
    parser.add_argument("suite", nargs="?", default="all", choices=["all", *SUITES, *ALIASES], help="suite to run")
    parser.add_argument("--vmax", type=int, default=10, help="largest v of the weight table")
    parser.add_argument("--pmax", type=int, default=12, help="largest v of the parity check")
    parser.add_argument("--nmax", type=int, default=5, help="identity37: |n| <= nmax")
    parser.add_argument("--rmax", type=int, default=20, help="identity37: |r| <= rmax")
    parser.add_argument("--trunc", type=int, default=None, help="q-order window of levels and families")
    parser.add_argument("--zagier-trunc", type=int, default=None, help="cap on the identity37 q-order window")
    parser.add_argument("--fjmax", type=int, default=None, help="largest Fourier-Jacobi index")
    parser.add_argument("--threads", type=int, default=None, help="verification threads")
    parser.add_argument("--hard-fail", action="store_true", help="raise on the first failing case")
    parser.add_argument("--cfg", type=str, default=None, help="config yaml path")
    parser.add_argument("--json", action="store_true", help="JSON report array on stdout")
    parser.add_argument("--timings", action="store_true", help="include runtimeMs in the JSON report")
    parser.add_argument("--refs", "--paper-refs", dest="refs", action="store_true", help="include each checked formula")
    opt = parser.parse_args(argv)
    print_args(vars(opt))
    return opt


def main(opt):
    opt = vars(opt).copy()
    as_json, timings, refs = opt.pop("json"), opt.pop("timings"), opt.pop("refs")
    reports = run(**opt)
    fmt = "json" if as_json else RunConfig.load(opt["cfg"]).output_format
    if fmt == "json":
        print(json_dumps([r.to_json(timings, refs) for r in reports]))
    else:
        print_summary(reports)
        if refs:
            for r in reports:
                LOGGER.info(f"{r.case_id}: {r.ref}")
    ok, n = all(r.passed for r in reports), sum(r.passed for r in reports)
    LOGGER.info(f"{colorstr('verify: ')}{n}/{len(reports)} passed {'✅' if ok else '❌'}")
    return 0 if ok else 1


if __name__ == "__main__":
    opt = parse_opt()
    sys.exit(main(opt))

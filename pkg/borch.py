# ThetaBlocks, AGPL-3.0 license
"""
Borcherds products Borch(psi) for psi = (-1)^v (phi|V_2)/phi of a theta block phi.

Action      | Output
---         | ---
psi         | the Jacobi form psi through --trunc
singular    | singular coefficients, 4tn - r^2 <= 0
divisor     | Humbert surfaces H_t(D, r) with multiplicities
data        | weight, Weyl vector (A, B, C), D0, D1 and character flags
fj          | Fourier-Jacobi entries of Borch(psi) through --fjmax
compare     | Borch(psi) against Grit(phi), the direct product, or the two psi routes (--against)
parity      | D0 mod 2 of the level-one family member of order --v, three ways

Usage:
    $ python borch.py data --u 18 --d 1,1 --json
    $ python borch.py divisor --u 12 --d 1,1,2,2
    $ python borch.py compare --u 12 --d 1,1,1,1 --against grit --fjmax 3 --trunc 4
    $ python borch.py parity --v 8
"""

import argparse
import sys
from pathlib import Path

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
    compare_fj,
    humbert_divisor,
    pole_bound,
    singular_table,
)
from models.lift import grit_expansion_for_spec
from models.parity import d0_direct, d0_parity_reduced
from models.theta import ThetaBlockSpec
from utils.general import LOGGER, RunConfig, colorstr, json_dumps, print_args

REFS = {
    "psi": "psi = (-1)^v (phi|V_2)/phi",
    "singular": "c(n, r; psi) with 4tn - r^2 <= 0, classes (D, r mod 2t)",
    "divisor": "mult H_t(D, r) = sum_{n >= 1} c(n^2 n0 m0, n r0; psi)",
    "data": "24A = sum c(0,l), 2B = sum_{l>0} l c(0,l), 4C = sum l^2 c(0,l), D0 = sum sigma_0(-n) c(n,0), k = c(0,0)/2",
    "fj": "Borch(psi) = Theta * exp(-sum_j (psi|V_j) xi^(jt))",
    "compare": "Borch(psi) = Grit(phi) coefficientwise on each Fourier-Jacobi entry",
    "parity": "D0 odd iff v = 2^beta with beta odd",
}


def run(
    action="data",  # psi, singular, divisor, data, fj, compare or parity
    u=0,  # eta exponent
    d="",  # theta arguments, i.e. 1,1,2
    v=1,  # family order for the parity action
    route="product",  # psi route: product or division
    against="grit",  # compare target: grit, product or division
    fjmax=None,  # largest Fourier-Jacobi index, None = config default
    trunc=None,  # q-order window, None = config default
    cfg=None,  # optional config yaml
    output_format=None,  # text or json
    refs=False,  # attach the defining formula
):
    c = RunConfig.load(cfg, trunc=trunc, fjmax=fjmax, output_format=output_format)
    out = {"ref": REFS[action]} if refs else {}
    if action == "parity":
        reduced = d0_parity_reduced(v)
        direct = d0_direct(v)
        out.update(reduction=reduced, D0=str(direct), agree=direct % 2 == reduced.parity)
        return out

    spec = ThetaBlockSpec.parse(u, d)
    t = spec.t
    out.update(spec=str(spec), t=t, v=spec.v)
    if action == "psi":
        out["psi"] = build_psi(spec, c.trunc, route, c.qden)
    elif action in {"singular", "divisor", "data"}:
        psi = build_psi(spec, max(c.trunc, t // 4), route, c.qden)
        table = singular_table(psi, t, pole_bound(spec.v))
        for (D, r), coeff in table.rows.items():
            if coeff < 0:
                LOGGER.warning(f"WARNING ⚠️ negative singular coefficient {coeff} at (D, r) = ({D}, {r})")
        if action == "singular":
            out["singular"] = table
            out["text"] = str(table)
        elif action == "divisor":
            out["divisor"] = humbert_divisor(table)
        else:
            out["data"] = borcherds_data(psi, t, spec.v)
    elif action == "fj":
        out["borch"] = borch_expansion_for_spec(spec, c.fjmax, c.trunc, route=route, qden=c.qden)
    elif action == "compare":
        if against == "division":
            a, b = build_psi_product(spec, c.trunc, c.qden), build_psi_division(spec, c.trunc, c.qden)
            out["equal"] = a == b
            return out
        borch = borch_expansion_for_spec(spec, c.fjmax, c.trunc, route=route, qden=c.qden)
        if against == "grit":
            other = grit_expansion_for_spec(spec, c.fjmax, c.trunc, c.qden)
        else:
            other = borch_expansion_for_spec(spec, c.fjmax, c.trunc, method="product", route=route, qden=c.qden)
        comparison = compare_fj(borch, other, c.fjmax)
        out.update(equal=comparison.equal, checks=[x._asdict() for x in comparison.checks], text=str(comparison))
    else:
        raise ValueError(f"unknown action {action!r}")
    return out


def report(result, output_format="text"):
    if output_format == "json":
        result = {k: v for k, v in result.items() if k != "text"}
        print(json_dumps(result))
        return
    prefix = colorstr("borch: ")
    for k, v in result.items():
        if k in {"checks", "singular"}:
            continue
        if k == "divisor":
            v = " + ".join(str(h) for h in v) or "0"
        elif k == "borch":
            for m, f in v:
                LOGGER.info(f"{prefix}xi^{m * v.t}: {f}")
            continue
        elif hasattr(v, "to_json"):
            v = v.to_json()
        LOGGER.info(f"{prefix}{k}={v}")


def parse_opt(argv=None):
    parser = argparse.ArgumentParser(prog="borch")
    parser.add_argument(
        "action", choices=["psi", "singular", "divisor", "data", "fj", "compare", "parity"], help="what to compute"
    )
    parser.add_argument("--u", type=int, default=0, help="eta exponent u")
    parser.add_argument("--d", type=str, default="", help="theta arguments, i.e. 1,1,2")
    parser.add_argument("--v", type=int, default=1, help="family order for the parity action")
    parser.add_argument("--route", choices=["product", "division"], default="product", help="psi construction")
    parser.add_argument("--against", choices=["grit", "product", "division"], default="grit", help="compare target")
    parser.add_argument("--fjmax", type=int, default=None, help="largest Fourier-Jacobi index")
    parser.add_argument("--trunc", type=int, default=None, help="q-order window")
    parser.add_argument("--cfg", type=str, default=None, help="config yaml path")
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    parser.add_argument("--refs", "--paper-refs", dest="refs", action="store_true", help="attach the defining formula")
    opt = parser.parse_args(argv)
    opt.output_format = "json" if opt.json else None
    del opt.json
    print_args(vars(opt))
    return opt


def main(opt):
    result = run(**vars(opt))
    report(result, RunConfig.load(opt.cfg, output_format=opt.output_format).output_format)
    if opt.action == "compare" and not result["equal"]:
        return 1
    if opt.action == "parity" and not result["agree"]:
        return 1
    return 0


if __name__ == "__main__":
    opt = parse_opt()
    sys.exit(main(opt))

# ThetaBlocks, AGPL-3.0 license
"""
Gritsenko lift of a theta block as a Fourier-Jacobi expansion, or single lift coefficients.

Usage:
    $ python grit.py --u 18 --d 1,1 --fjmax 3 --trunc 4
    $ python grit.py --u 12 --d 1,1,2,2 --coeff 2,1,1 --json
"""

import argparse
import sys
from pathlib import Path

FILE = Path(__file__).resolve()
ROOT = FILE.parents[0]  # ThetaBlocks root directory
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))  # add ROOT to PATH

from models.lift import grit_coefficient, grit_expansion_for_spec
from models.theta import ThetaBlockSpec, build_theta_block
from utils.general import LOGGER, RunConfig, colorstr, json_dumps, parse_ints, print_args


def run(
    u=0,  # eta exponent
    d="",  # theta arguments, i.e. 1,1,2
    fjmax=None,  # largest Fourier-Jacobi index, None = config default
    trunc=None,  # q-order of every entry, None = config default
    coeff=None,  # single coefficient n,r,m instead of the expansion
    cfg=None,  # optional config yaml
    output_format=None,  # text or json
):
    c = RunConfig.load(cfg, trunc=trunc, fjmax=fjmax, output_format=output_format)
    spec = ThetaBlockSpec.parse(u, d)
    if coeff:
        n, r, m = parse_ints(coeff)
        phi = build_theta_block(spec, max(0, n * m), c.qden)
        return {"spec": str(spec), "T": [n, r, m], "coefficient": grit_coefficient(phi, spec.k, spec.t, (n, r, m))}
    return grit_expansion_for_spec(spec, c.fjmax, c.trunc, c.qden)


def report(result, output_format="text"):
    if output_format == "json":
        print(json_dumps(result))
    elif isinstance(result, dict):
        LOGGER.info(f"{colorstr('grit: ')}a({result['T']}) = {result['coefficient']}")
    else:
        for m, f in result:
            LOGGER.info(f"{colorstr(f'grit: xi^{m * result.t}: ')}{f}")


def parse_opt(argv=None):
    parser = argparse.ArgumentParser(prog="grit")
    parser.add_argument("--u", type=int, default=0, help="eta exponent u")
    parser.add_argument("--d", type=str, default="", help="theta arguments, i.e. 1,1,2")
    parser.add_argument("--fjmax", type=int, default=None, help="largest Fourier-Jacobi index")
    parser.add_argument("--trunc", type=int, default=None, help="q-order of every entry")
    parser.add_argument("--coeff", type=str, default=None, help="single lift coefficient at n,r,m")
    parser.add_argument("--cfg", type=str, default=None, help="config yaml path")
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    opt = parser.parse_args(argv)
    opt.output_format = "json" if opt.json else None
    del opt.json
    print_args(vars(opt))
    return opt


def main(opt):
    result = run(**vars(opt))
    report(result, RunConfig.load(opt.cfg, output_format=opt.output_format).output_format)
    return 0


if __name__ == "__main__":
    opt = parse_opt()
    sys.exit(main(opt))

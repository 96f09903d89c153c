# ThetaBlocks, AGPL-3.0 license
"""
Support hulls of theta blocks and the multiplicativity check of the hull valuation.

Usage:
    $ python hull.py --u 18 --d 1,1 --trunc 4
    $ python hull.py --u 12 --d 1,1,2,2 --trunc 6 --x 1/2
    $ python hull.py --check-mul --samples 200 --seed 0
"""

import argparse
import random
import sys
from fractions import Fraction
from pathlib import Path

FILE = Path(__file__).resolve()
ROOT = FILE.parents[0]  # ThetaBlocks root directory
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))  # add ROOT to PATH

from models.common import FJSeries
from models.theta import ThetaBlockSpec, build_theta_block, ord_profile, ord_value
from utils.general import LOGGER, RunConfig, colorstr, json_dumps, print_args
from utils.valuation import hull_of_support, minkowski_sum, ord_via_hull


def random_laurent(rng, terms=4, span=3, recession=False):
    # random nonzero polynomial in q^n zeta^r, n >= 0 when the hull carries the recession ray
    coeffs = {}
    while not coeffs:
        for _ in range(rng.randint(1, terms)):
            n = rng.randint(0 if recession else -span, span)
            coeffs[(24 * n, 2 * rng.randint(-span, span))] = rng.choice([-2, -1, 1, 2, 3])
    return FJSeries.from_coefficients(coeffs)


def check_multiplicativity(samples=200, seed=0, recession=False):
    """Count pairs (f, g) of random Laurent polynomials with hull(fg) != hull(f) + hull(g)."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(samples):
        f, g = random_laurent(rng, recession=recession), random_laurent(rng, recession=recession)
        expected = minkowski_sum(hull_of_support(f, recession), hull_of_support(g, recession))
        failures += hull_of_support(f * g, recession) != expected
    return failures


def run(
    u=0,  # eta exponent
    d="",  # theta arguments, i.e. 1,1,2
    trunc=None,  # q-order window, None = config default
    x=None,  # evaluate ord at x, i.e. 1/2
    check_mul=False,  # run the Minkowski sum check instead
    samples=200,  # random pairs for --check-mul
    seed=0,  # random seed for --check-mul
    cfg=None,  # optional config yaml
    output_format=None,  # text or json
):
    c = RunConfig.load(cfg, trunc=trunc, output_format=output_format)
    if check_mul:
        failures = {
            "laurent": check_multiplicativity(samples, seed, recession=False),
            "jacobi": check_multiplicativity(samples, seed + 1, recession=True),
        }
        return {"samples": samples, "seed": seed, "failures": failures, "passed": not any(failures.values())}

    spec = ThetaBlockSpec.parse(u, d)
    h = hull_of_support(build_theta_block(spec, c.trunc, c.qden))
    out = {"spec": str(spec), "trunc": c.trunc, "hull": h}
    xs = [Fraction(x)] if x is not None else list(ord_profile(spec).argmin)
    out["ord"] = [
        {"x": xi, "hull": ord_via_hull(h, xi) + spec.t * xi * xi, "formula": ord_value(spec, xi)} for xi in xs
    ]
    return out


def report(result, output_format="text"):
    if output_format == "json":
        print(json_dumps(result))
        return
    prefix = colorstr("hull: ")
    if "failures" in result:
        status = "✅" if result["passed"] else "❌"
        LOGGER.info(f"{prefix}{result['samples']} pairs per ring, failures {result['failures']} {status}")
        return
    LOGGER.info(f"{prefix}{result['spec']} through q^{result['trunc']}: {result['hull']}")
    for row in result["ord"]:
        LOGGER.info(f"{prefix}ord at x={row['x']}: hull {row['hull']}, formula {row['formula']}")


def parse_opt(argv=None):
    parser = argparse.ArgumentParser(prog="hull")
    parser.add_argument("--u", type=int, default=0, help="eta exponent u")
    parser.add_argument("--d", type=str, default="", help="theta arguments, i.e. 1,1,2")
    parser.add_argument("--trunc", type=int, default=None, help="q-order window")
    parser.add_argument("--x", type=str, default=None, help="evaluate ord at x, i.e. 1/2")
    parser.add_argument("--check-mul", action="store_true", help="check hull(fg) = hull(f) + hull(g) on random pairs")
    parser.add_argument("--samples", type=int, default=200, help="random pairs for --check-mul")
    parser.add_argument("--seed", type=int, default=0, help="random seed for --check-mul")
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
    return 0 if result.get("passed", True) else 1


if __name__ == "__main__":
    opt = parse_opt()
    sys.exit(main(opt))

# ThetaBlocks, AGPL-3.0 license
"""
Expand and classify theta blocks THBK(u; d) = eta^u prod theta_d and theta quarks.

Usage:
    $ python blocks.py classify --u 18 --d 1,1
    $ python blocks.py expand --u 12 --d 1,1,2,2 --trunc 3 --json
    $ python blocks.py quark --a 1 --b 2 --trunc 2
"""

import argparse
import sys
from pathlib import Path

FILE = Path(__file__).resolve()
ROOT = FILE.parents[0]  # ThetaBlocks root directory
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))  # add ROOT to PATH

from models.theta import (
    ThetaBlockSpec,
    build_theta_block,
    build_theta_quark,
    classify_theta_block,
    ord_profile,
    quark_index,
)
from utils.general import LOGGER, RunConfig, colorstr, json_dumps, print_args


def run(
    action="classify",  # classify, expand or quark
    u=0,  # eta exponent
    d="",  # theta arguments, i.e. 1,1,2
    a=1,  # first quark argument
    b=1,  # second quark argument
    trunc=None,  # q-order window, None = config default
    cfg=None,  # optional config yaml
    output_format=None,  # text or json
):
    c = RunConfig.load(cfg, trunc=trunc, output_format=output_format)
    if action == "quark":
        f = build_theta_quark(a, b, c.trunc, c.qden)
        return {"a": a, "b": b, "weight": 1, "index": quark_index(a, b), "series": f}

    spec = ThetaBlockSpec.parse(u, d)
    out = {"u": spec.u, "d": list(spec.d), "k": spec.k, "t": spec.t, "v": spec.v, "character": list(spec.character)}
    if action == "classify":
        profile = ord_profile(spec)
        out.update(
            classification=classify_theta_block(spec),
            ord_min=profile.minimum,
            argmin=list(profile.argmin),
        )
    elif action == "expand":
        out["series"] = build_theta_block(spec, c.trunc, c.qden)
    else:
        raise ValueError(f"unknown action {action!r}")
    return out


def report(result, output_format="text"):
    if output_format == "json":
        print(json_dumps(result))
        return
    prefix = colorstr("blocks: ")
    for k, v in result.items():
        if k == "argmin":
            v = ", ".join(str(x) for x in v)
        LOGGER.info(f"{prefix}{k}={v}")


def parse_opt(argv=None):
    parser = argparse.ArgumentParser(prog="blocks")
    parser.add_argument("action", choices=["classify", "expand", "quark"], help="what to compute")
    parser.add_argument("--u", type=int, default=0, help="eta exponent u")
    parser.add_argument("--d", type=str, default="", help="theta arguments, i.e. 1,1,2")
    parser.add_argument("--a", type=int, default=1, help="first quark argument")
    parser.add_argument("--b", type=int, default=1, help="second quark argument")
    parser.add_argument("--trunc", type=int, default=None, help="q-order window")
    parser.add_argument("--cfg", type=str, default=None, help="config yaml path")
    parser.add_argument("--json", action="store_true", help="machine-readable output on stdout")
    opt = parser.parse_args(argv)
    opt.output_format = "json" if opt.json else None
    del opt.json
    print_args(vars(opt))
    return opt


def main(opt):
    result = run(**vars(opt))
    fmt = RunConfig.load(opt.cfg, output_format=opt.output_format).output_format
    report(result, fmt)
    return 0


if __name__ == "__main__":
    opt = parse_opt()
    sys.exit(main(opt))

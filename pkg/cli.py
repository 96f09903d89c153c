# ThetaBlocks, AGPL-3.0 license
"""
Single entry point dispatching to the blocks, grit, borch, hull and verify scripts.

Exit codes: 0 success, 1 a check failed or an arithmetic error, 2 bad input.

Usage:
    $ thetablocks blocks classify --u 18 --d 1,1
    $ thetablocks borch divisor --u 12 --d 1,1,2,2 --json
    $ thetablocks verify all
"""

import importlib
import sys
from pathlib import Path

FILE = Path(__file__).resolve()
ROOT = FILE.parents[0]  # ThetaBlocks root directory
if str(ROOT) not in sys.path:
    sys.path.append(str(ROOT))  # add ROOT to PATH

from models.common import SeriesError
from utils.general import LOGGER

COMMANDS = ("blocks", "grit", "borch", "hull", "verify")


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS:
        LOGGER.error(f"usage: thetablocks {{{','.join(COMMANDS)}}} ...")
        return 2
    command, *args = argv
    module = importlib.import_module(command)
    try:
        opt = module.parse_opt(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2
    try:
        return module.main(opt)
    except (ValueError, SeriesError) as e:
        LOGGER.error(f"{command}: {e}")
        return 2
    except ArithmeticError as e:
        LOGGER.error(f"{command}: {type(e).__name__}: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

# ThetaBlocks, AGPL-3.0 license
"""General utils."""

import contextlib
import inspect
import json
import logging
import logging.config
import os
import time
from dataclasses import asdict, dataclass, fields
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Optional

import pandas as pd
import yaml

from utils import emojis

FILE = Path(__file__).resolve()
ROOT = FILE.parents[1]  # ThetaBlocks root directory

# Settings
NUM_THREADS = min(8, max(1, (os.cpu_count() or 1) - 1))  # number of verification threads
VERBOSE = str(os.getenv("THETABLOCKS_VERBOSE", True)).lower() == "true"  # global verbose mode
TQDM_BAR_FORMAT = "{l_bar}{bar:10}{r_bar}"  # tqdm bar format
DEFAULT_CFG = ROOT / "data" / "default.yaml"

pd.options.display.max_columns = 10
pd.options.display.width = 160

LOGGING_NAME = "thetablocks"


def set_logging(name=LOGGING_NAME, verbose=True):
    # sets up logging for the given name
    level = logging.INFO if verbose else logging.ERROR
    logging.config.dictConfig(
        {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {name: {"format": "%(message)s"}},
            "handlers": {
                name: {
                    "class": "logging.StreamHandler",
                    "formatter": name,
                    "level": level,
                }
            },
            "loggers": {
                name: {
                    "level": level,
                    "handlers": [name],
                    "propagate": False,
                }
            },
        }
    )


set_logging(LOGGING_NAME, verbose=VERBOSE)  # run before defining LOGGER
LOGGER = logging.getLogger(LOGGING_NAME)  # define globally (used in blocks.py, borch.py, verify.py, etc.)


class Profile(contextlib.ContextDecorator):
    # Profile class. Usage: @Profile() decorator or 'with Profile():' context manager
    def __init__(self, t=0.0):
        self.t = t

    def __enter__(self):
        self.start = self.time()
        return self

    def __exit__(self, type, value, traceback):
        self.dt = self.time() - self.start  # delta-time
        self.t += self.dt  # accumulate dt

    @property
    def ms(self):
        return round(self.dt * 1e3, 1)

    def time(self):
        return time.perf_counter()


def print_args(args: Optional[dict] = None, show_file=True, show_func=False):
    # Print function arguments (optional args dict)
    x = inspect.currentframe().f_back  # previous frame
    file, _, func, _, _ = inspect.getframeinfo(x)
    if args is None:  # get args automatically
        args, _, _, frm = inspect.getargvalues(x)
        args = {k: v for k, v in frm.items() if k in args}
    try:
        file = Path(file).resolve().relative_to(ROOT).with_suffix("")
    except ValueError:
        file = Path(file).stem
    s = (f"{file}: " if show_file else "") + (f"{func}: " if show_func else "")
    LOGGER.info(colorstr(s) + ", ".join(f"{k}={v}" for k, v in args.items()))


def yaml_load(file="data.yaml"):
    # Single-line safe yaml loading
    with open(file, errors="ignore") as f:
        return yaml.safe_load(f)


def json_dumps(obj):
    # Deterministic JSON: objects with to_json() expand, Fractions and enums print as strings
    def default(x):
        if hasattr(x, "to_json"):
            return x.to_json()
        if isinstance(x, (Fraction, Enum, Path)):
            return str(x)
        raise TypeError(f"not JSON serializable: {type(x).__name__}")

    return json.dumps(obj, default=default, indent=2, ensure_ascii=False)


def check_yaml(file):
    # Search/resolve a YAML file relative to cwd, then ROOT, then ROOT/data
    file = Path(str(file))
    assert file.suffix in {".yaml", ".yml"}, f"acceptable suffix is .yaml or .yml, not {file.suffix}"
    for candidate in (file, ROOT / file, ROOT / "data" / file):
        if candidate.is_file():
            return candidate
    raise FileNotFoundError(f"File not found: {file}")


def num_threads(threads=0):
    # Resolve a thread request: explicit > THETABLOCKS_NUM_THREADS env > auto
    env = os.getenv("THETABLOCKS_NUM_THREADS")
    if threads:
        return max(1, int(threads))
    return max(1, int(env)) if env else NUM_THREADS


def parse_ints(s):
    # '1,1,2' -> (1, 1, 2); accepts lists and tuples unchanged
    if isinstance(s, (list, tuple)):
        return tuple(int(x) for x in s)
    s = str(s).strip()
    return tuple(int(x) for x in s.split(",") if x.strip()) if s else ()


@dataclass
class RunConfig:
    trunc: int = 6  # q-order window
    qden: int = 24  # common denominator of q-exponents
    fjmax: int = 3  # largest Fourier-Jacobi index
    output_format: str = "text"  # text or json
    threads: int = 0  # 0 = auto

    @property
    def trunc_scaled(self):
        return self.trunc * self.qden

    def validate(self):
        if self.qden < 1:
            raise ValueError(f"qden must be positive, not {self.qden}")
        if self.trunc_scaled < self.qden:
            raise ValueError(f"trunc must cover at least one full q-power, not {self.trunc}")
        if self.fjmax < 1:
            raise ValueError(f"fjmax must be >= 1, not {self.fjmax}")
        if self.output_format not in {"text", "json"}:
            raise ValueError(f"output format must be 'text' or 'json', not {self.output_format!r}")
        return self

    @classmethod
    def load(cls, cfg=None, **overrides):
        # defaults.yaml < --cfg file < explicit flags (None means 'not given')
        d = dict(yaml_load(DEFAULT_CFG) or {})
        if cfg:
            d.update(yaml_load(check_yaml(cfg)) or {})
        d.update({k: v for k, v in overrides.items() if v is not None})
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        c = cls(**d).validate()
        c.threads = num_threads(c.threads)
        return c

    def to_dict(self):
        return asdict(self)


def colorstr(*input):
    # Colors a string https://en.wikipedia.org/wiki/ANSI_escape_code, i.e.  colorstr('blue', 'hello world')
    *args, string = input if len(input) > 1 else ("blue", "bold", input[0])  # color arguments, string
    colors = {
        "black": "\033[30m",  # basic colors
        "red": "\033[31m",
        "green": "\033[32m",
        "yellow": "\033[33m",
        "blue": "\033[34m",
        "magenta": "\033[35m",
        "cyan": "\033[36m",
        "white": "\033[37m",
        "bright_black": "\033[90m",  # bright colors
        "bright_red": "\033[91m",
        "bright_green": "\033[92m",
        "bright_yellow": "\033[93m",
        "bright_blue": "\033[94m",
        "bright_magenta": "\033[95m",
        "bright_cyan": "\033[96m",
        "bright_white": "\033[97m",
        "end": "\033[0m",  # misc
        "bold": "\033[1m",
        "underline": "\033[4m",
    }
    return "".join(colors[x] for x in args) + f"{string}" + colors["end"]

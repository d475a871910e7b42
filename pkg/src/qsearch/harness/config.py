"""Experiment configuration: a flat ``key = value`` file plus CLI overrides.

Keys mirror the long CLI flags with dashes turned into underscores
(``--u-length`` is ``u_length``). Flags given on the command line win over
the file. Lists are comma-separated; pairs inside a list use ``/``
(``targets = 5/40,9/17``); helper levels for ``multidim`` are separated by
``;`` (``levels = 3,7;67,83,103,119``).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ArgumentError
from ..problems import (
    CompositeV,
    Exhaustive,
    MultiDim,
    MultiSource,
    MultiTarget,
    Nearby,
    Rectangular,
    SymmetricMulti,
    TwoDim,
    TwoDimMultiTarget,
    rotation_program,
    walsh_program,
)
from ..randprog import random_program

OUTPUT_ENV = "QSEARCH_OUTPUT_DIR"
DEFAULT_OUTPUT = "results"

PROBLEMS = (
    "exhaustive",
    "nearby",
    "symmetric",
    "multi-target",
    "multi-source",
    "composite",
    "twodim",
    "rectangular",
    "multidim",
    "twodim-multi",
)

# Every key a config file may set; anything else is a typo worth reporting.
KEYS = {
    "n", "k", "source", "target", "sources", "targets", "nx", "ny", "g", "t1", "t2",
    "d", "q", "levels", "u", "u_length", "seed", "at_most", "eta_range", "output", "timing",
}


@dataclass
class ExperimentConfig:
    problem: str
    params: dict = field(default_factory=dict)
    eta_sweep: tuple | None = None
    seed: int = 0
    output_path: str = DEFAULT_OUTPUT
    timing: bool = False

    def get(self, key, default=None):
        return self.params.get(key, default)

    def require(self, key):
        value = self.params.get(key)
        if value is None or value == "":
            raise ArgumentError(f"problem '{self.problem}' needs --{key.replace('_', '-')}")
        return value


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ArgumentError(f"cannot read config file {path}: {exc.strerror}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ArgumentError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS and key != "problem":
            raise ArgumentError(f"{path}:{lineno}: unknown key '{key}'")
        out[key] = value
    return out


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_ENV, DEFAULT_OUTPUT)


def _truthy(value) -> bool:
    if isinstance(value, bool):
        return value
    return str(value).strip().lower() in {"1", "true", "yes", "on"}


def parse_int(name, value) -> int:
    try:
        return int(str(value).strip(), 0)
    except ValueError:
        raise ArgumentError(f"{name} must be an integer, got {value!r}") from None


def parse_int_list(name, value) -> tuple:
    if isinstance(value, (list, tuple)):
        return tuple(int(v) for v in value)
    text = str(value).strip()
    if not text:
        return ()
    return tuple(parse_int(name, v) for v in text.split(","))


def parse_pairs(name, value) -> tuple:
    pairs = []
    for item in str(value).split(","):
        parts = item.strip().split("/")
        if len(parts) != 2:
            raise ArgumentError(f"{name} entries must look like x/y, got {item!r}")
        pairs.append((parse_int(name, parts[0]), parse_int(name, parts[1])))
    return tuple(pairs)


def parse_eta_range(value) -> tuple | None:
    """``"a:b"`` (inclusive) or a single upper bound ``"b"``."""
    if value is None or value == "":
        return None
    text = str(value)
    lo, hi = text.split(":", 1) if ":" in text else ("0", text)
    lo, hi = parse_int("eta range", lo), parse_int("eta range", hi)
    if lo < 0 or hi < lo:
        raise ArgumentError(f"eta range must satisfy 0 <= start <= stop, got {text!r}")
    return lo, hi


def make_config(problem: str, file_values: dict, flag_values: dict) -> ExperimentConfig:
    """Merge file and flag values (flags win) into a config."""
    merged = dict(file_values)
    merged.update({k: v for k, v in flag_values.items() if v is not None})
    problem = problem or merged.pop("problem", None)
    merged.pop("problem", None)
    if problem not in PROBLEMS:
        raise ArgumentError(f"unknown problem {problem!r}; choose from {', '.join(PROBLEMS)}")
    return ExperimentConfig(
        problem=problem,
        params=merged,
        eta_sweep=parse_eta_range(merged.get("eta_range")),
        seed=parse_int("seed", merged.get("seed", 0)),
        output_path=str(merged.get("output") or default_output_dir()),
        timing=_truthy(merged.get("timing", False)),
    )


def _unitary(cfg: ExperimentConfig, n: int):
    """``--u walsh`` (default), ``--u rotation`` (needs ``--k``), or ``--u random`` (seeded)."""
    kind = str(cfg.get("u", "walsh")).lower()
    if kind == "walsh":
        return walsh_program(n)
    if kind == "rotation":
        return rotation_program(n, parse_int("k", cfg.require("k")))
    if kind == "random":
        rng = np.random.default_rng(cfg.seed)
        return random_program(n, parse_int("u_length", cfg.get("u_length", 40)), rng)
    raise ArgumentError(f"--u must be walsh, rotation or random, got {kind!r}")


def build_instance(cfg: ExperimentConfig):
    """Turn a config into a problem instance (validation happens in the driver)."""
    p, req = cfg.problem, cfg.require
    if p == "exhaustive":
        return Exhaustive(parse_int("n", req("n")), parse_int("target", req("target")),
                          parse_int("source", cfg.get("source", 0)))
    if p == "nearby":
        return Nearby(parse_int("n", req("n")), parse_int("k", req("k")),
                      parse_int("source", req("source")), parse_int("target", req("target")))
    if p == "symmetric":
        n = parse_int("n", req("n"))
        return SymmetricMulti(_unitary(cfg, n), parse_int_list("sources", req("sources")),
                              parse_int_list("targets", req("targets")))
    if p == "multi-target":
        return MultiTarget(parse_int("n", req("n")), parse_int_list("targets", req("targets")))
    if p == "multi-source":
        return MultiSource(parse_int("n", req("n")), parse_int("k", req("k")),
                           parse_int_list("sources", req("sources")),
                           parse_int("target", req("target")))
    if p == "composite":
        n = parse_int("n", req("n"))
        return CompositeV(n, parse_int_list("sources", req("sources")),
                          parse_int("target", req("target")), _unitary(cfg, n))
    if p in ("twodim", "rectangular"):
        cls = Rectangular if p == "rectangular" else TwoDim
        return cls(parse_int("nx", req("nx")), parse_int("ny", req("ny")),
                   parse_int_list("g", req("g")), parse_int("t1", req("t1")),
                   parse_int("t2", req("t2")))
    if p == "multidim":
        levels = tuple(parse_int_list("levels", lvl) for lvl in str(req("levels")).split(";"))
        return MultiDim(parse_int("d", req("d")), parse_int("q", req("q")), levels,
                        parse_int_list("target", req("target")))
    if p == "twodim-multi":
        return TwoDimMultiTarget(parse_int("nx", req("nx")), parse_int("ny", req("ny")),
                                 parse_pairs("targets", req("targets")),
                                 parse_int_list("g", req("g")))
    raise ArgumentError(f"unknown problem {p!r}")

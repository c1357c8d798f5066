"""Run configuration: a single JSON document validated against a schema.

Precedence, lowest first: built-in defaults, the config file, command-line
flags.  Errors carry a JSON pointer to the offending field.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from .errors import ConfigError
from .reference import make_initial
from .state import InitialData

__all__ = ["SCHEMA", "RunConfig", "load_config", "parse_number", "DEFAULT_OUT"]

DEFAULT_OUT = "hs_out"

_number_list = {"type": "array", "items": {"type": "number"}}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "problem": {
            "oneOf": [
                {"enum": ["peakon", "cusp", "peakon1"]},
                {
                    "type": "object",
                    "additionalProperties": False,
                    "required": ["breakpoints"],
                    "properties": {
                        "breakpoints": {
                            "type": "array",
                            "minItems": 2,
                            "items": {"type": "array", "items": {"type": "number"},
                                      "minItems": 3, "maxItems": 3},
                        },
                        "f_inf": {"type": "number", "minimum": 0},
                    },
                },
            ]
        },
        "dx": {"type": "number", "exclusiveMinimum": 0},
        "dxs": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "alpha": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "dt_override": {"type": ["number", "null"], "exclusiveMinimum": 0},
        "T": {"type": "number", "minimum": 0},
        "snapshots": _number_list,
        "out": {"type": "string"},
        "format": {"enum": ["csv", "json"]},
        "checks": {"type": "array", "items": {"enum": ["validate", "bounds", "kernel"]}},
        "seed": {"type": "integer"},
        "jobs": {"type": "integer", "minimum": 1},
        "plots": {"type": "boolean"},
        "bump": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_half": {"type": "number", "exclusiveMinimum": 0},
                "x_center": {"type": "number"},
                "x_half": {"type": "number", "exclusiveMinimum": 0},
            },
        },
    },
}


@dataclass(frozen=True)
class RunConfig:
    problem: Any = "peakon"
    dx: float = 0.25
    dxs: tuple[float, ...] = ()
    alpha: float = 1.0
    dt_override: float | None = None
    T: float = 4.0
    snapshots: tuple[float, ...] = (0.0, 2.0, 4.0)
    out: str | None = None
    format: str = "csv"
    checks: tuple[str, ...] = ("validate",)
    seed: int = 0
    jobs: int = 1
    plots: bool = True
    bump: dict = field(default_factory=lambda: {"t_half": 3.0, "x_center": 1.5, "x_half": 2.5})

    @property
    def named(self) -> str | None:
        return self.problem if isinstance(self.problem, str) else None

    def initial(self) -> InitialData:
        if self.named:
            return make_initial(self.named)
        return make_initial(custom=self.problem["breakpoints"], f_inf=self.problem.get("f_inf"))

    def out_dir(self) -> Path:
        return Path(self.out or os.environ.get("HS_OUT_DIR") or DEFAULT_OUT)

    def to_dict(self) -> dict:
        return {
            "problem": self.problem, "dx": self.dx, "dxs": list(self.dxs), "alpha": self.alpha,
            "dt_override": self.dt_override, "T": self.T, "snapshots": list(self.snapshots),
            "out": str(self.out_dir()), "format": self.format, "checks": list(self.checks),
            "seed": self.seed, "jobs": self.jobs, "plots": self.plots, "bump": dict(self.bump),
        }


def parse_number(text: str) -> float:
    """Accept decimals, fractions (``1/4``) and powers of two (``2^-3``)."""
    s = text.strip()
    try:
        if "^" in s:
            base, exp = s.split("^", 1)
            return float(base) ** int(exp)
        return float(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"cannot parse {text!r} as a number") from None


def _pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def _check(doc: dict) -> None:
    v = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        raise ConfigError(e.message, _pointer(e.absolute_path))


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> RunConfig:
    """Read ``path`` (optional), apply ``overrides`` and validate the result."""
    doc: dict = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        if not isinstance(doc, dict):
            raise ConfigError("config must be a JSON object")
    doc = {**doc, **{k: v for k, v in (overrides or {}).items() if v is not None}}
    _check(doc)

    cfg = RunConfig()
    kw = {k: v for k, v in doc.items() if k not in ("dxs", "snapshots", "checks", "bump")}
    for key in ("dxs", "snapshots", "checks"):
        if key in doc:
            kw[key] = tuple(doc[key])
    if "bump" in doc:
        kw["bump"] = {**cfg.bump, **doc["bump"]}
    cfg = replace(cfg, **kw)
    if "snapshots" not in doc:
        cfg = replace(cfg, snapshots=tuple(sorted({0.0, cfg.T})))

    for i, t in enumerate(cfg.snapshots):
        if not 0 <= t <= cfg.T:
            raise ConfigError(f"snapshot time {t} outside [0, T={cfg.T}]", f"/snapshots/{i}")
    dxs = list(cfg.dxs)
    if any(b >= a for a, b in zip(dxs, dxs[1:])):
        raise ConfigError("dx list must be strictly decreasing", "/dxs")
    if not cfg.named:
        try:
            cfg.initial()
        except Exception as exc:
            raise ConfigError(str(exc), "/problem/breakpoints") from None
    return cfg

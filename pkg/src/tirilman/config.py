"""Run configuration: defaults, flat key=value config files, CLI overrides.

Precedence: CLI flags override file values override defaults. The emitted
form re-parses to an equal RunConfig (round-trip stable).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

from .errors import ParseError

ALL_SUITES = (
    "prop1", "prop2", "prop3", "lemma4", "lemma6", "lemma7", "prop9",
    "oracle-norm", "oracle-dual", "invariance",
)

FORMATS = ("json", "csv")


@dataclass(frozen=True)
class RunConfig:
    p: float = 2.0
    gamma: float = 0.5
    seed: int = 12345
    trials: int = 200
    tol: float = 1e-7
    support_cap: int = 512
    dual_cap: int = 64
    cut_cap: int = 10000
    suites: tuple[str, ...] = ALL_SUITES
    out: str = "out"
    formats: tuple[str, ...] = FORMATS

    def __post_init__(self):
        for s in self.suites:
            if s not in ALL_SUITES:
                raise ValueError(f"unknown suite {s!r}")
        for f in self.formats:
            if f not in FORMATS:
                raise ValueError(f"unknown format {f!r}")


_FIELD_TYPES = {
    "p": float,
    "gamma": float,
    "seed": int,
    "trials": int,
    "tol": float,
    "support_cap": int,
    "dual_cap": int,
    "cut_cap": int,
    "suites": "list",
    "out": str,
    "formats": "list",
}


def default_out_dir() -> str:
    return os.environ.get("TIRILMAN_OUT", "out")


def emit_config(cfg: RunConfig) -> str:
    lines = ["# tirilman run configuration"]
    for key in sorted(_FIELD_TYPES):
        value = getattr(cfg, key)
        if isinstance(value, tuple):
            value = ",".join(value)
        lines.append(f"{key}={value!r}" if isinstance(value, str) else f"{key}={value}")
    return "\n".join(lines) + "\n"


def parse_config(text: str) -> dict:
    """Raw overrides from a flat key=value file with # comments."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected key=value, got {line!r}", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        kind = _FIELD_TYPES.get(key)
        if kind is None:
            raise ParseError(f"unknown key {key!r}", line=lineno)
        try:
            if kind == "list":
                out[key] = tuple(v.strip() for v in value.split(",") if v.strip())
            elif kind is str:
                out[key] = value.strip("'\"")
            else:
                out[key] = kind(value)
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return out


def load_config(path: str | None, cli_overrides: dict) -> RunConfig:
    cfg = RunConfig(out=default_out_dir())
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = replace(cfg, **parse_config(fh.read()))
    clean = {k: v for k, v in cli_overrides.items() if v is not None}
    if clean:
        cfg = replace(cfg, **clean)
    return cfg

"""File formats: vector CSV, block files, certificates, reports.

Floats are written with ``repr`` (shortest round-trip form), so every
format re-parses to the exact same binary64 values and reruns with equal
inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import ParseError
from .params import SpaceParams
from .reports import CheckReport
from .vectors import PRIMAL, FiniteVector

VECTOR_HEADER = "position,value"


def format_vector_csv(v: FiniteVector) -> str:
    lines = [VECTOR_HEADER]
    lines.extend(f"{p},{c!r}" for p, c in zip(v.positions, v.values))
    return "\n".join(lines) + "\n"


def parse_vector_csv(text: str, side: str = PRIMAL) -> FiniteVector:
    lines = text.splitlines()
    if not lines or lines[0].strip() != VECTOR_HEADER:
        raise ParseError(f"expected header {VECTOR_HEADER!r}", line=1)
    pairs: list[tuple[int, float]] = []
    prev = 0
    for lineno, raw in enumerate(lines[1:], start=2):
        row = raw.strip()
        if not row:
            continue
        cells = row.split(",")
        if len(cells) != 2:
            raise ParseError(f"expected 'position,value', got {row!r}", line=lineno)
        try:
            pos = int(cells[0])
            val = float(cells[1])
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
        if not math.isfinite(val):
            raise ParseError(f"non-finite value {cells[1]!r}", line=lineno)
        if pos <= prev:
            raise ParseError(f"positions must increase strictly, got {pos}", line=lineno)
        prev = pos
        if val != 0.0:
            pairs.append((pos, val))
    return FiniteVector.from_pairs(pairs, side)


def read_vector_csv(path: str, side: str = PRIMAL) -> FiniteVector:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_vector_csv(fh.read(), side)


def write_vector_csv(path: str, v: FiniteVector) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_vector_csv(v))


def format_block_file(blocks: list[FiniteVector]) -> str:
    sections = []
    for k, blk in enumerate(blocks, start=1):
        sections.append(f"#block {k}\n" + format_vector_csv(blk))
    return "".join(sections)


def parse_block_file(text: str, side: str = PRIMAL) -> list[FiniteVector]:
    blocks: list[FiniteVector] = []
    current: list[str] = []
    saw_any = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("#block"):
            if current:
                blocks.append(parse_vector_csv("\n".join(current), side))
            current = []
            saw_any = True
        else:
            current.append(raw)
    if not saw_any:
        raise ParseError("no '#block k' section found", line=1)
    if current:
        blocks.append(parse_vector_csv("\n".join(current), side))
    return blocks


def format_margins_csv(report: CheckReport) -> str:
    lines = ["index,margin"]
    lines.extend(f"{i},{m!r}" for i, m in enumerate(report.margins))
    return "\n".join(lines) + "\n"


def report_to_dict(report: CheckReport, params: SpaceParams, trials: int,
                   seed: int) -> dict[str, Any]:
    """The stable JSON schema. wall_time_ms stays null so that identical
    (config, seed) runs serialize byte-identically; measured wall time goes
    to the console instead."""
    return {
        "suite": report.suite_id,
        "params": {"p": params.p, "q": params.q, "gamma": params.gamma},
        "trials": trials,
        "seed": seed,
        "margins": {
            "min": report.margin_min,
            "max": report.margin_max,
            "mean": report.margin_mean,
        },
        "worst_instance": report.worst_instance,
        "passed": report.passed,
        "relaxed": report.relaxed,
        "wall_time_ms": None,
    }


def canonical_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"

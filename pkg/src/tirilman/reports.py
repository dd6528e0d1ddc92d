"""Check reports: the outcome of one inequality suite."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

from .params import SpaceParams


@dataclass(frozen=True)
class CheckReport:
    """Margins of one suite run; nonnegative margin means the inequality held.

    ``passed`` is true iff every margin is >= -tolerance. ``worst_instance``
    is a JSON-serializable snapshot of the inputs behind the minimum margin.
    """

    suite_id: str
    instance_count: int
    margins: tuple[float, ...]
    worst_instance: dict[str, Any]
    passed: bool
    constants: dict[str, float]
    tolerance: float
    relaxed: bool = False

    @property
    def margin_min(self) -> float:
        return min(self.margins) if self.margins else 0.0

    @property
    def margin_max(self) -> float:
        return max(self.margins) if self.margins else 0.0

    @property
    def margin_mean(self) -> float:
        if not self.margins:
            return 0.0
        return math.fsum(self.margins) / len(self.margins)


def build_report(
    suite_id: str,
    params: SpaceParams,
    margins: list[float],
    worst_instance: dict[str, Any],
    tolerance: float,
    constants: dict[str, float] | None = None,
    relaxed: bool = False,
    instance_count: int | None = None,
) -> CheckReport:
    """Assemble a report; ``passed`` is derived, never asserted."""
    consts = {"p": params.p, "q": params.q, "gamma": params.gamma}
    if constants:
        consts.update(constants)
    passed = all(m >= -tolerance for m in margins)
    return CheckReport(
        suite_id=suite_id,
        instance_count=len(margins) if instance_count is None else instance_count,
        margins=tuple(margins),
        worst_instance=worst_instance,
        passed=passed,
        constants=consts,
        tolerance=tolerance,
        relaxed=relaxed,
    )


def worst_of(margins: list[float], instances: list[dict[str, Any]]) -> dict[str, Any]:
    """The instance snapshot at the minimum margin (empty when no margins)."""
    if not margins:
        return {}
    idx = min(range(len(margins)), key=lambda i: margins[i])
    snap = dict(instances[idx])
    snap["margin"] = margins[idx]
    snap["index"] = idx
    return snap

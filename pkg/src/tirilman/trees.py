"""Partition trees: the norming functionals of the Tirilman norm.

A tree records one full nested choice of the suprema in the norm formula.
Leaves sit at ambient positions; an internal node with k children carries
the weight gamma * k^(-1/q), bound at construction time so a tree evaluates
without further parameter context. Evaluating a tree on a vector v gives a
value that never exceeds the norm of v, with equality for the tree returned
by the norm engine's backtrace.

Serialized text form: leaves are ``[pos]``; an internal node with k children
is ``(k^{-1/q}γ child child ...)`` with children concatenated in order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .vectors import FiniteVector


@dataclass(frozen=True)
class Leaf:
    """Singleton functional +-e_pos*; evaluates to |v_pos|."""

    position: int

    def span(self) -> tuple[int, int]:
        return (self.position, self.position)

    def serialize(self) -> str:
        return f"[{self.position}]"


@dataclass(frozen=True)
class Node:
    """Internal node: weight * sum of child evaluations, weight = gamma*k^(-1/q)."""

    children: tuple["PartitionTree", ...]
    weight: float

    def __post_init__(self):
        if len(self.children) < 1:
            raise ValueError("internal node needs at least one child")
        if not (0.0 < self.weight):
            raise ValueError("node weight must be positive")
        prev_hi = 0
        for child in self.children:
            lo, hi = child.span()
            if lo <= prev_hi:
                raise ValueError("child position ranges must be disjoint and increasing")
            prev_hi = hi

    @property
    def k(self) -> int:
        return len(self.children)

    def span(self) -> tuple[int, int]:
        return (self.children[0].span()[0], self.children[-1].span()[1])

    def serialize(self) -> str:
        inner = "".join(c.serialize() for c in self.children)
        return f"({self.k}^{{-1/q}}γ {inner})"


PartitionTree = Leaf | Node


@dataclass(frozen=True)
class FlatMax:
    """Marker returned when the sup-norm branch attains.

    Carries the (lowest) argmax position, or None for the zero vector, and
    evaluates like the corresponding single leaf (or 0).
    """

    position: int | None

    def serialize(self) -> str:
        return "[]" if self.position is None else f"[{self.position}]"


Certificate = PartitionTree | FlatMax


def make_node(children: tuple[PartitionTree, ...], gamma: float, q: float) -> Node:
    """Internal node over ``children`` with the canonical weight gamma*k^(-1/q)."""
    k = len(children)
    return Node(children, gamma * k ** (-1.0 / q))


def evaluate_functional(tree: Certificate, v: FiniteVector) -> float:
    """Recursive weighted sum of |v| over the tree's leaves.

    Positions missing from v read as 0. Child sums use exact summation so
    wide nodes do not accumulate rounding error.
    """
    if isinstance(tree, FlatMax):
        return 0.0 if tree.position is None else abs(v.value_at(tree.position))
    lookup = dict(zip(v.positions, v.values))
    return _eval(tree, lookup)


def _eval(tree: PartitionTree, lookup: dict[int, float]) -> float:
    if isinstance(tree, Leaf):
        return abs(lookup.get(tree.position, 0.0))
    return tree.weight * math.fsum(_eval(c, lookup) for c in tree.children)


def functional_coefficients(tree: Certificate) -> dict[int, float]:
    """Leaf weights of the functional: position -> product of node weights."""
    out: dict[int, float] = {}
    if isinstance(tree, FlatMax):
        if tree.position is not None:
            out[tree.position] = 1.0
        return out
    _collect(tree, 1.0, out)
    return out


def _collect(tree: PartitionTree, acc: float, out: dict[int, float]) -> None:
    if isinstance(tree, Leaf):
        out[tree.position] = acc
        return
    for child in tree.children:
        _collect(child, acc * tree.weight, out)


def remap_positions(tree: Certificate, mapping: dict[int, int]) -> Certificate:
    """Rewrite leaf positions through ``mapping`` (used to undo reindexing)."""
    if isinstance(tree, FlatMax):
        return FlatMax(None if tree.position is None else mapping[tree.position])
    if isinstance(tree, Leaf):
        return Leaf(mapping[tree.position])
    return Node(tuple(remap_positions(c, mapping) for c in tree.children), tree.weight)

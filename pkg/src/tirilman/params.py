"""Space parameters (p, q, gamma) and the derived regime flag."""

from __future__ import annotations

import math
from dataclasses import dataclass

#: Relative tolerance used for every norm comparison in the package.
#: k^(-1/q) is irrational for generic q, so a single documented binary64
#: precision keeps the engines and oracles comparable.
REL_TOL = 1e-12


@dataclass(frozen=True)
class SpaceParams:
    """The triple (p, q, gamma) with 1/p + 1/q = 1 and 0 < gamma < 1.

    ``strict_regime`` is True iff gamma * 3^(1/q) < 1, the weight range in
    which the block upper estimates (and everything built on them) hold.
    """

    p: float
    q: float
    gamma: float
    strict_regime: bool

    def root_p(self, n: float) -> float:
        """n^(1/p)."""
        return n ** (1.0 / self.p)

    def root_q(self, n: float) -> float:
        """n^(1/q)."""
        return n ** (1.0 / self.q)

    @property
    def three_root_q(self) -> float:
        """3^(1/q), the constant of the block upper estimates."""
        return 3.0 ** (1.0 / self.q)


def make_space_params(p: float, gamma: float) -> SpaceParams:
    """Validate (p, gamma) and derive q and the regime flag.

    Rejects p <= 1, non-finite p, and gamma outside the open interval (0, 1).
    """
    p = float(p)
    gamma = float(gamma)
    if not math.isfinite(p) or p <= 1.0:
        raise ValueError(f"p must be finite and > 1, got {p!r}")
    if not math.isfinite(gamma) or not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma!r}")
    q = p / (p - 1.0)
    strict = gamma * 3.0 ** (1.0 / q) < 1.0
    return SpaceParams(p=p, q=q, gamma=gamma, strict_regime=strict)

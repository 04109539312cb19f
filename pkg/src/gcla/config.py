"""Run and reduction parameters as validated dataclasses."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .slp import DEFAULT_BUDGET


@dataclass(frozen=True)
class SelfReductionConfig:
    """Parameters of the self-reduction + universe-reduction pipeline.

    ``gamma`` sets the number of prime trials to ceil(gamma log2 m); a NO
    subproblem then survives every prime with probability at most m^-gamma.
    """

    s: int | None = None
    gamma: float = 3.0
    seed: int = 0

    def __post_init__(self):
        if self.s is not None and self.s < 1:
            raise ValueError(f"group size s={self.s} must be >= 1")
        if not self.gamma > 2:
            raise ValueError(f"gamma={self.gamma} must exceed 2")

    def trials(self, m: int) -> int:
        return max(1, math.ceil(self.gamma * math.log2(max(m, 2))))


@dataclass(frozen=True)
class RunConfig:
    """What one CLI invocation needs besides its subcommand-specific inputs."""

    command: str
    seed: int = 0
    budget_n: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.budget_n < 1:
            raise ValueError("--budget-n must be positive")

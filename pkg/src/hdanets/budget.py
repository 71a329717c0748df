"""Exploration limits shared by every state-space builder."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class Budget:
    """Caps on exploration.

    ``max_states`` bounds the number of vertices, cells or ST-states,
    ``max_dim`` the number of concurrently active events in a cell, and
    ``max_step_size`` the size of a multiset step (defaults to ``max_dim``).
    """

    max_states: int = 100_000
    max_dim: int = 8
    max_step_size: int | None = None

    def __post_init__(self):
        if self.max_step_size is None:
            object.__setattr__(self, "max_step_size", self.max_dim)
        for name in ("max_states", "max_dim", "max_step_size"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")


class BudgetExceeded(Exception):
    """Raised when exploration passes ``max_states``.

    ``partial`` holds whatever had been built when the limit was hit.
    """

    def __init__(self, message: str, partial: Any = None):
        super().__init__(message)
        self.partial = partial

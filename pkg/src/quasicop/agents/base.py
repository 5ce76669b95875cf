"""Agent interface contracts shared by all strategies.

Agents are stateful and owned by a single game run.  The engine binds them
to a space, variant, seeded generator, and assertion recorder before
negotiation; randomness must come only from the bound generator so runs
replay byte-identically.
"""

from __future__ import annotations

import random
from typing import Optional, Sequence

from ..engine import AssertionRecorder, GameParams, GameState
from ..spaces.base import Space


class AgentBase:
    role: str = "?"

    def __init__(self):
        self.space: Optional[Space] = None
        self.variant: Optional[str] = None
        self.rng: Optional[random.Random] = None
        self.recorder: Optional[AssertionRecorder] = None
        self.params: Optional[GameParams] = None
        self.match_n: Optional[int] = None
        self.match_treasure = None

    def bind(self, space: Space, variant: str, rng: random.Random,
             recorder: AssertionRecorder) -> None:
        self.space = space
        self.variant = variant
        self.rng = rng
        self.recorder = recorder

    def on_match(self, n: int, treasure) -> None:
        """Cop count and treasure are fixed before any declaration."""
        self.match_n = n
        self.match_treasure = treasure

    def on_params(self, params: GameParams) -> None:
        self.params = params


class CopAgent(AgentBase):
    role = "cops"

    def __init__(self, n: int = 1):
        super().__init__()
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"cop count must be >= 1, got {n!r}")
        self.n = n

    def choose_sigma(self) -> int:
        raise NotImplementedError

    def choose_rho(self, sigma: int, psi: Optional[int] = None) -> int:
        # psi is provided only in the strong variant
        raise NotImplementedError

    def place(self, n: int) -> list:
        raise NotImplementedError

    def move(self, state: GameState) -> list:
        """Return one path per cop; a single-vertex path means stay."""
        raise NotImplementedError


class RobberAgent(AgentBase):
    role = "robber"

    def choose_psi(self, sigma: int, rho: Optional[int] = None) -> int:
        # rho is provided only in the weak variant
        raise NotImplementedError

    def choose_R(self, sigma: int, psi: int, rho: int) -> int:
        raise NotImplementedError

    def place(self, cop_positions: Sequence) -> object:
        raise NotImplementedError

    def move(self, state: GameState) -> list:
        raise NotImplementedError


def truncate_path(path: list, max_edges: int) -> list:
    """First max_edges steps of a path (always keeps the start vertex)."""
    return list(path[:max_edges + 1])

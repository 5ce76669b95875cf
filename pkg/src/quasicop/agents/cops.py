"""Adversary cop strategies: greedy pursuit, random walks, the line
pusher, and scripted replay from a stored trace."""

from __future__ import annotations

from typing import Optional

from ..engine import GameState
from ..errors import ExceedsCutoffError
from ..spaces.base import Space
from ..trace import Trace
from .base import CopAgent, truncate_path


def _toward(space: Space, cur, target, steps: int) -> list:
    """A path of at most `steps` edges from cur along a geodesic to target.

    Spaces whose exact distances are only reachable by search get a
    fallback: greedy descent on the distance lower bound, which still
    closes in on hyperbolic-looking spaces where the bound is tight.
    """
    if steps <= 0 or cur == target:
        return [cur]
    # spaces that certify ball membership by word length are the ones whose
    # exact distances need deep searches; keep those shallow and fall back
    cutoff = steps + 8 if hasattr(space, "word_length_upper_bound") else None
    try:
        d = space.distance(cur, target, cutoff=cutoff)
    except Exception:
        d = None
    if d is not None:
        return truncate_path(space.geodesic(cur, target), min(steps, d))
    path = [cur]
    here = cur
    for _ in range(steps):
        best = None
        best_key = None
        for nxt in space.neighbors(here):
            key = (space.distance_lower_bound(nxt, target), space.sort_key(nxt))
            if best_key is None or key < best_key:
                best, best_key = nxt, key
        lb_here = space.distance_lower_bound(here, target)
        if best_key is None or best_key[0] > lb_here:
            break
        path.append(best)
        here = best
    return path


class GreedyPursuitCop(CopAgent):
    """Every cop takes sigma geodesic steps toward the robber."""

    def __init__(self, n: int = 1, sigma: int = 1, rho: int = 1):
        super().__init__(n)
        self.sigma = sigma
        self.rho = rho

    def choose_sigma(self) -> int:
        return self.sigma

    def choose_rho(self, sigma: int, psi: Optional[int] = None) -> int:
        return self.rho

    def place(self, n: int) -> list:
        return [self.space.base] * n

    def move(self, state: GameState) -> list:
        return [
            _toward(self.space, c, state.robber_position, self.params.sigma)
            for c in state.cop_positions
        ]


class RandomCop(CopAgent):
    """Uniform random walks of random length up to sigma."""

    def __init__(self, n: int = 1, sigma: int = 1, rho: int = 1):
        super().__init__(n)
        self.sigma = sigma
        self.rho = rho

    def choose_sigma(self) -> int:
        return self.sigma

    def choose_rho(self, sigma: int, psi: Optional[int] = None) -> int:
        return self.rho

    def place(self, n: int) -> list:
        return [self.space.base] * n

    def move(self, state: GameState) -> list:
        paths = []
        for c in state.cop_positions:
            length = self.rng.randint(0, self.params.sigma)
            path = [c]
            for _ in range(length):
                path.append(self.rng.choice(self.space.neighbors(path[-1])))
            paths.append(path)
        return paths


class LinePusherCop(CopAgent):
    """On the line: walk toward the robber every stage, never past it.

    Keeps the robber moving away from the treasure, which is the whole
    one-dimensional cop side of the story.
    """

    def __init__(self, n: int = 1, sigma: int = 1, rho: int = 1):
        super().__init__(n)
        self.sigma = sigma
        self.rho = rho

    def choose_sigma(self) -> int:
        return self.sigma

    def choose_rho(self, sigma: int, psi: Optional[int] = None) -> int:
        return self.rho

    def place(self, n: int) -> list:
        return [self.space.base] * n

    def move(self, state: GameState) -> list:
        paths = []
        for c in state.cop_positions:
            d = self.space.distance(c, state.robber_position)
            steps = min(self.params.sigma, d)
            paths.append(truncate_path(
                self.space.geodesic(c, state.robber_position), steps))
        return paths


class ScriptedCop(CopAgent):
    """Replays the cop side of a stored trace verbatim."""

    def __init__(self, trace: Trace):
        super().__init__(trace.params["n"])
        self.trace = trace

    def choose_sigma(self) -> int:
        return self.trace.params["sigma"]

    def choose_rho(self, sigma: int, psi: Optional[int] = None) -> int:
        return self.trace.params["rho"]

    def place(self, n: int) -> list:
        return [self.space.from_obj(c) for c in self.trace.cop_placements]

    def move(self, state: GameState) -> list:
        idx = state.stage - 1
        if idx >= len(self.trace.stages):
            # past the recorded game: stand still
            return [[c] for c in state.cop_positions]
        rec = self.trace.stages[idx]
        return [[self.space.from_obj(v) for v in path]
                for path in rec.cop_moves]

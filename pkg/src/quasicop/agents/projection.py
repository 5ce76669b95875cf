"""Coordinate-pair retraction: play a plane strategy inside a bigger grid.

The wrapper freezes every coordinate outside the chosen pair and forwards
a two-coordinate shadow of the match to an inner agent: projected cop
positions in, plane paths out, lifted back by reinstating the frozen
coordinates.  Dropping coordinates never increases taxicab distance, so
any clearance the inner agent maintains in the plane also holds upstairs.
"""

from __future__ import annotations

import random

from ..engine import GameParams, GameState
from ..errors import StrategyUnavailableError
from ..spaces.grid import GridSpace
from .base import RobberAgent


class ProjectionEvader(RobberAgent):
    def __init__(self, inner: RobberAgent, pair: tuple = (0, 1)):
        super().__init__()
        if (len(pair) != 2 or pair[0] == pair[1]
                or any(not isinstance(i, int) or i < 0 for i in pair)):
            raise StrategyUnavailableError(
                f"need two distinct nonnegative coordinates, got {pair!r}")
        self.inner = inner
        self.pair = tuple(pair)
        self._frozen = None            # full tuple; pair slots ignored

    def bind(self, space, variant, rng, recorder) -> None:
        super().bind(space, variant, rng, recorder)
        if not isinstance(space, GridSpace) or space.dim < 2:
            raise StrategyUnavailableError(
                "coordinate projection needs a grid of dimension >= 2")
        if max(self.pair) >= space.dim:
            raise StrategyUnavailableError(
                f"coordinate pair {self.pair} out of range for {space.kind}")
        self.plane = GridSpace(2)
        self.inner.bind(self.plane, variant,
                        random.Random(rng.getrandbits(64)), recorder)

    def on_match(self, n: int, treasure) -> None:
        super().on_match(n, treasure)
        self._frozen = treasure
        self.inner.on_match(n, self._drop(treasure))

    def _drop(self, v) -> tuple:
        return (v[self.pair[0]], v[self.pair[1]])

    def _lift(self, p) -> tuple:
        out = list(self._frozen)
        out[self.pair[0]], out[self.pair[1]] = p
        return tuple(out)

    def choose_psi(self, sigma, rho=None) -> int:
        return self.inner.choose_psi(sigma, rho)

    def choose_R(self, sigma, psi, rho) -> int:
        return self.inner.choose_R(sigma, psi, rho)

    def on_params(self, params: GameParams) -> None:
        super().on_params(params)
        self.inner.on_params(GameParams(
            n=params.n, treasure=self._drop(self.match_treasure),
            sigma=params.sigma, psi=params.psi, rho=params.rho,
            big_r=params.big_r, horizon=params.horizon))

    def place(self, cop_positions):
        shadow = self.inner.place(tuple(self._drop(c)
                                        for c in cop_positions))
        return self._lift(shadow)

    def move(self, state: GameState) -> list:
        # the frozen coordinates are our own, not the treasure's, in case
        # the engine ever starts us off the spine
        self._frozen = state.robber_position
        shadow = GameState(
            tuple(self._drop(c) for c in state.cop_positions),
            self._drop(state.robber_position), state.stage, state.phase)
        return [self._lift(p) for p in self.inner.move(shadow)]


def projection_evader(inner: RobberAgent, pair: tuple = (0, 1)
                      ) -> RobberAgent:
    return ProjectionEvader(inner, pair)

"""Evader exploiting a failed bottleneck: a midpoint all detours avoid.

The witness is a segment x--y--z with y the metric midpoint plus a detour
path gamma from x to z that stays far from y.  Against one weak cop the
robber alternates between y and x: it holds y while the cop keeps its
distance, retreats to x the moment the cop commits to y, and reclaims y
as soon as the cop steps back out.  Each switch happens in a single turn,
via the straight half of the segment or around the detour, whichever the
cop is not guarding.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..analysis import bottleneck_witness
from ..engine import GameParams, GameState, WEAK
from ..errors import StrategyUnavailableError
from .base import RobberAgent


class BottleneckEvader(RobberAgent):
    def __init__(self):
        super().__init__()
        self.witness = None
        self.lam = 0
        self.pos = None
        self._cut = 0

    # -- negotiation -------------------------------------------------------

    def choose_psi(self, sigma: int, rho: Optional[int] = None) -> int:
        if self.variant != WEAK or rho is None:
            raise StrategyUnavailableError(
                "bottleneck evader plays the weak variant only")
        self.lam = sigma + rho
        self._cut = 5 * self.lam + 1
        self.witness = bottleneck_witness(self.space, self.lam)
        w = self.witness
        # longest single-turn switch: around the detour plus one half
        return max(len(w.eta_minus) - 1,
                   len(w.gamma) - 1 + len(w.eta_plus) - 1)

    def choose_R(self, sigma: int, psi: int, rho: int) -> int:
        w = self.witness
        base = self.space.base
        return max(self.space.distance(base, v)
                   for v in w.gamma + w.eta_minus + w.eta_plus)

    def on_params(self, params: GameParams) -> None:
        super().on_params(params)
        if params.n != 1:
            raise StrategyUnavailableError(
                "bottleneck evader handles exactly one cop")

    # -- helpers -----------------------------------------------------------

    def _dist(self, u, w, cutoff: int):
        d = self.space.distance(u, w, cutoff=cutoff)
        return cutoff + 1 if d is None else d

    def _path_clearance(self, path: Sequence, c) -> int:
        """Min cop distance over path vertices, truncated above 3*lam."""
        cutoff = 3 * self.lam
        return min(self._dist(v, c, cutoff) for v in path)

    def _blocked(self, path: Sequence, c) -> bool:
        return self._path_clearance(path, c) < self.lam

    def _pick_switch(self, c, to_y: bool) -> list:
        """A one-turn path between x and y avoiding the cop by >= lam."""
        w, lam = self.witness, self.lam
        blocked_minus = self._blocked(w.eta_minus, c)
        blocked_plus = self._blocked(w.eta_plus, c)
        self.recorder.check(
            "eta-exclusivity", not (blocked_minus and blocked_plus),
            "cop guards both halves of the through segment at once")
        if to_y:
            path = list(w.eta_minus) if not blocked_minus else \
                list(w.gamma) + list(reversed(w.eta_plus))[1:]
        else:
            path = list(reversed(w.eta_minus)) if not blocked_minus else \
                list(w.eta_plus) + list(reversed(w.gamma))[1:]
        self.recorder.check(
            "path-clearance", self._path_clearance(path, c) >= lam,
            f"switch path dips under {lam} from the cop")
        return path

    def _invariant(self, c) -> None:
        w, lam = self.witness, self.lam
        dcy = self._dist(c, w.y, self._cut)
        at_y = self.pos == w.y and dcy >= 4 * lam
        at_x = self.pos == w.x and dcy < 4 * lam
        self.recorder.check(
            "two-state-invariant", at_y or at_x,
            f"at {self.space.serialize(self.pos)} with cop {dcy} from the "
            f"midpoint")

    # -- game callbacks ----------------------------------------------------

    def place(self, cop_positions: Sequence):
        w = self.witness
        c = cop_positions[0]
        if self._dist(c, w.y, self._cut) >= 4 * self.lam:
            self.pos = w.y
        else:
            self.pos = w.x
        self._invariant(c)
        return self.pos

    def move(self, state: GameState) -> list:
        w, lam = self.witness, self.lam
        c = state.cop_positions[0]
        dcy = self._dist(c, w.y, self._cut)
        path = [self.pos]
        if self.pos == w.y:
            if dcy < 4 * lam:
                self.recorder.check(
                    "entry-window", 3 * lam <= dcy < 4 * lam,
                    f"cop entered to {dcy}, expected [{3 * lam}, {4 * lam})")
                self.recorder.check(
                    "detour-clearance", self._path_clearance(w.gamma, c)
                    > 2 * lam,
                    f"detour dips within {2 * lam} of the entering cop")
                path = self._pick_switch(c, to_y=False)
        else:
            if dcy >= 4 * lam:
                self.recorder.check(
                    "exit-window", 4 * lam <= dcy <= 5 * lam,
                    f"cop left to {dcy}, expected [{4 * lam}, {5 * lam}]")
                self.recorder.check(
                    "detour-clearance", self._path_clearance(w.gamma, c)
                    >= lam,
                    f"detour dips under {lam} from the leaving cop")
                path = self._pick_switch(c, to_y=True)
        self.pos = path[-1]
        self._invariant(c)
        return path

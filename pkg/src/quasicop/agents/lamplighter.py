"""Evader for lamplighter streets: keep a disagreeing lamp per cop.

Each cop is assigned two reserved sites, one in the block just right of
the origin and one a fixed stretch further out.  The stretch is chosen so
that rewriting one site's lamp and the other's in the same move is beyond
cop speed: a single cop move can ruin at most one of its two
disagreements, and the robber re-establishes both every stage by sweeping
the street once, rewriting every reserved site to the opposite of what
its cop currently shows.  Any walk from a cop to the robber has to cross
both of that cop's disagreeing sites, so the robber is never in reach,
while the sweep itself brushes the treasure's neighborhood each stage.

Writes ride on edge traversals (crossing the edge above a site rewrites
it, in either direction), so the sweep overshoots the outermost reserved
site by one and its round trip has length exactly 2 * (stretch + n).
That round-trip length is declared as both the robber speed and the ball
radius.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..engine import GameState
from ..errors import StrategyUnavailableError
from ..spaces.lamplighter import LamplighterSpace
from .base import RobberAgent


class LamplighterEvader(RobberAgent):
    """Weak-variant robber for lamplighter spaces of any block width."""

    def __init__(self):
        super().__init__()
        self.stretch = 0            # reserved-pair separation, sigma+rho+1
        self.top = 0                # sweep turnaround position
        self.start_pos = 0          # sweep anchor, leftmost reserved site
        self.site_owner: dict = {}  # reserved site -> cop index

    # -- negotiation ---------------------------------------------------

    def choose_psi(self, sigma: int, rho: Optional[int] = None) -> int:
        if rho is None:
            raise StrategyUnavailableError(
                "lamplighter evader needs to see the cop reach before "
                "declaring speed (weak variant only)")
        if not isinstance(self.space, LamplighterSpace):
            raise StrategyUnavailableError(
                f"lamplighter evader cannot run on {self.space.kind}")
        if self.match_n is None:
            raise StrategyUnavailableError(
                "cop count not announced before negotiation")
        n = self.match_n
        s = sigma + rho + 1
        if n > 0 and s < n:
            # the two reserved blocks [1..n] and [s+1..s+n] overlap
            raise StrategyUnavailableError(
                f"reserved sites collide: {n} cops need sigma+rho+1 >= {n}, "
                f"got {s}")
        self.stretch = s
        self.site_owner = {}
        for i in range(n):
            self.site_owner[1 + i] = i
            self.site_owner[s + 1 + i] = i
        self.start_pos = 1 if n else 0
        self.top = s + n + 1
        return 2 * (s + n) if n else 1

    def choose_R(self, sigma: int, psi: int, rho: int) -> int:
        return psi

    # -- lamp bookkeeping ------------------------------------------------

    def _flip(self, val: int) -> int:
        return 1 if val == 0 else 0

    def _pair(self, i: int) -> tuple:
        return (1 + i, self.stretch + 1 + i)

    def _matches(self, v, cops: Sequence) -> list:
        """Per cop, how many of its reserved sites agree between v and it."""
        out = []
        for i, c in enumerate(cops):
            out.append(sum(
                LamplighterSpace.get_lamp(v, x) == LamplighterSpace.get_lamp(c, x)
                for x in self._pair(i)))
        return out

    # -- play ------------------------------------------------------------

    def place(self, cop_positions: Sequence) -> object:
        v = self.space.base
        for site, i in self.site_owner.items():
            cop_val = LamplighterSpace.get_lamp(cop_positions[i], site)
            v = self.space.set_lamp(v, site, self._flip(cop_val))
        v = (v[0], self.start_pos)
        self.recorder.check(
            "lamp-mismatch",
            all(m == 0 for m in self._matches(v, cop_positions)),
            "placement must disagree at every reserved site")
        return v

    def move(self, state: GameState) -> list:
        v = state.robber_position
        if not self.site_owner:
            return [v]
        cops = state.cop_positions
        self.recorder.check(
            "sweep-anchored", v[1] == self.start_pos,
            f"stage starts at {v[1]}, sweep anchor is {self.start_pos}")
        pre = self._matches(v, cops)
        self.recorder.check(
            "cop-match-budget", all(m <= 1 for m in pre),
            f"a cop move rewrote both reserved sites: {pre}")

        target = {}
        for site in range(1, self.top):
            i = self.site_owner.get(site)
            if i is None:
                target[site] = LamplighterSpace.get_lamp(v, site)
            else:
                target[site] = self._flip(
                    LamplighterSpace.get_lamp(cops[i], site))

        path = [v]
        lamps, pos = v
        for p in range(pos, self.top):
            lamps, _ = self.space.set_lamp((lamps, p), p, target[p])
            path.append((lamps, p + 1))
        for p in range(self.top, self.start_pos, -1):
            lamps, _ = self.space.set_lamp((lamps, p), p - 1, target[p - 1])
            path.append((lamps, p - 1))

        self.recorder.check(
            "loop-length", len(path) - 1 == self.params.psi,
            f"sweep has {len(path) - 1} edges, declared psi {self.params.psi}")
        self.recorder.check(
            "lamp-mismatch",
            all(m == 0 for m in self._matches(path[-1], cops)),
            "sweep must leave every reserved site disagreeing")
        return path

"""Search-based oracle evader: maximize the minimum cop distance.

Stands in for robber strategies that are cited rather than constructed.
It never crosses inside a configurable safety margin; if no move keeps it
outside the margin it raises rather than degrade, so callers relying on the
margin as a proof obligation see the failure.
"""

from __future__ import annotations

from collections import deque
from typing import Optional, Sequence

from ..engine import GameState
from ..errors import OracleCaughtError
from ..spaces.base import Space
from .base import RobberAgent


class GreedyMaxminEvader(RobberAgent):
    def __init__(self, margin: int, psi: Optional[int] = None,
                 big_r: Optional[int] = None):
        super().__init__()
        if margin < 0:
            raise ValueError("margin must be >= 0")
        self.margin = margin
        self._psi = psi
        self._big_r = big_r

    # -- negotiation -------------------------------------------------------

    def choose_psi(self, sigma: int, rho: Optional[int] = None) -> int:
        if self._psi is None:
            self._psi = sigma + (rho if rho is not None else self.margin) + 1
        return self._psi

    def choose_R(self, sigma: int, psi: int, rho: int) -> int:
        if self._big_r is None:
            self._big_r = 4 * (sigma + rho + 1)
        return self._big_r

    # -- helpers -----------------------------------------------------------

    def _min_cop_dist(self, v, cops: Sequence, cutoff: int) -> int:
        """Min distance to a cop, capped at cutoff + 1 (treated as 'far')."""
        best = cutoff + 1
        for c in cops:
            d = self.space.distance(v, c, cutoff=min(best, cutoff))
            if d is not None and d < best:
                best = d
        return best

    def _is_safe(self, v, cops: Sequence) -> bool:
        return self._min_cop_dist(v, cops, self.margin) > self.margin

    def _best_endpoint(self, start, cops: Sequence, depth: int):
        """BFS inside the safe subgraph; pick the endpoint maximizing the
        capped min cop distance, tie-break nearest the base, then by
        serialization.  Returns (endpoint, parent map) or None if even the
        start vertex is inside the margin."""
        space = self.space
        if not self._is_safe(start, cops):
            return None
        cutoff = self.margin + depth + 2
        skey = space._key(start)
        parents = {skey: None}
        frontier = deque([(start, 0)])
        best = None
        best_rank = None
        while frontier:
            v, dist = frontier.popleft()
            rank = (
                -self._min_cop_dist(v, cops, cutoff),
                space.distance(v, space.base),
                space.sort_key(v),
            )
            if best_rank is None or rank < best_rank:
                best, best_rank = v, rank
            if dist == depth:
                continue
            for w in space.neighbors(v):
                k = space._key(w)
                if k in parents:
                    continue
                if not self._is_safe(w, cops):
                    continue
                parents[k] = v
                frontier.append((w, dist + 1))
        return best, parents

    def _path_to(self, start, end, parents: dict) -> list:
        space = self.space
        path = [end]
        while path[-1] != start:
            path.append(parents[space._key(path[-1])])
        path.reverse()
        return path

    # -- play --------------------------------------------------------------

    def place(self, cop_positions: Sequence):
        radius = min(self.params.big_r,
                     self.margin + self.params.psi + 2)
        found = self._best_endpoint(self.space.base, cop_positions, radius) \
            if self._is_safe(self.space.base, cop_positions) else None
        if found is None:
            # base itself is inside the margin: scan outward for any safe
            # start, still bounded by the declared ball radius
            candidates = [v for v in self.space.ball(self.space.base, radius)
                          if self._is_safe(v, cop_positions)]
            if not candidates:
                raise OracleCaughtError(
                    f"no safe placement within radius {radius}")
            cutoff = self.margin + self.params.psi + 2
            return min(candidates, key=lambda v: (
                -self._min_cop_dist(v, cop_positions, cutoff),
                self.space.distance(v, self.space.base),
                self.space.sort_key(v)))
        best, _ = found
        return best

    def move(self, state: GameState) -> list:
        found = self._best_endpoint(state.robber_position,
                                    state.cop_positions, self.params.psi)
        if found is None:
            raise OracleCaughtError(
                f"all paths breach the safety margin {self.margin} at stage "
                f"{state.stage}")
        best, parents = found
        return self._path_to(state.robber_position, best, parents)

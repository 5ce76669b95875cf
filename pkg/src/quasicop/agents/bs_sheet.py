"""Evader for the affine-map spaces: hop between translated sheets.

A match against n cops runs on the stretch-factor-(n+1) space, where the
robber works inside n+1 horizontal translates of one tall rectangle (the
sheets): sheet i holds the points at height k in [0, 8*reach] whose
translation part is i plus a bounded multiple of m^k.  The robber rests
at the top corner of a sheet whose watched band of heights is cop-free.
A cop climbing into that band, or simply getting metrically close, sends
the robber across to a fresh sheet along a corridor: out along the
resting row, straight down, across the bottom row, back up.  Counting
pins both choices: n cops can neither contest all n other sheets nor
shadow all n+1 corridors, and an open corridor keeps its bottom window
exponentially farther from every cop's horizontal shadow than a cop
could cover within its reach.  The crossing is spelled as a generator
word and walked over as many stages as the declared speed allows,
ignoring cops until it lands.  Every vertex touched this way has an
evident short spelling, which keeps the whole strategy inside the
declared return ball.
"""

from __future__ import annotations

from typing import Optional, Sequence

from ..engine import GameState
from ..errors import StrategyUnavailableError
from ..spaces.bs import BsSpace
from .base import RobberAgent


class BsSheetEvader(RobberAgent):
    """Strong-variant robber for the affine-map spaces."""

    GEN = {"a+": (1, 0, 0), "a-": (-1, 0, 0),
           "t+": (0, 0, 1), "t-": (0, 0, -1)}

    def __init__(self):
        super().__init__()
        self.cop_speed = 0       # planned per-stage cop speed, >= n+1
        self.reach = 0           # planned capture reach, > 3 * cop_speed
        self.height = 0          # resting height, 8 * reach
        self.watch_floor = 0     # lowest watched height, ceil(reach / 2)
        self.sheet = 0           # index of the sheet currently rested in
        self.dest = 0            # landing sheet of the current crossing
        self.pending: list = []  # unwalked letters of the current crossing
        self.corridor: Optional[tuple] = None  # (from, to, window index)

    # -- negotiation -----------------------------------------------------

    def choose_psi(self, sigma: int, rho: Optional[int] = None) -> int:
        if rho is not None:
            raise StrategyUnavailableError(
                "sheet evader commits to its speed before the cop reach "
                "is set (strong variant only)")
        if not isinstance(self.space, BsSpace):
            raise StrategyUnavailableError(
                f"sheet evader cannot run on {self.space.kind}")
        if self.match_n is None:
            raise StrategyUnavailableError(
                "cop count not announced before negotiation")
        if self.space.m != self.match_n + 1:
            raise StrategyUnavailableError(
                f"{self.match_n} cops call for stretch factor "
                f"{self.match_n + 1}, this space has {self.space.m}")
        self.cop_speed = max(sigma, self.match_n + 1)
        return 17 * self.cop_speed

    def choose_R(self, sigma: int, psi: int, rho: int) -> int:
        self.reach = max(rho, 3 * self.cop_speed + 1)
        self.height = 8 * self.reach
        self.watch_floor = -(-self.reach // 2)
        return self.match_n * 2 ** self.height + self.height + self.match_n

    # -- sheet coordinates -------------------------------------------------

    def _sheet_member(self, v, i: int) -> bool:
        """v lies in sheet i: at height k the offset from i must be a
        multiple of m^k, with the multiplier inside the width bound."""
        num, exp, k = v
        if exp != 0 or not 0 <= k <= self.height:
            return False
        off = num - i
        step = self.space.m ** k
        if off < 0 or off % step:
            return False
        return off // step <= self.match_n * 2 ** (self.height - k)

    def _in_watched_band(self, v, i: int) -> bool:
        return v[2] >= self.watch_floor and self._sheet_member(v, i)

    def _on_corridor(self, v) -> bool:
        if self.corridor is None:
            return False
        i, j, w = self.corridor
        num, exp, k = v
        if exp != 0:
            return False
        stride = self.space.m ** self.height
        if k == self.height:
            # transit along the resting row between window tops
            for anchor in (i, j):
                off = num - anchor
                if off % stride == 0 and 0 <= off // stride <= w:
                    return True
            return False
        if 0 <= k <= self.height and num in (i + w * stride, j + w * stride):
            return True
        return (k == 0
                and min(i, j) + w * stride <= num <= max(i, j) + w * stride)

    def _region_ok(self, path: Sequence) -> bool:
        return all(
            any(self._sheet_member(u, s) for s in range(self.match_n + 1))
            or self._on_corridor(u)
            for u in path)

    # -- play ------------------------------------------------------------

    def place(self, cop_positions: Sequence) -> object:
        free = [i for i in range(self.match_n + 1)
                if not any(self._in_watched_band(c, i)
                           for c in cop_positions)]
        self.recorder.check(
            "sheet-available", bool(free),
            "every sheet's watched band holds a cop at placement")
        self.sheet = free[0] if free else 0
        v = (self.sheet, 0, self.height)
        self.recorder.check(
            "sheet-region", self._sheet_member(v, self.sheet),
            "resting corner fell outside its own sheet")
        return v

    def move(self, state: GameState) -> list:
        if self.pending:
            return self._walk(state.robber_position)
        v = state.robber_position
        if self._threatened(v, state.cop_positions):
            self._plan_crossing(state.cop_positions)
            return self._walk(v)
        return [v]

    def _threatened(self, v, cops: Sequence) -> bool:
        for c in cops:
            if self._in_watched_band(c, self.sheet):
                return True
            if self.space.distance(c, v, cutoff=3 * self.reach) is not None:
                return True
        return False

    def _plan_crossing(self, cops: Sequence) -> None:
        n, m = self.match_n, self.space.m
        i = self.sheet
        free = [j for j in range(n + 1) if j != i
                and not any(self._in_watched_band(c, j) for c in cops)]
        self.recorder.check(
            "sheet-available", bool(free),
            f"no cop-free sheet to cross to from sheet {i}")
        j = free[0] if free else (i + 1) % (n + 1)

        stride = m ** self.height
        margin = 2 * 2 ** (3 * self.reach)
        shadows = [self.space.q_value(c) for c in cops]
        open_windows = []
        for w in range(n + 1):
            lo = min(i, j) + w * stride
            hi = max(i, j) + w * stride
            if all(q < lo - margin or q > hi + margin for q in shadows):
                open_windows.append(w)
        self.recorder.check(
            "path-available", bool(open_windows),
            "every crossing window sits in a cop's horizontal shadow")
        w = open_windows[0] if open_windows else 0

        out = "a+" if j > i else "a-"
        self.pending = (["a+"] * w + ["t-"] * self.height
                        + [out] * abs(j - i)
                        + ["t+"] * self.height + ["a-"] * w)
        self.corridor = (i, j, w)
        self.dest = j

    def _walk(self, v) -> list:
        path = [v]
        while self.pending and len(path) - 1 < self.params.psi:
            v = self.space.mul(v, self.GEN[self.pending.pop(0)])
            path.append(v)
        self.recorder.check(
            "sheet-region", self._region_ok(path),
            "crossing stepped outside the sheets and its own corridor")
        if not self.pending:
            landing = (self.dest, 0, self.height)
            self.recorder.check(
                "flee-endpoint", path[-1] == landing,
                f"crossing ended at {path[-1]}, expected {landing}")
            self.sheet = self.dest
            self.corridor = None
        return path

"""Evader that shuttles between the two anchors of a wide geodesic bigon.

Against one pursuer on a space admitting arbitrarily wide bigons, the
robber waits at one anchor until the pursuer closes in, then crosses to
the opposite anchor along whichever side of the bigon the pursuer has not
cut off.  The crossing is committed as a whole: the pursuer is too slow to
both force the crossing and intercept it.  Every distance bound the safety
argument rests on is re-checked numerically through the bound recorder.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence

from ..analysis import find_bigon_exact_width
from ..engine import GameParams, GameState, STRONG
from ..errors import StrategyUnavailableError
from .base import RobberAgent

INF = math.inf


class BigonEvader(RobberAgent):
    """Anchor-shuttling evader for spaces with wide bigons.

    Declares speed 96 times the pursuer speed, then finds a bigon wider
    than 32 times the reach (width > 32*max(reach, speed) so the shuttle
    thresholds separate even against a fast short-reach pursuer).  The key
    scale is lam = width/16: the pursuer triggers a crossing at distance
    under 5*lam, sides are blocked within 2*lam, and all safety margins
    are asserted to exceed lam.
    """

    def __init__(self):
        super().__init__()
        self.witness = None
        self.delta = 0
        self.lam = Fraction(0)
        self.side = 0            # 0: anchored on gamma, 1: on gamma_prime
        self.pos = None
        self.pending: list = []
        self.frame: Optional[dict] = None
        self._cut = 0

    # -- negotiation -------------------------------------------------------

    def choose_psi(self, sigma: int, rho: Optional[int] = None) -> int:
        if self.variant != STRONG:
            raise StrategyUnavailableError(
                "bigon evader plays the strong variant only")
        return 96 * sigma

    def choose_R(self, sigma: int, psi: int, rho: int) -> int:
        bound = 32 * max(rho, sigma)
        witness = None
        for delta in (bound + 1, bound + 2):
            try:
                witness = find_bigon_exact_width(self.space, delta)
                break
            except StrategyUnavailableError:
                continue
        if witness is None:
            raise StrategyUnavailableError(
                f"no bigon wider than {bound} found")
        self.witness = witness
        self.delta = witness.delta
        self.lam = Fraction(witness.delta, 16)
        # sanity on the scales the whole argument hangs on
        if not (self.delta > 32 * rho and self.lam > 2 * rho):
            raise StrategyUnavailableError(
                f"bigon width {self.delta} too small for reach {rho}")
        # distances up to 9*lam discriminate every threshold below
        self._cut = math.ceil(9 * self.lam) + 1
        base = self.space.base
        spread = max(self.space.distance(base, v)
                     for v in witness.gamma + witness.gamma_prime)
        return spread + self.delta

    def on_params(self, params: GameParams) -> None:
        super().on_params(params)
        if params.n != 1:
            raise StrategyUnavailableError(
                "bigon evader handles exactly one cop")

    # -- helpers -----------------------------------------------------------

    def _dist(self, u, w):
        d = self.space.distance(u, w, cutoff=self._cut)
        return INF if d is None else d

    def _anchors(self):
        w = self.witness
        return w.gamma[w.t], w.gamma_prime[w.t]

    def _side_blocked(self, curve, c0, direction: int) -> bool:
        """Pursuer within 2*lam of some curve vertex on this side of t."""
        t = self.witness.t
        end = len(curve) - 1 if direction > 0 else 0
        for i in range(t, end + direction, direction):
            if self._dist(curve[i], c0) < 2 * self.lam:
                return True
        return False

    def _crossing(self, curve, other, direction: int):
        """The committed crossing path and the frame for its case checks."""
        t, delta = self.witness.t, self.delta
        ell = len(curve) - 1
        end = ell if direction > 0 else 0
        j = t + direction * delta
        far_half = {curve[i] for i in range(t, end + direction, direction)}
        if 0 <= j <= ell:
            eta = [curve[i] for i in range(t, j + direction, direction)]
            cross = self.space.geodesic(curve[j], other[j])
            if cross[0] != curve[j]:
                cross = cross[::-1]
            eta += cross[1:]
            eta += [other[i]
                    for i in range(j - direction, t - direction, -direction)]
            far_end = (curve[j], other[j])
        else:
            # the bigon endpoint is nearer than delta: cross over there
            eta = [curve[i] for i in range(t, end + direction, direction)]
            eta += [other[i]
                    for i in range(end - direction, t - direction,
                                   -direction)]
            far_end = None
        frame = {
            "origin": curve[t],
            "target": other[t],
            "far_half": far_half,
            "far_end": far_end,
            "im_other": set(other),
        }
        return eta, frame

    def _check_cases(self, r, cops: Sequence) -> None:
        """One named check per applicable case of the safety argument.

        Cases a-d cover a crossing through an interior chord; when the
        crossing detours via a bigon endpoint instead, case e replaces
        b and c.  At least one case must apply at every visited vertex.
        """
        f = self.frame
        lam = self.lam
        d_target = self._dist(r, f["target"])
        for c in cops:
            drc = self._dist(r, c)
            hit = False
            if r in f["far_half"]:
                hit = True
                self.recorder.check(
                    "case-a", drc > lam,
                    f"on own side at {self.space.serialize(r)}: "
                    f"pursuer distance {drc} needs > {lam}")
            if f["far_end"] is not None:
                if self._dist(r, f["far_end"][0]) <= 9 * lam:
                    hit = True
                    self.recorder.check(
                        "case-b", drc > lam,
                        f"near chord start: pursuer distance {drc} "
                        f"needs > {lam}")
                if self._dist(r, f["far_end"][1]) <= 7 * lam:
                    hit = True
                    self.recorder.check(
                        "case-c", drc > 3 * lam,
                        f"near chord end: pursuer distance {drc} "
                        f"needs > {3 * lam}")
            if d_target <= 9 * lam:
                hit = True
                self.recorder.check(
                    "case-d", drc > lam,
                    f"near target anchor: pursuer distance {drc} "
                    f"needs > {lam}")
            if f["far_end"] is None and d_target >= 9 * lam \
                    and r in f["im_other"]:
                hit = True
                self.recorder.check(
                    "case-e", drc > 3 * lam,
                    f"far side of endpoint detour: pursuer distance {drc} "
                    f"needs > {3 * lam}")
            self.recorder.check(
                "case-coverage", hit,
                f"no case applies at {self.space.serialize(r)}")

    def _advance(self, cops: Sequence) -> list:
        take = min(self.params.psi, len(self.pending))
        path = [self.pos] + self.pending[:take]
        del self.pending[:take]
        self.pos = path[-1]
        origin = self.frame["origin"]
        for c in cops:
            d = self._dist(origin, c)
            self.recorder.check(
                "anchor-window", 3 * self.lam < d < 6 * self.lam,
                f"pursuer at {d} from origin anchor, needs "
                f"({3 * self.lam}, {6 * self.lam})")
        for r in path:
            self._check_cases(r, cops)
        if not self.pending:
            self.frame = None
        return path

    # -- game callbacks ----------------------------------------------------

    def place(self, cop_positions: Sequence):
        p, pp = self._anchors()
        dp = min(self._dist(p, c) for c in cop_positions)
        dpp = min(self._dist(pp, c) for c in cop_positions)
        self.side = 0 if dp >= dpp else 1
        self.pos = p if self.side == 0 else pp
        self.recorder.check(
            "placement-separation", max(dp, dpp) > 5 * self.lam,
            f"freer anchor at {max(dp, dpp)}, needs > {5 * self.lam}")
        return self.pos

    def move(self, state: GameState) -> list:
        cops = state.cop_positions
        if self.pending:
            return self._advance(cops)
        anchor = self.pos
        if min(self._dist(anchor, c) for c in cops) >= 5 * self.lam:
            return [anchor]
        c0 = cops[0]
        d0 = self._dist(anchor, c0)
        self.recorder.check(
            "trigger-window", 4 * self.lam < d0 < 5 * self.lam,
            f"trigger at pursuer distance {d0}, needs "
            f"({4 * self.lam}, {5 * self.lam})")
        w = self.witness
        curve = w.gamma if self.side == 0 else w.gamma_prime
        other = w.gamma_prime if self.side == 0 else w.gamma
        blocked_plus = self._side_blocked(curve, c0, +1)
        blocked_minus = self._side_blocked(curve, c0, -1)
        self.recorder.check(
            "blocked-side-exclusivity", not (blocked_plus and blocked_minus),
            "pursuer blocks both sides of the bigon at once")
        direction = -1 if blocked_plus else +1
        eta, self.frame = self._crossing(curve, other, direction)
        self.pending = eta[1:]
        self.side = 1 - self.side
        return self._advance(cops)

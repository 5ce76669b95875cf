"""Strong-game robber that lifts a model-space strategy through a scale
embedding.

The wrapper plays a coarse copy of the match: it projects the true cop
positions into a model space, asks a weak-game evader there for its next
move, expands the answer back through the embedding, and spends a block
of real stages walking the expanded path while ignoring the cops.  One
model move per block keeps the two clocks aligned: the block length is
exactly the number of stages the cops need to change the projected
picture by one model move.

Four guarantees make this sound, and all four are audited rather than
trusted: the expanded path fits the declared speed budget, the cops'
moves during a block project to a single legal model move, the true
distance to every cop stays above the reach throughout, and the robber
never leaves the declared ball around the treasure.  The wrapper checks
what only it can see online (the model evader's clearances and path
discipline, via the shared assertion recorder); ``assert_meta_obligations``
re-derives the four guarantees offline from the finished trace.

The model evader is consulted through the ordinary agent interface, one
``move`` per block, and must keep every vertex of its answer at model
distance greater than the derived reach from the projected cops; a
cornered evader is reported as a failed assertion, not as a capture.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .agents.base import RobberAgent
from .engine import GameParams, GameState
from .errors import (MalformedSpecError, OracleCaughtError,
                     StrategyUnavailableError)
from .homothety import (QuasiHomothetyFamily, lamplighter_family,
                        z2_scaling_family)
from .spaces.base import Space
from .spaces.grid import GridSpace
from .trace import AssertionRecord, Trace


def _ceil_int(x) -> int:
    f = Fraction(x)
    return -(-f.numerator // f.denominator)


def derived_cop_params(a, b) -> tuple[int, int]:
    """Model cop speed and reach the oracle must defeat, from (A, B).

    Speed 4A^2+3AB covers the worst projected displacement of real cops
    over one block; reach 4A(2A+3B) covers the projection's distortion of
    the real reach.  Fractional values round up, which only strengthens
    the model game the oracle has to win.
    """
    a, b = Fraction(a), Fraction(b)
    return _ceil_int(4 * a * a + 3 * a * b), _ceil_int(4 * a * (2 * a + 3 * b))


@dataclass(frozen=True)
class OracleParams:
    """The four model-game parameters the wrapper negotiates for its oracle."""
    sigma_bar: int
    rho_bar: int
    psi_bar: int
    r_bar: int

    def to_json(self) -> dict:
        return {"sigmaBar": self.sigma_bar, "rhoBar": self.rho_bar,
                "psiBar": self.psi_bar, "RBar": self.r_bar}


@dataclass
class MetaStageRecord:
    """One block of stages driven by a single oracle move."""
    index: int
    start_stage: int
    oracle_path: list               # model vertices, as returned
    waypoints: list                 # their images, consecutive duplicates dropped


@dataclass
class MetaLog:
    """Everything the offline obligation audit needs beside the trace."""
    j: int
    rho_prime: int                  # the reach the robber privately defends
    lam: int                        # stages per block
    bars: OracleParams
    stages: list = field(default_factory=list)
    pretend_bound: Optional[int] = None


class MetaRobber(RobberAgent):
    """Lifts a weak-game model evader into the strong game on the target.

    ``oracle_factory`` builds a fresh unbound RobberAgent for the model
    space.  Negotiation probes one instance for its speed on the smallest
    shipped scale (the declaration must precede the reach), then the real
    oracle is spawned once the reach reveals which scale applies; a
    mismatch between the two speeds is recorded, not hidden.

    Subclasses override the wiring hooks to swap in dedicated constants;
    the play loop is shared.
    """

    def __init__(self, family: Optional[QuasiHomothetyFamily],
                 oracle_factory: Callable[[], RobberAgent],
                 preset: str = "custom"):
        super().__init__()
        if family is not None and family.pi is None:
            raise MalformedSpecError(
                "the lifting wrapper needs a projection to hand cop "
                "positions to its oracle")
        self.family = family
        self.oracle_factory = oracle_factory
        self.preset = preset
        self.pretend_bound: Optional[int] = None
        self.oracle: Optional[RobberAgent] = None
        self.meta_log: Optional[MetaLog] = None
        self._walk: list = []

    # -- wiring hooks (the dedicated-constant preset overrides these) -----

    def _cop_bars(self) -> tuple[int, int]:
        return derived_cop_params(self.family.A, self.family.B)

    def _probe_delta(self) -> Space:
        return self.family.deltas[self.family.js[0]]

    def _declared_psi(self, sigma: int, psi_bar: int) -> int:
        a, b = self.family.A, self.family.B
        return _ceil_int(sigma * (a * psi_bar + b))

    def _select_scale(self, rho: int) -> tuple[int, int]:
        """(family index, privately defended reach) for a declared reach."""
        for j in self.family.js:
            if self.family.rhos[j] >= rho:
                return j, self.family.rhos[j]
        top = self.family.rhos[self.family.js[-1]]
        raise StrategyUnavailableError(
            f"no shipped scale covers reach {rho} (largest is {top})")

    def _declared_R(self, rho_prime: int, r_bar: int) -> int:
        a, b = self.family.A, self.family.B
        return _ceil_int(rho_prime * (a * r_bar + 2 * a + 3 * b))

    # -- negotiation -------------------------------------------------------

    def choose_psi(self, sigma: int, rho: Optional[int] = None) -> int:
        if rho is not None:
            raise StrategyUnavailableError(
                "the lifting wrapper declares its speed before the reach "
                "is revealed (strong variant only)")
        if self.match_n is None:
            raise StrategyUnavailableError(
                "cop count not announced before negotiation")
        self.sig = sigma
        self.sigma_bar, self.rho_bar = self._cop_bars()
        probe_space = self._probe_delta()
        probe = self.oracle_factory()
        probe.bind(probe_space, "weak",
                   random.Random(self.rng.getrandbits(64)), self.recorder)
        probe.on_match(self.match_n, probe_space.base)
        self.psi_bar = probe.choose_psi(self.sigma_bar, self.rho_bar)
        return self._declared_psi(sigma, self.psi_bar)

    def choose_R(self, sigma: int, psi: int, rho: int) -> int:
        self.j, self.rho_prime = self._select_scale(rho)
        self.delta = self.family.deltas[self.j]
        self.lam = -(-self.rho_prime // sigma)
        self.oracle = self.oracle_factory()
        self.oracle.bind(self.delta, "weak",
                         random.Random(self.rng.getrandbits(64)),
                         self.recorder)
        self.oracle_treasure = self.family.pi(self.j, self.match_treasure)
        self.oracle.on_match(self.match_n, self.oracle_treasure)
        self.oracle_psi_bar = self.oracle.choose_psi(self.sigma_bar,
                                                     self.rho_bar)
        self.recorder.check(
            "oracle-speed-uniform", self.oracle_psi_bar == self.psi_bar,
            f"oracle wants speed {self.oracle_psi_bar} on the selected "
            f"model, the declaration assumed {self.psi_bar}")
        self.r_bar = self.oracle.choose_R(self.sigma_bar, self.oracle_psi_bar,
                                          self.rho_bar)
        self.meta_log = MetaLog(
            self.j, self.rho_prime, self.lam,
            OracleParams(self.sigma_bar, self.rho_bar, self.oracle_psi_bar,
                         self.r_bar),
            pretend_bound=self.pretend_bound)
        return self._declared_R(self.rho_prime, self.r_bar)

    def on_params(self, params: GameParams) -> None:
        super().on_params(params)
        self.oracle.on_params(GameParams(
            n=params.n, treasure=self.oracle_treasure, sigma=self.sigma_bar,
            psi=self.oracle_psi_bar, rho=self.rho_bar, big_r=self.r_bar,
            horizon=max(1, -(-params.horizon // self.lam))))

    # -- play ----------------------------------------------------------------

    def _project(self, cop_positions) -> tuple:
        return tuple(self.family.pi(self.j, c) for c in cop_positions)

    def _model_gap(self, v, projections) -> int:
        return min(self.delta.distance(v, p) for p in projections)

    def place(self, cop_positions):
        proj = self._project(cop_positions)
        rbar = self.oracle.place(proj)
        gap = self._model_gap(rbar, proj)
        self.recorder.check(
            "placement-clearance", gap > self.rho_bar + self.sigma_bar,
            f"model clearance {gap} at placement, needs more than "
            f"{self.rho_bar + self.sigma_bar}")
        self.oracle_pos = rbar
        self._walk = []
        return self.family.iota(self.j, rbar)

    def move(self, state: GameState) -> list:
        if (state.stage - 1) % self.lam == 0:
            self._consult(state)
        path = self._advance(state.robber_position)
        if state.stage % self.lam == 0:
            self.recorder.check(
                "meta-complete", not self._walk,
                f"{len(self._walk)} planned edges left when the block "
                f"closed at stage {state.stage}")
        return path

    def _consult(self, state: GameState) -> None:
        proj = self._project(state.cop_positions)
        gap = self._model_gap(self.oracle_pos, proj)
        self.recorder.check(
            "oracle-safe", gap > self.rho_bar,
            f"model game lost: projected cop within {gap} <= {self.rho_bar}")
        record = MetaStageRecord(len(self.meta_log.stages), state.stage,
                                 [], [])
        self.meta_log.stages.append(record)
        self._walk = []
        synth = GameState(proj, self.oracle_pos, record.index + 1,
                          "robber-to-move")
        try:
            pbar = list(self.oracle.move(synth))
        except OracleCaughtError as exc:
            self.recorder.check("oracle-move", False, str(exc))
            return
        well_formed = bool(pbar) and pbar[0] == self.oracle_pos and all(
            u == w or self.delta.distance(u, w) == 1
            for u, w in zip(pbar, pbar[1:]))
        self.recorder.check(
            "oracle-path-valid", well_formed,
            "the oracle must walk edge by edge from its own position")
        if not well_formed:
            return
        self.recorder.check(
            "oracle-speed", len(pbar) - 1 <= self.oracle_psi_bar,
            f"oracle path has {len(pbar) - 1} edges, "
            f"limit {self.oracle_psi_bar}")
        worst = min(self._model_gap(x, proj) for x in pbar)
        self.recorder.check(
            "oracle-path-clear", worst > self.rho_bar,
            f"oracle path clearance {worst}, needs more than {self.rho_bar}")
        self.oracle_pos = pbar[-1]
        record.oracle_path = pbar
        points = []
        for x in pbar:
            p = self.family.iota(self.j, x)
            if not points or points[-1] != p:
                points.append(p)
        record.waypoints = points
        walk = []
        cur = state.robber_position
        if points[0] != cur:
            # an unfinished previous block left us off the image; rejoin
            walk.extend(self.space.geodesic(cur, points[0])[1:])
        for u, w in zip(points, points[1:]):
            walk.extend(self.space.geodesic(u, w)[1:])
        self._walk = walk

    def _advance(self, v) -> list:
        if not self._walk:
            return [v]
        take = self._walk[:self.params.psi]
        del self._walk[:self.params.psi]
        return [v] + take


class Z2MetaRobber(MetaRobber):
    """Plane preset with dedicated constants.

    The model game is the unscaled plane against cops of speed 2 and
    reach 3; the embedding spacing is four times the defended reach,
    which is the declared reach rounded up to a multiple of the cop
    speed.  Declarations are psi = 4*psi0*sigma and R = 4*R0*reach, and
    the offline audit additionally bounds each cop's distance to its own
    image point by the spacing.
    """

    MODEL_SIGMA = 2
    MODEL_RHO = 3

    def __init__(self):
        from .agents.oracle import GreedyMaxminEvader
        super().__init__(None, lambda: GreedyMaxminEvader(self.MODEL_RHO),
                         preset="z2")

    def _cop_bars(self) -> tuple[int, int]:
        return self.MODEL_SIGMA, self.MODEL_RHO

    def _probe_delta(self) -> Space:
        return GridSpace(2)

    def _declared_psi(self, sigma: int, psi_bar: int) -> int:
        return 4 * psi_bar * sigma

    def _select_scale(self, rho: int) -> tuple[int, int]:
        rho_prime = self.sig * (-(-rho // self.sig))
        self.family = z2_scaling_family((4 * rho_prime,))
        self.pretend_bound = 4 * rho_prime
        return 4 * rho_prime, rho_prime

    def _declared_R(self, rho_prime: int, r_bar: int) -> int:
        return 4 * r_bar * rho_prime


def meta_robber(family: QuasiHomothetyFamily,
                oracle_factory: Callable[[], RobberAgent]) -> MetaRobber:
    """The generic wrapper for a verified family and a model evader."""
    if family is None or family.pi is None:
        raise MalformedSpecError(
            "the lifting wrapper needs a family with a projection")
    return MetaRobber(family, oracle_factory)


def z2_meta_preset() -> MetaRobber:
    return Z2MetaRobber()


def lamplighter_meta_preset(q: int = 2) -> MetaRobber:
    from .agents.lamplighter import LamplighterEvader
    return MetaRobber(lamplighter_family(q), LamplighterEvader,
                      preset=f"lamplighter:{q}")


def make_meta_robber(arg: str) -> MetaRobber:
    kind, _, rest = arg.partition(":")
    if kind == "z2":
        return z2_meta_preset()
    if kind == "lamplighter":
        try:
            q = int(rest) if rest else 2
        except ValueError as exc:
            raise MalformedSpecError(
                f"bad dial group order in meta preset {arg!r}") from exc
        return lamplighter_meta_preset(q)
    if kind == "custom":
        if not rest:
            raise MalformedSpecError("custom meta preset needs a file path")
        return _custom_preset(rest)
    raise MalformedSpecError(f"unknown meta preset {arg!r}")


def _custom_preset(path: str) -> MetaRobber:
    """Wrapper configured from a JSON file: {family: {...}, oracle: {...}}."""
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    fam = cfg.get("family") or {}
    kind = fam.get("kind")
    if kind == "z2":
        family = z2_scaling_family(tuple(fam.get("rhos", (2, 4, 8))))
    elif kind == "lamplighter":
        family = lamplighter_family(int(fam.get("q", 2)),
                                    tuple(fam.get("js", (2, 3))))
    else:
        raise MalformedSpecError(f"unknown family kind {kind!r} in {path}")
    oc = cfg.get("oracle") or {}
    okind = oc.get("kind")
    if okind == "greedy-maxmin":
        from .agents.oracle import GreedyMaxminEvader
        margin = int(oc.get("margin",
                            derived_cop_params(family.A, family.B)[1]))
        factory = lambda: GreedyMaxminEvader(margin)
    elif okind == "lamplighter":
        from .agents.lamplighter import LamplighterEvader
        factory = LamplighterEvader
    else:
        raise MalformedSpecError(f"unknown oracle kind {okind!r} in {path}")
    return MetaRobber(family, factory, preset=f"custom:{path}")


# -- offline obligation audit ---------------------------------------------

@dataclass
class MetaObligationReport:
    rows: list
    caveat: Optional[str] = None

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r.passed]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"ok": self.ok, "caveat": self.caveat,
                "rows": [r.to_json() for r in self.rows]}


ORACLE_CAVEAT = ("the model evader's success is empirical against the "
                 "shipped adversaries, not a guarantee inherited from a "
                 "known winning strategy")


def assert_meta_obligations(trace: Trace, family: QuasiHomothetyFamily,
                            log: MetaLog, space: Optional[Space] = None
                            ) -> MetaObligationReport:
    """Re-derive the four block guarantees from a finished trace.

    Per block: "meta-path-budget" (the planned endpoints fit the stage
    budget), "meta-cop-projection" (each cop's whole block, projected,
    is one legal model move), "meta-safety" (every robber checkpoint
    against every cop checkpoint stays above the defended reach, with
    the doubled bound at block starts), "meta-ball" (every robber
    checkpoint within the declared ball), and, when the preset bounds
    it, "meta-pretend-offset" (each cop near its own image point).
    Failures carry witnesses in the detail text; nothing raises.
    """
    if space is None:
        from .spaces import parse_space_spec
        space = parse_space_spec(trace.space_spec)
    delta = family.deltas[log.j]
    n = trace.params["n"]
    sigma, psi = trace.params["sigma"], trace.params["psi"]
    big_r = trace.params["R"]
    treasure = space.from_obj(trace.treasure)
    guard = log.rho_prime + sigma
    rows: list[AssertionRecord] = []

    def check(stage: int, name: str, passed: bool, detail: str) -> None:
        rows.append(AssertionRecord(stage, name, bool(passed), detail))

    for ms in log.stages:
        lo = ms.start_stage - 1
        block = trace.stages[lo:lo + log.lam]
        if not block:
            continue
        budget = log.lam * psi

        if len(ms.waypoints) >= 2:
            d = space.distance(ms.waypoints[0], ms.waypoints[-1],
                               cutoff=budget)
            check(ms.start_stage, "meta-path-budget", d is not None,
                  "planned endpoints out of reach" if d is None
                  else f"endpoint distance {d} <= {budget}")
        else:
            check(ms.start_stage, "meta-path-budget", True,
                  "no planned movement")

        bad = ""
        for i in range(n):
            pts = [space.from_obj(v) for rec in block
                   for v in rec.cop_moves[i]]
            base = family.pi(log.j, pts[0])
            for c in pts:
                d = delta.distance(base, family.pi(log.j, c))
                if d > log.bars.sigma_bar:
                    bad = (f"cop {i} projected displacement {d} > "
                           f"{log.bars.sigma_bar}")
                    break
            if bad:
                break
        check(ms.start_stage, "meta-cop-projection", not bad,
              bad or f"all projections within {log.bars.sigma_bar}")

        robber_pts = [space.from_obj(v) for rec in block
                      for v in rec.robber_move]
        cop_pts = [space.from_obj(v) for rec in block
                   for path in rec.cop_moves for v in path]
        bad = ""
        for r in robber_pts:
            for c in cop_pts:
                d = space.distance(r, c, cutoff=guard)
                if d is not None and d < guard:
                    bad = (f"gap {d} < {guard} between "
                           f"{space.to_obj(r)} and {space.to_obj(c)}")
                    break
            if bad:
                break
        if not bad:
            r0 = space.from_obj(block[0].robber_move[0])
            for path in block[0].cop_moves:
                c0 = space.from_obj(path[0])
                d = space.distance(r0, c0, cutoff=2 * log.rho_prime)
                if d is not None and d < 2 * log.rho_prime:
                    bad = (f"block-start gap {d} < {2 * log.rho_prime} at "
                           f"{space.to_obj(c0)}")
                    break
        check(ms.start_stage, "meta-safety", not bad,
              bad or f"all checkpoint pairs at {guard} or more")

        out = ""
        for r in robber_pts:
            if space.distance(treasure, r, cutoff=big_r) is None:
                out = f"checkpoint {space.to_obj(r)} outside the {big_r}-ball"
                break
        check(ms.start_stage, "meta-ball", not out,
              out or f"all checkpoints within {big_r}")

        if log.pretend_bound is not None:
            off = ""
            for c in cop_pts:
                img = family.iota(log.j, family.pi(log.j, c))
                d = space.distance(c, img, cutoff=log.pretend_bound)
                if d is None:
                    off = (f"cop at {space.to_obj(c)} further than "
                           f"{log.pretend_bound} from its image point")
                    break
            check(ms.start_stage, "meta-pretend-offset", not off,
                  off or f"all cops within {log.pretend_bound} of image "
                         f"points")

    return MetaObligationReport(rows, caveat=ORACLE_CAVEAT)

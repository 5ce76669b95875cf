"""Game semantics: negotiation, placement, the stage loop, replay.

A stage is one cop move followed by one robber move.  Capture is checked at
every vertex checkpoint along both moves, so passing within reach counts,
not just ending there.  Ball bookkeeping follows the same rule: a stage
counts as a ball visit when any vertex of the robber's path that stage lies
in the closed radius-R ball around the treasure, because the defense
condition is about the robber entering the ball, not ending its moves
there.  The engine never declares a cop "defense win": at a finite horizon
it reports which stages visited the ball and lets callers interpret the
evidence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .errors import GameAssertionError, OracleCaughtError, ProtocolError
from .spaces.base import Space
from .trace import AssertionRecord, StageRecord, Trace

WEAK = "weak"
STRONG = "strong"
VARIANTS = (WEAK, STRONG)

COPS = "cops"
ROBBER = "robber"


@dataclass(frozen=True)
class GameParams:
    n: int
    treasure: Any
    sigma: int
    psi: int
    rho: int
    big_r: int
    horizon: int

    def __post_init__(self):
        for name in ("n", "sigma", "psi", "rho", "big_r", "horizon"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "sigma": self.sigma,
            "psi": self.psi,
            "rho": self.rho,
            "R": self.big_r,
            "horizon": self.horizon,
        }


@dataclass(frozen=True)
class GameState:
    cop_positions: tuple
    robber_position: Any
    stage: int
    phase: str                      # "cops-to-move" | "robber-to-move"


@dataclass(frozen=True)
class StageResult:
    state: GameState
    outcome: Optional[dict]
    robber_path: list               # vertices the robber actually traversed


def captured(stage: int, cop_index: int, at_vertex_obj: Any) -> dict:
    return {"kind": "Captured", "stage": stage, "copIndex": cop_index,
            "atVertex": at_vertex_obj}


def horizon_reached(stages: int, ball_visit_stages: list[int],
                    last_in_ball: bool) -> dict:
    return {"kind": "HorizonReached", "stages": stages,
            "ballVisitStages": ball_visit_stages, "lastInBall": last_in_ball}


def forfeit(offender: str, stage: int, reason: str) -> dict:
    return {"kind": "Forfeit", "offender": offender, "stage": stage,
            "reason": reason}


class AssertionRecorder:
    """Collects strategy runtime assertions; fail-fast mode aborts the run."""

    def __init__(self, mode: str = "record"):
        if mode not in ("record", "fail-fast"):
            raise ValueError(f"unknown assertion mode {mode!r}")
        self.mode = mode
        self.records: list[AssertionRecord] = []
        self.stage = 0

    def check(self, name: str, ok: bool, detail: str = "") -> bool:
        self.records.append(AssertionRecord(self.stage, name, bool(ok), detail))
        if not ok and self.mode == "fail-fast":
            raise GameAssertionError(self.stage, name, detail)
        return bool(ok)

    @property
    def failed(self) -> list[AssertionRecord]:
        return [r for r in self.records if not r.passed]


def _require_positive_int(value, what: str, offender: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ProtocolError(offender, f"declared {what} must be a positive "
                                      f"integer, got {value!r}")
    return value


def negotiate(variant: str, cop_agent, robber_agent, n: int,
              horizon: int, treasure: Any) -> GameParams:
    """Run the parameter negotiation in the variant's quantifier order.

    Weak: cops declare (sigma, rho), then the robber declares (psi, R)
    seeing both.  Strong: sigma, then psi seeing sigma, then rho seeing
    (sigma, psi), then R seeing all three.  The cop count and treasure are
    part of the match itself, so both sides learn them first.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    cop_agent.on_match(n, treasure)
    robber_agent.on_match(n, treasure)
    sigma = _require_positive_int(cop_agent.choose_sigma(), "sigma", COPS)
    if variant == WEAK:
        rho = _require_positive_int(cop_agent.choose_rho(sigma), "rho", COPS)
        psi = _require_positive_int(robber_agent.choose_psi(sigma, rho),
                                    "psi", ROBBER)
    else:
        psi = _require_positive_int(robber_agent.choose_psi(sigma),
                                    "psi", ROBBER)
        rho = _require_positive_int(cop_agent.choose_rho(sigma, psi),
                                    "rho", COPS)
    big_r = _require_positive_int(robber_agent.choose_R(sigma, psi, rho),
                                  "R", ROBBER)
    return GameParams(n=n, treasure=treasure, sigma=sigma, psi=psi, rho=rho,
                      big_r=big_r, horizon=horizon)


def _check_vertex(space: Space, v, offender: str):
    """Round-trip through serialization; the parse is the membership test."""
    try:
        return space.from_obj(space.to_obj(v))
    except Exception as exc:
        raise ProtocolError(offender, f"vertex not in space: {exc}") from exc


def validate_path(space: Space, path: Sequence, start, speed: int,
                  offender: str) -> list:
    if not isinstance(path, (list, tuple)) or len(path) == 0:
        raise ProtocolError(offender, "move path must be a nonempty vertex list")
    path = [_check_vertex(space, v, offender) for v in path]
    if path[0] != start:
        raise ProtocolError(
            offender,
            f"path starts at {space.serialize(path[0])}, mover is at "
            f"{space.serialize(start)}")
    if len(path) - 1 > speed:
        raise ProtocolError(offender,
                            f"path length {len(path) - 1} > speed {speed}")
    for a, b in zip(path, path[1:]):
        if b not in space.neighbors(a):
            raise ProtocolError(
                offender,
                f"step {space.serialize(a)} -> {space.serialize(b)} is not "
                f"an edge")
    return path


def _within_reach(space: Space, a, b, rho: int) -> bool:
    return space.distance(a, b, cutoff=rho) is not None


def _cop_phase(space: Space, params: GameParams, cop_positions: tuple,
               robber, cop_moves: Sequence[Sequence]
               ) -> tuple[list, Optional[int]]:
    """Validate cop paths and scan checkpoint set 1 (cop path vertices vs
    the stationary robber).  Returns (paths, capturing_cop_or_None)."""
    if not isinstance(cop_moves, (list, tuple)) or len(cop_moves) != params.n:
        raise ProtocolError(COPS, f"need {params.n} move paths")
    paths = [
        validate_path(space, path, start, params.sigma, COPS)
        for path, start in zip(cop_moves, cop_positions)
    ]
    for i, path in enumerate(paths):
        for v in path[1:]:
            if _within_reach(space, v, robber, params.rho):
                return paths, i
    return paths, None


def _robber_phase(space: Space, params: GameParams, new_cops: tuple,
                  robber, robber_move: Sequence
                  ) -> tuple[list, Optional[int]]:
    """Validate the robber path and scan checkpoint set 2 (every robber
    path vertex vs settled cops).  Returns (traversed_path,
    capturing_cop_or_None); a capture truncates the path at the vertex
    where it happened."""
    path = validate_path(space, robber_move, robber, params.psi, ROBBER)
    for step, v in enumerate(path):
        for i, c in enumerate(new_cops):
            if _within_reach(space, v, c, params.rho):
                return path[:step + 1], i
    return path, None


def step_stage(space: Space, params: GameParams, state: GameState,
               cop_moves: Sequence[Sequence], robber_move: Sequence
               ) -> StageResult:
    """Apply one full stage; capture checkpoints in order: every vertex a
    cop moves through against the still-stationary robber, then every
    vertex of the robber's path (endpoints included) against the settled
    cop positions."""
    cop_paths, hit = _cop_phase(space, params, state.cop_positions,
                                state.robber_position, cop_moves)
    new_cops = tuple(p[-1] for p in cop_paths)
    if hit is not None:
        mid = GameState(new_cops, state.robber_position, state.stage,
                        "robber-to-move")
        return StageResult(mid, captured(
            state.stage, hit, space.to_obj(state.robber_position)),
            [state.robber_position])

    path, hit = _robber_phase(space, params, new_cops,
                              state.robber_position, robber_move)
    if hit is not None:
        end = GameState(new_cops, path[-1], state.stage, "cops-to-move")
        return StageResult(end, captured(state.stage, hit,
                                         space.to_obj(path[-1])), path)
    nxt = GameState(new_cops, path[-1], state.stage + 1, "cops-to-move")
    return StageResult(nxt, None, path)


def min_cop_distance(space: Space, params: GameParams, cops: Sequence,
                     robber) -> int:
    """Min distance from the robber to any cop, -1 beyond the bookkeeping
    cutoff rho + sigma + 1."""
    cutoff = params.rho + params.sigma + 1
    best = -1
    for c in cops:
        d = space.distance(c, robber, cutoff=cutoff)
        if d is not None and (best < 0 or d < best):
            best = d
            cutoff = d        # only smaller values matter now
    return best


class BallChecker:
    """Decides per stage whether the robber visited the closed radius-R
    ball around the treasure: did any vertex of its path that stage lie
    inside?  The path starts at the stage's starting vertex, so standing
    inside while the cops move counts too.

    Generic spaces use a cutoff distance query per path vertex.  On spaces
    whose balls are too big to search (exponential R), membership is
    instead certified by a constructive word-length upper bound carried
    along the robber's own movement, one edge at a time; in_ball=True
    stays sound and the shipped strategies keep the vertices they visit
    certifiable by construction.
    """

    CERTIFY_ABOVE = 10_000

    def __init__(self, space: Space, treasure, big_r: int):
        self.space = space
        self.treasure = treasure
        self.big_r = big_r
        self.certified = (hasattr(space, "word_length_upper_bound")
                          and big_r > self.CERTIFY_ABOVE)
        self._ub: int = 0

    def start(self, robber_pos) -> bool:
        if not self.certified:
            return self._query(robber_pos)
        self._ub = self._fresh(robber_pos)
        return self._ub <= self.big_r

    def after_move(self, robber_path: Sequence) -> bool:
        if not self.certified:
            return any(self._query(v) for v in robber_path)
        ub = self._ub
        visited = ub <= self.big_r
        for v in robber_path[1:]:
            ub = min(ub + 1, self._fresh(v))
            visited = visited or ub <= self.big_r
        self._ub = ub
        return visited

    def _fresh(self, robber_pos) -> int:
        return self.space.word_length_upper_bound(self.treasure, robber_pos)

    def _query(self, robber_pos) -> bool:
        return self.space.distance(self.treasure, robber_pos,
                                   cutoff=self.big_r) is not None


def place(space: Space, params: GameParams, cop_agent, robber_agent
          ) -> tuple[tuple, Any, Optional[dict]]:
    """Cops place first, the robber places seeing them.

    Returns (cop_positions, robber_position, outcome) where outcome is a
    stage-0 capture when the robber starts within reach, else None.
    """
    cops = cop_agent.place(params.n)
    if not isinstance(cops, (list, tuple)) or len(cops) != params.n:
        raise ProtocolError(COPS, f"placement must list {params.n} vertices")
    cops = tuple(_check_vertex(space, c, COPS) for c in cops)
    robber = _check_vertex(space, robber_agent.place(cops), ROBBER)
    for i, c in enumerate(cops):
        if _within_reach(space, c, robber, params.rho):
            return cops, robber, captured(0, i, space.to_obj(robber))
    return cops, robber, None


def _observe(cop_agent, robber_agent, hook: str, *args) -> None:
    """Optional observation callbacks; the serve layer streams board state
    from these.  Ordinary agents define neither."""
    for agent in (cop_agent, robber_agent):
        fn = getattr(agent, hook, None)
        if fn is not None:
            fn(*args)


def run(space: Space, variant: str, cop_agent, robber_agent, horizon: int,
        seed: int, assertion_mode: str = "record",
        space_spec: Optional[str] = None) -> Trace:
    """Full match: negotiate, place, loop stages, emit a replayable trace.

    Deterministic given the seed: each agent draws randomness only from a
    child generator derived from it (cops first, then robber).
    """
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon!r}")
    master = random.Random(seed)
    cop_rng = random.Random(master.getrandbits(64))
    robber_rng = random.Random(master.getrandbits(64))
    recorder = AssertionRecorder(assertion_mode)
    cop_agent.bind(space, variant, cop_rng, recorder)
    robber_agent.bind(space, variant, robber_rng, recorder)

    spec = space_spec if space_spec is not None else space.kind
    treasure = space.base
    n = getattr(cop_agent, "n", 1)

    trace = Trace(space_spec=spec, variant=variant,
                  params={"n": n, "sigma": 0, "psi": 0, "rho": 0, "R": 0,
                          "horizon": horizon},
                  seed=seed, treasure=space.to_obj(treasure),
                  cop_placements=[], robber_placement=None)

    def finish(outcome: dict) -> Trace:
        trace.outcome = outcome
        trace.assertions = recorder.records
        return trace

    try:
        params = negotiate(variant, cop_agent, robber_agent, n, horizon,
                           treasure)
    except ProtocolError as exc:
        return finish(forfeit(exc.offender, 0, exc.reason))
    trace.params = params.to_json()
    cop_agent.on_params(params)
    robber_agent.on_params(params)

    try:
        cops, robber, outcome = place(space, params, cop_agent, robber_agent)
    except ProtocolError as exc:
        return finish(forfeit(exc.offender, 0, exc.reason))
    except GameAssertionError:
        return finish(forfeit(ROBBER, 0, "strategy assertion failed"))
    except OracleCaughtError as exc:
        return finish(forfeit(ROBBER, 0, f"strategy gave up: {exc}"))
    trace.cop_placements = [space.to_obj(c) for c in cops]
    trace.robber_placement = space.to_obj(robber)
    try:
        _observe(cop_agent, robber_agent, "on_placed", cops, robber)
    except ProtocolError as exc:
        return finish(forfeit(exc.offender, 0, exc.reason))

    checker = BallChecker(space, treasure, params.big_r)
    ball_visits: list[int] = []
    in_ball = checker.start(robber)
    if in_ball:
        ball_visits.append(0)
    if outcome is not None:
        return finish(outcome)

    state = GameState(cops, robber, 1, "cops-to-move")
    for stage in range(1, horizon + 1):
        recorder.stage = stage
        try:
            cop_moves = cop_agent.move(
                GameState(state.cop_positions, state.robber_position, stage,
                          "cops-to-move"))
            cop_paths, hit = _cop_phase(space, params, state.cop_positions,
                                        state.robber_position, cop_moves)
        except ProtocolError as exc:
            return finish(forfeit(exc.offender, stage, exc.reason))
        new_cops = tuple(p[-1] for p in cop_paths)

        if hit is not None:
            robber_path = [state.robber_position]
            outcome = captured(stage, hit,
                               space.to_obj(state.robber_position))
        else:
            try:
                robber_move = robber_agent.move(
                    GameState(new_cops, state.robber_position, stage,
                              "robber-to-move"))
                robber_path, hit = _robber_phase(
                    space, params, new_cops, state.robber_position,
                    robber_move)
            except ProtocolError as exc:
                return finish(forfeit(exc.offender, stage, exc.reason))
            except GameAssertionError:
                return finish(forfeit(ROBBER, stage,
                                      "strategy assertion failed"))
            except OracleCaughtError as exc:
                return finish(forfeit(ROBBER, stage,
                                      f"strategy gave up: {exc}"))
            outcome = (None if hit is None else
                       captured(stage, hit, space.to_obj(robber_path[-1])))

        final_robber = robber_path[-1]
        in_ball = checker.after_move(robber_path)
        if outcome is None and in_ball:
            ball_visits.append(stage)
        trace.stages.append(StageRecord(
            stage=stage,
            cop_moves=[[space.to_obj(v) for v in p] for p in cop_paths],
            robber_move=[space.to_obj(v) for v in robber_path],
            min_cop_dist=min_cop_distance(space, params, new_cops,
                                          final_robber),
            in_ball=in_ball,
        ))
        try:
            _observe(cop_agent, robber_agent, "on_stage", trace.stages[-1])
        except ProtocolError as exc:
            # a dead observer cannot override a decided game
            if outcome is None:
                return finish(forfeit(exc.offender, stage, exc.reason))
        if outcome is not None:
            return finish(outcome)
        state = GameState(new_cops, final_robber, stage + 1, "cops-to-move")

    return finish(horizon_reached(horizon, ball_visits, in_ball))


def replay(space: Space, trace: Trace, reach: Optional[int] = None
           ) -> tuple[bool, Optional[int], str]:
    """Re-simulate a trace; returns (ok, first_divergent_stage, detail).

    With reach set (must be <= recorded rho), captures are re-checked at
    the smaller reach: any stage that was legal at rho stays legal, so a
    capture-free trace must replay capture-free.
    """
    p = trace.params
    if trace.outcome is None:
        return False, None, "trace has no outcome"
    if trace.outcome.get("kind") == "Forfeit":
        return True, None, "forfeit trace accepted as-is"
    rho = p["rho"] if reach is None else reach
    if rho > p["rho"]:
        return False, None, f"recheck reach {rho} exceeds recorded rho"
    if reach is not None and trace.outcome.get("kind") != "HorizonReached":
        return False, None, "recheck-reach applies to capture-free traces"
    try:
        params = GameParams(n=p["n"], treasure=space.base, sigma=p["sigma"],
                            psi=p["psi"], rho=rho, big_r=p["R"],
                            horizon=p["horizon"])
    except ValueError as exc:
        return False, None, f"bad params: {exc}"

    try:
        cops = tuple(space.from_obj(c) for c in trace.cop_placements)
        robber = space.from_obj(trace.robber_placement)
    except Exception as exc:
        return False, 0, f"bad placement: {exc}"
    if len(cops) != params.n:
        return False, 0, "placement count mismatch"

    checker = BallChecker(space, space.base, params.big_r)
    in_ball = checker.start(robber)
    ball_visits = [0] if in_ball else []

    for i, c in enumerate(cops):
        if _within_reach(space, c, robber, params.rho):
            expected = captured(0, i, space.to_obj(robber))
            if reach is None and trace.outcome != expected:
                return False, 0, "stage-0 capture not recorded"
            return True, None, ""
    if trace.outcome.get("kind") == "Captured" and trace.outcome["stage"] == 0:
        return False, 0, "recorded stage-0 capture does not replay"

    state = GameState(cops, robber, 1, "cops-to-move")
    for rec in trace.stages:
        try:
            cop_paths = [[space.from_obj(v) for v in path]
                         for path in rec.cop_moves]
            robber_path = [space.from_obj(v) for v in rec.robber_move]
        except Exception as exc:
            return False, rec.stage, f"unparseable move: {exc}"
        try:
            result = step_stage(space, params, state, cop_paths, robber_path)
        except ProtocolError as exc:
            return False, rec.stage, f"illegal recorded move: {exc.reason}"

        final_robber = result.state.robber_position
        in_ball = checker.after_move(result.robber_path)
        if result.outcome is None and in_ball:
            ball_visits.append(rec.stage)

        if reach is None:
            md = min_cop_distance(space, params, result.state.cop_positions,
                                  final_robber)
            if md != rec.min_cop_dist:
                return False, rec.stage, (
                    f"minCopDist {md} != recorded {rec.min_cop_dist}")
            if in_ball != rec.in_ball:
                return False, rec.stage, (
                    f"inBall {in_ball} != recorded {rec.in_ball}")
            if result.outcome is not None:
                if rec is not trace.stages[-1]:
                    return False, rec.stage, "capture before last stage row"
                if trace.outcome != result.outcome:
                    return False, rec.stage, "capture diverges from recorded"
                return True, None, ""
        else:
            if result.outcome is not None:
                # shrinking the reach can only remove captures, never add
                return False, rec.stage, (
                    f"capture appeared at reach {reach} < rho")
        state = result.state

    if trace.outcome.get("kind") == "Captured":
        return False, len(trace.stages), "recorded capture does not replay"
    expected = horizon_reached(params.horizon, ball_visits, in_ball)
    if len(trace.stages) != params.horizon:
        return False, len(trace.stages), "stage count != horizon"
    if reach is None and trace.outcome != expected:
        return False, len(trace.stages), "horizon outcome diverges"
    return True, None, ""

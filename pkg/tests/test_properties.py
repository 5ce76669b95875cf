"""Generative checks of the structural laws the rest of the suite pins
down pointwise: adjacency symmetry, metric axioms, canonical vertex
forms, path legality, rounding bands, trace serialization, and full-game
determinism."""

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from quasicop.agents import make_cop_agent, make_robber_agent
from quasicop.agents.base import truncate_path
from quasicop.engine import replay, run, validate_path
from quasicop.errors import ProtocolError
from quasicop.homothety import _nearest_multiple
from quasicop.spaces import parse_space_spec
from quasicop.trace import AssertionRecord, StageRecord, Trace

ALL_SPECS = ["line", "grid:2", "grid:3", "gridvar:2", "gridvar:3",
             "free-tree:2", "lamp:2", "lamp:3", "lamp:2:2", "bs:2", "bs:3"]

# index lists, not vertices: hypothesis shrinks them well and every
# prefix is itself a valid walk
steps = st.lists(st.integers(min_value=0, max_value=11), max_size=5)
short_steps = st.lists(st.integers(min_value=0, max_value=11), max_size=3)


def walk(space, indices):
    v = space.base
    for i in indices:
        ns = space.neighbors(v)
        v = ns[i % len(ns)]
    return v


@given(st.sampled_from(ALL_SPECS), steps)
@settings(max_examples=120, deadline=None)
def test_neighbors_symmetric_simple_loopfree(spec, indices):
    space = parse_space_spec(spec)
    v = walk(space, indices)
    ns = space.neighbors(v)
    assert v not in ns
    assert len(set(ns)) == len(ns)
    for u in ns:
        assert v in space.neighbors(u)


@given(st.sampled_from(ALL_SPECS), short_steps, short_steps, short_steps)
@settings(max_examples=60, deadline=None)
def test_metric_axioms(spec, iu, iw, ix):
    space = parse_space_spec(spec)
    u, w, x = walk(space, iu), walk(space, iw), walk(space, ix)
    duw = space.distance(u, w)
    assert duw == space.distance(w, u)
    assert (duw == 0) == (u == w)
    assert duw <= space.distance(u, x) + space.distance(x, w)


@given(st.sampled_from(ALL_SPECS), steps)
@settings(max_examples=120, deadline=None)
def test_serialization_round_trips(spec, indices):
    space = parse_space_spec(spec)
    v = walk(space, indices)
    obj = space.to_obj(v)
    assert space.from_obj(obj) == v
    assert space.from_obj(json.loads(json.dumps(obj))) == v


@given(st.sampled_from(ALL_SPECS), steps)
@settings(max_examples=120, deadline=None)
def test_walks_stay_in_canonical_form(spec, indices):
    space = parse_space_spec(spec)
    v = walk(space, indices)
    kind = spec.split(":")[0]
    if kind == "gridvar":
        assert (v[0] + v[1]) % space.m == 0
    elif kind == "lamp":
        lamps, _pos = v
        assert all(0 < val < space.q ** space.j for _site, val in lamps)
        assert list(lamps) == sorted(lamps)
        assert len({site for site, _ in lamps}) == len(lamps)
    elif kind == "bs":
        num, exp, _k = v
        assert exp >= 0
        assert exp == 0 or num % space.m != 0
        assert num != 0 or exp == 0
    elif kind == "free-tree":
        assert all(a != b.swapcase() for a, b in zip(v, v[1:]))


@given(st.sampled_from(ALL_SPECS), short_steps, short_steps)
@settings(max_examples=60, deadline=None)
def test_geodesics_are_geodesic(spec, iu, iw):
    space = parse_space_spec(spec)
    u, w = walk(space, iu), walk(space, iw)
    path = space.geodesic(u, w)
    assert path[0] == u and path[-1] == w
    assert len(path) == space.distance(u, w) + 1
    for a, b in zip(path, path[1:]):
        assert b in space.neighbors(a)


@given(st.integers(min_value=2, max_value=3),
       st.lists(st.integers(min_value=-40, max_value=40), min_size=2,
                max_size=3),
       st.lists(st.integers(min_value=-40, max_value=40), min_size=2,
                max_size=3))
@settings(max_examples=120, deadline=None)
def test_grid_distance_is_the_l1_norm(dim, xs, ys):
    space = parse_space_spec(f"grid:{dim}")
    u, w = tuple(xs[:dim]), tuple(ys[:dim])
    if len(u) < dim or len(w) < dim:
        return
    assert space.distance(u, w) == sum(abs(a - b) for a, b in zip(u, w))


@given(steps, st.integers(min_value=1, max_value=5),
       st.lists(st.integers(min_value=0, max_value=11), max_size=5))
@settings(max_examples=100, deadline=None)
def test_validate_path_accepts_exactly_the_legal_walks(start_indices,
                                                       speed, move_indices):
    space = parse_space_spec("grid:2")
    start = walk(space, start_indices)
    path = [start]
    for i in move_indices:
        ns = space.neighbors(path[-1])
        path.append(ns[i % len(ns)])
    if len(path) - 1 <= speed:
        assert validate_path(space, path, start, speed, "cops") == path
    else:
        with pytest.raises(ProtocolError):
            validate_path(space, path, start, speed, "cops")
    # a path is anchored at the mover
    if len(path) <= speed and start != (99, 99):
        with pytest.raises(ProtocolError):
            validate_path(space, path, (99, 99), speed, "cops")


@given(st.lists(st.integers(), min_size=1, max_size=12),
       st.integers(min_value=0, max_value=15))
def test_truncate_path_is_a_bounded_prefix(path, max_edges):
    out = truncate_path(path, max_edges)
    assert out == path[:max_edges + 1]
    assert out[0] == path[0]
    assert len(out) - 1 <= max_edges


@given(st.integers(min_value=-10_000, max_value=10_000),
       st.integers(min_value=1, max_value=500))
def test_nearest_multiple_lands_in_the_half_open_band(x, r):
    idx = _nearest_multiple(x, r)
    err = Fraction(x - r * idx)
    assert -Fraction(r, 2) < err <= Fraction(r, 2)
    # nearest really means nearest
    assert abs(err) == min(abs(Fraction(x - r * k))
                           for k in range(idx - 2, idx + 3))


vertices = st.tuples(st.integers(min_value=-50, max_value=50),
                     st.integers(min_value=-50, max_value=50)) \
    .map(lambda p: [p[0], p[1]])
params = st.fixed_dictionaries({
    name: st.integers(min_value=1, max_value=99)
    for name in ("n", "sigma", "psi", "rho", "R", "horizon")})


@st.composite
def traces(draw):
    p = draw(params)
    trace = Trace(space_spec="grid:2", variant=draw(st.sampled_from(
        ("weak", "strong"))), params=p, seed=draw(st.integers(0, 2 ** 31)),
        treasure=[0, 0], cop_placements=draw(st.lists(vertices, min_size=1,
                                                      max_size=3)),
        robber_placement=draw(vertices))
    for stage in range(1, draw(st.integers(min_value=1, max_value=4)) + 1):
        trace.stages.append(StageRecord(
            stage=stage,
            cop_moves=[[draw(vertices)] for _ in trace.cop_placements],
            robber_move=[draw(vertices), draw(vertices)],
            min_cop_dist=draw(st.sampled_from((-1, 1, 2, 17))),
            in_ball=draw(st.booleans())))
    trace.outcome = draw(st.sampled_from((
        {"kind": "HorizonReached", "stages": len(trace.stages),
         "ballVisitStages": [0], "lastInBall": False},
        {"kind": "Captured", "stage": 1, "copIndex": 0, "atVertex": [0, 0]},
        {"kind": "Forfeit", "offender": "cops", "stage": 0, "reason": "x"})))
    if draw(st.booleans()):
        trace.assertions.append(AssertionRecord(1, "probe",
                                                draw(st.booleans()), "d"))
    return trace


@given(traces())
@settings(max_examples=80, deadline=None)
def test_trace_serialization_round_trips(trace):
    reparsed = Trace.parse_lines(trace.lines())
    assert list(reparsed.lines()) == list(trace.lines())
    assert reparsed.params == trace.params
    assert reparsed.outcome == trace.outcome
    assert [r.to_json() for r in reparsed.stages] \
        == [r.to_json() for r in trace.stages]


@given(st.integers(min_value=0, max_value=2 ** 31),
       st.integers(min_value=1, max_value=2),
       st.integers(min_value=1, max_value=2),
       st.integers(min_value=1, max_value=3),
       st.integers(min_value=3, max_value=6))
@settings(max_examples=25, deadline=None)
def test_full_games_are_deterministic_legal_and_replayable(seed, sigma, rho,
                                                           margin, horizon):
    space = parse_space_spec("grid:2")

    def play():
        return run(space, "weak",
                   make_cop_agent("greedy", sigma=sigma, rho=rho),
                   make_robber_agent(f"greedy-evader:{margin}"),
                   horizon=horizon, seed=seed, space_spec="grid:2")

    trace = play()
    assert list(trace.lines()) == list(play().lines())
    assert trace.outcome["kind"] == "HorizonReached"
    assert trace.outcome["ballVisitStages"] == sorted(
        set(trace.outcome["ballVisitStages"]))
    assert all(0 <= s <= horizon for s in trace.outcome["ballVisitStages"])
    assert [rec.stage for rec in trace.stages] == list(range(1, horizon + 1))
    cutoff = sigma + rho + 1
    for rec in trace.stages:
        assert rec.min_cop_dist == -1 or rho < rec.min_cop_dist <= cutoff
        assert len(rec.robber_move) - 1 <= trace.params["psi"]
        for path in rec.cop_moves:
            assert len(path) - 1 <= sigma
    ok, stage, detail = replay(space, trace)
    assert ok, (stage, detail)

import random

import pytest

from quasicop.agents import make_cop_agent, make_robber_agent
from quasicop.agents.base import truncate_path
from quasicop.agents.cops import (GreedyPursuitCop, LinePusherCop, RandomCop,
                                  ScriptedCop)
from quasicop.agents.oracle import GreedyMaxminEvader
from quasicop.agents.projection import ProjectionEvader, projection_evader
from quasicop.engine import AssertionRecorder, GameParams, GameState, run
from quasicop.errors import (MalformedSpecError, OracleCaughtError,
                             StrategyUnavailableError)
from quasicop.spaces import parse_space_spec
from quasicop.spaces.grid import GridSpace


def bound(agent, space, variant="weak", seed=0):
    agent.bind(space, variant, random.Random(seed), AssertionRecorder())
    agent.on_match(getattr(agent, "n", 1), space.base)
    return agent


# -- registry ----------------------------------------------------------------

@pytest.mark.parametrize("spec,cls,n", [
    ("greedy", GreedyPursuitCop, 1),
    ("greedy:3", GreedyPursuitCop, 3),
    ("random:2", RandomCop, 2),
    ("pusher", LinePusherCop, 1),
])
def test_cop_registry(spec, cls, n):
    agent = make_cop_agent(spec, sigma=2, rho=3)
    assert isinstance(agent, cls)
    assert agent.n == n
    assert agent.choose_sigma() == 2
    assert agent.choose_rho(2) == 3


@pytest.mark.parametrize("bad", ["", "greedy:0", "greedy:x", "scripted",
                                 "swat", "random:-1"])
def test_cop_registry_rejects(bad):
    with pytest.raises(MalformedSpecError):
        make_cop_agent(bad)


@pytest.mark.parametrize("spec", ["bigon", "bottleneck", "lamplighter",
                                  "bs-sheet", "greedy-evader:2", "meta:z2",
                                  "meta:lamplighter"])
def test_robber_registry(spec):
    agent = make_robber_agent(spec)
    assert hasattr(agent, "choose_psi") and hasattr(agent, "place")


@pytest.mark.parametrize("bad", ["", "greedy-evader", "greedy-evader:x",
                                 "ghost", "meta:unknown"])
def test_robber_registry_rejects(bad):
    with pytest.raises(MalformedSpecError):
        make_robber_agent(bad)


# -- declared parameters (frozen closed forms) --------------------------------

@pytest.mark.parametrize("sigma,rho,want", [(1, 1, 8), (2, 3, 14)])
def test_lamplighter_declares_loop_length(sigma, rho, want):
    # up-down sweep over sigma + rho + 1 + n sites, both directions
    agent = bound(make_robber_agent("lamplighter"), parse_space_spec("lamp:2"))
    assert agent.choose_psi(sigma, rho) == want
    assert agent.choose_R(sigma, agent.choose_psi(sigma, rho), rho) == want


def test_bigon_declarations():
    agent = bound(make_robber_agent("bigon"), parse_space_spec("grid:2"),
                  variant="strong")
    psi = agent.choose_psi(1)
    assert psi == 96
    assert agent.choose_R(1, psi, 1) == 68     # twice the staircase width


def test_bottleneck_declarations():
    agent = bound(make_robber_agent("bottleneck"), parse_space_spec("grid:2"))
    psi = agent.choose_psi(1, 1)
    assert agent.choose_R(1, psi, 1) == 26     # out-and-back across the neck


def test_bs_sheet_speed():
    agent = bound(make_robber_agent("bs-sheet"), parse_space_spec("bs:2"),
                  variant="strong")
    assert agent.choose_psi(2) == 34


@pytest.mark.parametrize("sigma,rho", [(1, 1), (2, 2), (3, 1)])
def test_greedy_evader_declarations(sigma, rho):
    agent = bound(GreedyMaxminEvader(3), parse_space_spec("grid:2"))
    assert agent.choose_psi(sigma, rho) == sigma + rho + 1
    assert agent.choose_R(sigma, sigma + rho + 1, rho) == 4 * (sigma + rho + 1)


def test_greedy_evader_speed_from_margin_when_reach_unknown():
    agent = bound(GreedyMaxminEvader(5), parse_space_spec("grid:2"),
                  variant="strong")
    assert agent.choose_psi(2) == 2 + 5 + 1


# -- greedy max-min behavior ---------------------------------------------------

def test_greedy_evader_keeps_margin(grid2):
    cop = make_cop_agent("greedy", sigma=1, rho=1)
    robber = GreedyMaxminEvader(2)
    trace = run(grid2, "weak", cop, robber, 40, seed=5)
    assert trace.outcome["kind"] == "HorizonReached"
    assert trace.failed_assertions == []
    for rec in trace.stages:
        assert rec.min_cop_dist == -1 or rec.min_cop_dist > 2


def test_greedy_evader_raises_when_cornered(grid2):
    robber = bound(GreedyMaxminEvader(3), grid2)
    params = GameParams(n=4, treasure=grid2.base, sigma=1, psi=2, rho=1,
                        big_r=10, horizon=5)
    robber.on_params(params)
    cops = ((2, 0), (-2, 0), (0, 2), (0, -2))
    with pytest.raises(OracleCaughtError):
        robber.move(GameState(cops, (0, 0), 1, "robber-to-move"))


def test_greedy_evader_rejects_negative_margin():
    with pytest.raises(ValueError):
        GreedyMaxminEvader(-1)


# -- scripted cop --------------------------------------------------------------

def test_scripted_cop_reproduces_the_original_match(grid2, tmp_path):
    cop = make_cop_agent("greedy:2", sigma=1, rho=1)
    trace = run(grid2, "weak", cop, make_robber_agent("greedy-evader:2"),
                12, seed=9, space_spec="grid:2")
    path = tmp_path / "orig.jsonl"
    trace.dump(str(path))

    scripted = make_cop_agent(f"scripted:{path}")
    again = run(grid2, "weak", scripted, make_robber_agent("greedy-evader:2"),
                12, seed=9, space_spec="grid:2")
    assert again.dumps() == trace.dumps()


def test_scripted_cop_stands_still_past_the_recording(grid2, tmp_path):
    trace = run(grid2, "weak", make_cop_agent("greedy"),
                make_robber_agent("greedy-evader:2"), 3, seed=9,
                space_spec="grid:2")
    path = tmp_path / "short.jsonl"
    trace.dump(str(path))
    agent = make_cop_agent(f"scripted:{path}")
    assert isinstance(agent, ScriptedCop)
    longer = run(grid2, "weak", agent, make_robber_agent("greedy-evader:2"),
                 6, seed=9, space_spec="grid:2")
    assert longer.outcome["kind"] == "HorizonReached"
    for rec in longer.stages[3:]:
        assert all(p[0] == p[-1] for p in rec.cop_moves)


# -- random cop ----------------------------------------------------------------

def test_random_cop_is_deterministic_per_seed(grid2):
    one = run(grid2, "weak", make_cop_agent("random:2"),
              make_robber_agent("greedy-evader:2"), 10, seed=3).dumps()
    two = run(grid2, "weak", make_cop_agent("random:2"),
              make_robber_agent("greedy-evader:2"), 10, seed=3).dumps()
    assert one == two


# -- projection ----------------------------------------------------------------

def test_projection_evader_freezes_off_plane_coordinates():
    space = parse_space_spec("grid:3")
    robber = projection_evader(GreedyMaxminEvader(2))
    cop = make_cop_agent("greedy", sigma=1, rho=1)
    trace = run(space, "weak", cop, robber, 15, seed=2, space_spec="grid:3")
    assert trace.outcome["kind"] == "HorizonReached"
    assert trace.robber_placement[2] == 0
    for rec in trace.stages:
        assert all(v[2] == 0 for v in rec.robber_move)


def test_projection_evader_respects_chosen_pair():
    space = parse_space_spec("grid:3")
    robber = projection_evader(GreedyMaxminEvader(2), pair=(0, 2))
    trace = run(space, "weak", make_cop_agent("greedy"), robber, 10, seed=2)
    for rec in trace.stages:
        assert all(v[1] == 0 for v in rec.robber_move)


def test_projection_evader_guards():
    with pytest.raises(StrategyUnavailableError):
        ProjectionEvader(GreedyMaxminEvader(1), pair=(1, 1))
    with pytest.raises(StrategyUnavailableError):
        ProjectionEvader(GreedyMaxminEvader(1), pair=(-1, 0))
    agent = ProjectionEvader(GreedyMaxminEvader(1), pair=(0, 3))
    with pytest.raises(StrategyUnavailableError):
        bound(agent, parse_space_spec("grid:3"))
    with pytest.raises(StrategyUnavailableError):
        bound(ProjectionEvader(GreedyMaxminEvader(1)),
              parse_space_spec("lamp:2"))


# -- helpers -------------------------------------------------------------------

def test_truncate_path():
    path = [(0, 0), (1, 0), (2, 0), (3, 0)]
    assert truncate_path(path, 2) == [(0, 0), (1, 0), (2, 0)]
    assert truncate_path(path, 0) == [(0, 0)]
    assert truncate_path(path, 9) == path

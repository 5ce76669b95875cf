import json

import pytest

from quasicop.agents import make_cop_agent
from quasicop.errors import MalformedSpecError, StrategyUnavailableError
from quasicop.engine import run
from quasicop.metagame import (ORACLE_CAVEAT, MetaRobber, OracleParams,
                               Z2MetaRobber, assert_meta_obligations,
                               derived_cop_params, lamplighter_meta_preset,
                               make_meta_robber, z2_meta_preset)
from quasicop.spaces import parse_space_spec


@pytest.mark.parametrize("a,b,want", [
    ((1, 2), None, (10, 32)),
    ((1, 0), None, (4, 8)),
    ((1, 4), None, (16, 56)),
])
def test_derived_cop_params(a, b, want):
    assert derived_cop_params(*a) == want


def test_oracle_params_json():
    row = OracleParams(10, 32, 88, 88).to_json()
    assert row == {"sigmaBar": 10, "rhoBar": 32, "psiBar": 88, "RBar": 88}


def test_make_meta_robber_presets():
    assert isinstance(make_meta_robber("z2"), Z2MetaRobber)
    assert isinstance(make_meta_robber("lamplighter"), MetaRobber)
    assert isinstance(make_meta_robber("lamplighter:2"), MetaRobber)
    for bad in ("", "z3", "lamplighter:x", "custom:", "custom:/nope.json"):
        with pytest.raises((MalformedSpecError, FileNotFoundError)):
            make_meta_robber(bad)


def test_custom_preset_from_json(tmp_path):
    cfg = tmp_path / "meta.json"
    cfg.write_text(json.dumps({
        "family": {"kind": "z2", "rhos": [4, 8]},
        "oracle": {"kind": "greedy-maxmin", "margin": 3},
    }))
    agent = make_meta_robber(f"custom:{cfg}")
    assert isinstance(agent, MetaRobber)
    trace = run(parse_space_spec("grid:2"), "strong",
                make_cop_agent("greedy", sigma=1, rho=4), agent, 8, seed=1)
    assert trace.outcome["kind"] == "HorizonReached"
    assert trace.failed_assertions == []


def test_meta_robber_refuses_the_weak_variant():
    agent = z2_meta_preset()
    agent.bind(parse_space_spec("grid:2"), "weak", __import__("random").Random(0),
               __import__("quasicop.engine", fromlist=["AssertionRecorder"])
               .AssertionRecorder())
    agent.on_match(1, (0, 0))
    with pytest.raises(StrategyUnavailableError):
        agent.choose_psi(1, rho=2)


def run_z2(rho, n=1, sigma=1, horizon_blocks=4, seed=0, cops="greedy"):
    space = parse_space_spec("grid:2")
    robber = z2_meta_preset()
    cop = make_cop_agent(cops, sigma=sigma, rho=rho)
    cop.n = n if ":" not in cops else cop.n
    trace = run(space, "strong", cop, robber,
                horizon_blocks * 4 * rho, seed, space_spec="grid:2")
    return trace, robber


def test_z2_preset_declared_parameters():
    trace, robber = run_z2(rho=4)
    assert trace.params["psi"] == 24          # 4 * model speed * sigma
    assert trace.params["R"] == 384           # 96 * defended reach
    log = robber.meta_log
    assert log.rho_prime == 4
    assert log.j == 16                        # grid spacing is 4 * reach
    assert log.lam == 4
    assert log.pretend_bound == 16


def test_z2_preset_rounds_reach_up_to_sigma():
    space = parse_space_spec("grid:2")
    robber = z2_meta_preset()
    cop = make_cop_agent("greedy", sigma=2, rho=5)
    trace = run(space, "strong", cop, robber, 12, seed=0)
    log = robber.meta_log
    assert log.rho_prime == 6                 # 2 * ceil(5/2)
    assert log.j == 24
    assert log.lam == 3
    assert trace.params["psi"] == 48          # 24 * sigma


def test_z2_obligations_pass_and_carry_the_caveat():
    trace, robber = run_z2(rho=4, horizon_blocks=5, seed=3)
    assert trace.outcome["kind"] == "HorizonReached"
    assert trace.failed_assertions == []
    report = assert_meta_obligations(trace, robber.family, robber.meta_log)
    assert report.caveat == ORACLE_CAVEAT
    assert all(r.passed for r in report.rows), [
        (r.name, r.detail) for r in report.rows if not r.passed]
    names = {r.name for r in report.rows}
    assert names == {"meta-path-budget", "meta-cop-projection", "meta-safety",
                     "meta-ball", "meta-pretend-offset"}


def test_online_assertion_names():
    trace, _ = run_z2(rho=4, seed=5)
    names = {a.name for a in trace.assertions}
    assert {"placement-clearance", "oracle-safe", "oracle-path-valid",
            "oracle-speed", "oracle-path-clear", "oracle-speed-uniform",
            "meta-complete"} <= names
    assert all(a.passed for a in trace.assertions)


def test_obligations_catch_a_teleported_cop():
    trace, robber = run_z2(rho=4, seed=7)
    # teleport one cop endpoint mid-block: its projected move is no longer
    # a legal model step
    rec = trace.stages[5]
    rec.cop_moves[0][-1] = [999, 999]
    report = assert_meta_obligations(trace, robber.family, robber.meta_log)
    failed = {r.name for r in report.rows if not r.passed}
    assert "meta-cop-projection" in failed


def test_obligations_catch_a_safety_breach():
    trace, robber = run_z2(rho=4, seed=9)
    # drag a robber checkpoint onto the cop's recorded endpoint
    rec = trace.stages[2]
    rec.robber_move[-1] = list(rec.cop_moves[0][-1])
    report = assert_meta_obligations(trace, robber.family, robber.meta_log)
    failed = {r.name for r in report.rows if not r.passed}
    assert "meta-safety" in failed


def test_obligations_catch_a_ball_escape():
    trace, robber = run_z2(rho=4, seed=11)
    rec = trace.stages[-1]
    rec.robber_move[-1] = [10 ** 6, 0]
    report = assert_meta_obligations(trace, robber.family, robber.meta_log)
    failed = {r.name for r in report.rows if not r.passed}
    assert "meta-ball" in failed


def test_lamplighter_preset_a_and_b_constants():
    robber = lamplighter_meta_preset()
    trace = run(parse_space_spec("lamp:2"), "strong",
                make_cop_agent("greedy", sigma=1, rho=1), robber, 10, seed=1,
                space_spec="lamp:2")
    assert trace.outcome["kind"] == "HorizonReached"
    bars = robber.meta_log.bars
    assert (bars.sigma_bar, bars.rho_bar) == (10, 32)
    assert trace.params["psi"] == 90
    assert trace.params["R"] == 192
    assert robber.meta_log.j == 2 and robber.meta_log.lam == 2
    report = assert_meta_obligations(trace, robber.family, robber.meta_log)
    assert all(r.passed for r in report.rows)

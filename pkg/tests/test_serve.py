import io
import json
import socket
import threading

import pytest

import quasicop.cli as cli
import quasicop.serve as serve_mod
from quasicop.errors import MalformedSpecError


def scripted(config, messages):
    """Play one connection against a pre-written client script.

    The protocol is strictly server-driven request/response, so a correct
    client's lines can all be queued up front; no threads needed.
    """
    rfile = io.BytesIO(b"".join(
        json.dumps(m).encode() + b"\n" for m in messages))
    wfile = io.BytesIO()
    trace = serve_mod.play_connection(serve_mod.Session(rfile, wfile), config)
    lines = [json.loads(line) for line in wfile.getvalue().splitlines()]
    return trace, lines


def weak_config(horizon=3, robber="greedy-evader:2"):
    return serve_mod.build_config("grid:2", "weak", robber, 1, horizon, 7)


HELLO = {"type": "hello"}
SIGMA = {"type": "param", "sigma": 1}
RHO = {"type": "param", "rho": 1}
PLACE = {"type": "place", "cops": [[10, 10]]}
STAND = {"type": "move", "paths": [[[10, 10]]]}


def shapes(lines):
    return [m["type"] + (":" + m["phase"] if m["type"] == "config" else
                         ":" + str(m["stage"]) if m["type"] == "state" else "")
            for m in lines]


def test_weak_game_message_flow():
    trace, lines = scripted(weak_config(),
                            [HELLO, SIGMA, RHO, PLACE, STAND, STAND, STAND])
    assert shapes(lines) == ["config:match", "config:params", "state:0",
                             "state:1", "state:2", "state:3", "outcome"]
    match = lines[0]
    assert match["space"] == "grid:2" and match["variant"] == "weak"
    assert match["n"] == 1 and match["horizon"] == 3
    assert match["treasure"] == [0, 0]
    assert match["robber"] == "greedy-evader:2"
    params = lines[1]["params"]
    # the evader knows rho up front in the weak order
    assert params == {"n": 1, "sigma": 1, "psi": 3, "rho": 1,
                      "R": 12, "horizon": 3}
    assert lines[1]["treasure"] == [0, 0]
    assert trace.outcome["kind"] == "HorizonReached"
    assert lines[-1]["outcome"] == trace.outcome
    assert lines[-1]["assertions"] == []


def test_state_messages_are_coherent():
    _, lines = scripted(weak_config(),
                        [HELLO, SIGMA, RHO, PLACE, STAND, STAND, STAND])
    states = [m for m in lines if m["type"] == "state"]
    placed = states[0]
    assert placed["cops"] == [[10, 10]]
    assert placed["robberPath"] == [placed["robber"]]
    assert "minCopDist" not in placed and "inBall" not in placed
    # reach ball of radius 1 around a plane vertex has 5 points
    assert len(placed["reachBalls"]) == 1
    assert len(placed["reachBalls"][0]) == 5
    assert [10, 10] in placed["reachBalls"][0]
    previous = placed["robber"]
    for stage, msg in enumerate(states[1:], start=1):
        assert msg["stage"] == stage
        assert msg["cops"] == [[10, 10]]
        assert msg["robberPath"][0] == previous
        assert msg["robberPath"][-1] == msg["robber"]
        assert len(msg["robberPath"]) <= 3 + 1
        # the standing cop is far outside the distance cutoff
        assert msg["minCopDist"] == -1
        assert isinstance(msg["inBall"], bool)
        previous = msg["robber"]


def test_strong_negotiation_inserts_psi_config():
    config = serve_mod.build_config("grid:2", "strong", "greedy-evader:2",
                                    1, 2, 7)
    _, lines = scripted(config, [HELLO, SIGMA, RHO, PLACE, STAND, STAND])
    assert shapes(lines)[:3] == ["config:match", "config:psi",
                                 "config:params"]
    # the robber declares psi before rho is on the table: margin fallback
    assert lines[1]["psi"] == 4
    assert lines[2]["params"]["psi"] == 4
    assert lines[2]["params"]["R"] == 12


def test_bad_hello_retries_then_proceeds():
    trace, lines = scripted(weak_config(horizon=1),
                            [{"type": "move"}, {"nonsense": 1}, HELLO,
                             SIGMA, RHO, PLACE, STAND])
    assert shapes(lines)[:3] == ["illegal", "illegal", "config:match"]
    assert trace.outcome["kind"] == "HorizonReached"


def test_three_bad_hellos_abort_without_a_game():
    trace, lines = scripted(weak_config(),
                            [{"type": "x"}, {"type": "y"}, {"type": "z"}])
    assert trace is None
    assert shapes(lines) == ["illegal", "illegal", "illegal"]


def test_three_illegal_params_forfeit_the_cops():
    trace, lines = scripted(weak_config(),
                            [HELLO,
                             {"type": "param", "sigma": 0},
                             {"type": "wat"},
                             {"type": "param"}])
    assert [m["type"] for m in lines[1:4]] == ["illegal"] * 3
    assert trace.outcome["kind"] == "Forfeit"
    assert trace.outcome["offender"] == "cops"
    assert "3 illegal messages in a row" in trace.outcome["reason"]
    assert lines[-1]["type"] == "outcome"


def test_strikes_reset_between_transactions():
    # two mistakes per request never reach the limit of three
    trace, lines = scripted(
        weak_config(horizon=1),
        [HELLO,
         {"type": "param", "sigma": -1}, {"type": "param", "sigma": True},
         SIGMA,
         {"type": "param", "rho": 0}, {"type": "param"},
         RHO,
         {"type": "place", "cops": []}, {"type": "place"},
         PLACE,
         STAND])
    assert trace.outcome["kind"] == "HorizonReached"
    assert sum(1 for m in lines if m["type"] == "illegal") == 6


def test_forged_move_is_rejected_then_game_continues():
    forged = {"type": "move", "paths": [[[10, 10], [12, 10]]]}
    trace, lines = scripted(weak_config(horizon=2),
                            [HELLO, SIGMA, RHO, PLACE,
                             forged, STAND, STAND])
    illegal = [m for m in lines if m["type"] == "illegal"]
    assert len(illegal) == 1
    assert "edge" in illegal[0]["reason"]
    assert trace.outcome["kind"] == "HorizonReached"
    assert len(trace.stages) == 2


def test_move_path_must_start_at_the_cop():
    stray = {"type": "move", "paths": [[[9, 9]]]}
    _, lines = scripted(weak_config(horizon=1),
                        [HELLO, SIGMA, RHO, PLACE, stray, STAND])
    illegal = [m for m in lines if m["type"] == "illegal"]
    assert len(illegal) == 1
    assert "starts at" in illegal[0]["reason"]


def test_disconnect_mid_game_forfeits_the_cops():
    trace, lines = scripted(weak_config(), [HELLO, SIGMA, RHO, PLACE])
    assert trace.outcome["kind"] == "Forfeit"
    assert trace.outcome["offender"] == "cops"
    assert "disconnected" in trace.outcome["reason"]
    assert lines[-1]["type"] == "outcome"


def test_malformed_json_line_counts_as_a_strike():
    rfile = io.BytesIO(json.dumps(HELLO).encode() + b"\n"
                       + b"{not json\n"
                       + b"".join(json.dumps(m).encode() + b"\n"
                                  for m in [SIGMA, RHO, PLACE, STAND]))
    wfile = io.BytesIO()
    trace = serve_mod.play_connection(serve_mod.Session(rfile, wfile),
                                      weak_config(horizon=1))
    lines = [json.loads(line) for line in wfile.getvalue().splitlines()]
    assert trace.outcome["kind"] == "HorizonReached"
    assert any(m["type"] == "illegal" and "JSON" in m["reason"]
               for m in lines)


def test_huge_reach_omits_the_ball():
    # radius 64 on the plane is past the streaming cap
    trace, lines = scripted(
        weak_config(horizon=1),
        [HELLO, SIGMA, {"type": "param", "rho": 64},
         {"type": "place", "cops": [[200, 200]]},
         {"type": "move", "paths": [[[200, 200]]]}])
    assert trace.outcome["kind"] == "HorizonReached"
    states = [m for m in lines if m["type"] == "state"]
    assert all(m["reachBalls"] == [[]] for m in states)


def test_build_config_rejects_bad_specs():
    with pytest.raises(MalformedSpecError):
        serve_mod.build_config("mystery:1", "weak", "greedy-evader:2",
                               1, 5, 0)
    with pytest.raises(MalformedSpecError):
        serve_mod.build_config("grid:2", "weak", "ghost", 1, 5, 0)
    with pytest.raises(MalformedSpecError):
        serve_mod.build_config("grid:2", "medium", "greedy-evader:2",
                               1, 5, 0)
    with pytest.raises(MalformedSpecError):
        serve_mod.build_config("grid:2", "weak", "greedy-evader:2",
                               0, 5, 0)


def test_socket_game_writes_replayable_trace(tmp_path):
    """End to end through the real TCP server: the emitted trace passes
    the offline replay check."""
    trace_path = tmp_path / "served.jsonl"
    config = weak_config(horizon=4)
    ports: list[int] = []
    ready = threading.Event()

    def announce(message: str) -> None:
        ports.append(int(message.rsplit(":", 1)[1]))
        ready.set()

    server = threading.Thread(
        target=serve_mod.serve,
        kwargs=dict(config=config, port=0, once=True,
                    trace_path=str(trace_path), announce=announce),
        daemon=True)
    server.start()
    assert ready.wait(10)

    with socket.create_connection(("127.0.0.1", ports[0]), timeout=10) as s:
        rfile = s.makefile("rb")
        wfile = s.makefile("wb")

        def send(obj):
            wfile.write(json.dumps(obj).encode() + b"\n")
            wfile.flush()

        def recv():
            return json.loads(rfile.readline())

        send(HELLO)
        assert recv()["phase"] == "match"
        send(SIGMA)
        send(RHO)
        assert recv()["phase"] == "params"
        send(PLACE)
        msg = recv()
        while msg["type"] == "state" and msg["stage"] < 4:
            send(STAND)
            msg = recv()
        outcome = recv()
        assert outcome["type"] == "outcome"
        assert outcome["outcome"]["kind"] == "HorizonReached"
    server.join(10)
    assert not server.is_alive()
    assert cli.main(["replay", str(trace_path)]) == 0

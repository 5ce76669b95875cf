import json

import pytest

from quasicop.errors import MalformedSpecError
from quasicop.trace import AssertionRecord, StageRecord, Trace


def sample_trace() -> Trace:
    trace = Trace(
        space_spec="grid:2", variant="weak",
        params={"n": 2, "sigma": 1, "psi": 3, "rho": 1, "R": 10,
                "horizon": 5},
        seed=42, treasure=[0, 0],
        cop_placements=[[3, 0], [0, 3]], robber_placement=[-5, -5])
    trace.stages = [
        StageRecord(1, [[[3, 0], [2, 0]], [[0, 3]]],
                    [[-5, -5], [-6, -5], [-7, -5]], 9, False),
        StageRecord(2, [[[2, 0], [1, 0]], [[0, 3], [0, 2]]],
                    [[-7, -5], [-8, -5]], -1, True),
    ]
    trace.outcome = {"kind": "HorizonReached", "stages": 2,
                     "ballVisitStages": [2], "lastInBall": True}
    trace.assertions = [AssertionRecord(1, "clearance", True, ""),
                        AssertionRecord(2, "clearance", False, "cut off")]
    return trace


def test_round_trip_preserves_everything(tmp_path):
    trace = sample_trace()
    path = tmp_path / "t.jsonl"
    trace.dump(str(path))
    back = Trace.load(str(path))
    assert back.space_spec == trace.space_spec
    assert back.variant == trace.variant
    assert back.params == trace.params
    assert back.seed == trace.seed
    assert back.treasure == trace.treasure
    assert back.cop_placements == trace.cop_placements
    assert back.robber_placement == trace.robber_placement
    assert back.outcome == trace.outcome
    assert [s.to_json() for s in back.stages] == \
           [s.to_json() for s in trace.stages]
    assert [a.to_json() for a in back.assertions] == \
           [a.to_json() for a in trace.assertions]


def test_lines_are_newline_delimited_json():
    text = sample_trace().dumps()
    rows = [json.loads(line) for line in text.splitlines()]
    assert len(rows) == 4
    assert rows[0]["space"] == "grid:2"
    assert rows[0]["params"] == {"n": 2, "sigma": 1, "psi": 3, "rho": 1,
                                 "R": 10, "horizon": 5}
    assert rows[1]["stage"] == 1 and rows[2]["stage"] == 2
    assert rows[2]["minCopDist"] == -1
    assert rows[3]["outcome"]["kind"] == "HorizonReached"
    assert rows[3]["assertions"][1]["pass"] is False


def test_stage_record_json_keys():
    rec = sample_trace().stages[0]
    assert set(rec.to_json()) == {"stage", "copMoves", "robberMove",
                                  "minCopDist", "inBall"}
    assert StageRecord.from_json(rec.to_json()).to_json() == rec.to_json()


def test_failed_assertions_property():
    trace = sample_trace()
    failed = trace.failed_assertions
    assert len(failed) == 1
    assert failed[0].name == "clearance" and failed[0].stage == 2


def test_parse_rejects_truncated_trace():
    lines = sample_trace().dumps().splitlines()
    with pytest.raises(MalformedSpecError):
        Trace.parse_lines(lines[:1])
    # dropping the final line leaves a stage row where the outcome should be
    with pytest.raises(MalformedSpecError):
        Trace.parse_lines(lines[:-1])


def test_parse_rejects_bad_header():
    lines = sample_trace().dumps().splitlines()
    head = json.loads(lines[0])
    del head["params"]["R"]
    with pytest.raises(MalformedSpecError):
        Trace.parse_lines([json.dumps(head)] + lines[1:])


def test_parse_propagates_corrupt_json():
    lines = sample_trace().dumps().splitlines()
    lines[1] = lines[1][:-5]
    with pytest.raises(ValueError):
        Trace.parse_lines(lines)


def test_blank_lines_are_ignored():
    lines = sample_trace().dumps().splitlines()
    padded = [lines[0], "", *lines[1:], "   "]
    assert len(Trace.parse_lines(padded).stages) == 2

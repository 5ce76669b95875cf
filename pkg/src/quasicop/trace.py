"""Replayable game traces, stored as JSON lines.

Line 1 is a header, then one line per stage, then a final line with the
outcome and the assertion log.  Serialization is deterministic so that two
runs with the same seed produce byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .errors import MalformedSpecError


def _dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


@dataclass
class StageRecord:
    stage: int
    cop_moves: list[list[Any]]      # per cop, list of serialized vertices
    robber_move: list[Any]          # list of serialized vertices
    min_cop_dist: int               # -1 when beyond the capture cutoff
    in_ball: bool

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "copMoves": self.cop_moves,
            "robberMove": self.robber_move,
            "minCopDist": self.min_cop_dist,
            "inBall": self.in_ball,
        }

    @classmethod
    def from_json(cls, row: dict) -> "StageRecord":
        try:
            return cls(
                stage=int(row["stage"]),
                cop_moves=[list(p) for p in row["copMoves"]],
                robber_move=list(row["robberMove"]),
                min_cop_dist=int(row["minCopDist"]),
                in_ball=bool(row["inBall"]),
            )
        except (KeyError, TypeError) as exc:
            raise MalformedSpecError(f"bad stage row: {exc}") from exc


@dataclass
class AssertionRecord:
    stage: int
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "name": self.name,
            "pass": self.passed,
            "detail": self.detail,
        }

    @classmethod
    def from_json(cls, row: dict) -> "AssertionRecord":
        return cls(int(row["stage"]), str(row["name"]), bool(row["pass"]),
                   str(row["detail"]))


@dataclass
class Trace:
    space_spec: str
    variant: str
    params: dict                    # n, sigma, psi, rho, R, horizon (ints)
    seed: int
    treasure: Any                   # serialized vertex
    cop_placements: list[Any]
    robber_placement: Any
    stages: list[StageRecord] = field(default_factory=list)
    outcome: dict | None = None
    assertions: list[AssertionRecord] = field(default_factory=list)

    def header_json(self) -> dict:
        return {
            "space": self.space_spec,
            "variant": self.variant,
            "params": {
                "n": self.params["n"],
                "sigma": self.params["sigma"],
                "psi": self.params["psi"],
                "rho": self.params["rho"],
                "R": self.params["R"],
                "horizon": self.params["horizon"],
            },
            "seed": self.seed,
            "treasure": self.treasure,
            "placements": {
                "cops": self.cop_placements,
                "robber": self.robber_placement,
            },
        }

    def final_json(self) -> dict:
        return {
            "outcome": self.outcome,
            "assertions": [a.to_json() for a in self.assertions],
        }

    def lines(self) -> Iterable[str]:
        yield _dumps(self.header_json())
        for rec in self.stages:
            yield _dumps(rec.to_json())
        yield _dumps(self.final_json())

    def dump(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for line in self.lines():
                fh.write(line + "\n")

    def dumps(self) -> str:
        return "".join(line + "\n" for line in self.lines())

    @property
    def failed_assertions(self) -> list[AssertionRecord]:
        return [a for a in self.assertions if not a.passed]

    @classmethod
    def parse_lines(cls, lines: list[str]) -> "Trace":
        rows = [json.loads(line) for line in lines if line.strip()]
        if len(rows) < 2:
            raise MalformedSpecError("trace needs a header and a final line")
        head, *mid, last = rows
        if "outcome" not in last:
            raise MalformedSpecError("last trace line lacks an outcome")
        try:
            params = dict(head["params"])
            placements = head["placements"]
            trace = cls(
                space_spec=str(head["space"]),
                variant=str(head["variant"]),
                params={
                    "n": int(params["n"]),
                    "sigma": int(params["sigma"]),
                    "psi": int(params["psi"]),
                    "rho": int(params["rho"]),
                    "R": int(params["R"]),
                    "horizon": int(params["horizon"]),
                },
                seed=int(head["seed"]),
                treasure=head["treasure"],
                cop_placements=list(placements["cops"]),
                robber_placement=placements["robber"],
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedSpecError(f"bad trace header: {exc}") from exc
        trace.stages = [StageRecord.from_json(r) for r in mid]
        trace.outcome = last["outcome"]
        trace.assertions = [AssertionRecord.from_json(r)
                            for r in last.get("assertions", [])]
        return trace

    @classmethod
    def load(cls, path: str) -> "Trace":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.parse_lines(fh.readlines())

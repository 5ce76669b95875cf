"""Strategy registry: string specs to agent instances for the CLI.

Cop specs: greedy[:n], random[:n], pusher[:n], scripted:<traceFile>,
remote (constructed by the serve layer).  Cop sigma/rho declarations come
from the run configuration.

Robber specs: bigon, bottleneck, lamplighter, bs-sheet,
greedy-evader:<margin>, meta:<preset>.
"""

from __future__ import annotations

from typing import Optional

from ..errors import MalformedSpecError
from ..trace import Trace
from .base import CopAgent, RobberAgent
from .cops import GreedyPursuitCop, LinePusherCop, RandomCop, ScriptedCop
from .oracle import GreedyMaxminEvader


def make_cop_agent(spec: str, sigma: int = 1, rho: int = 1) -> CopAgent:
    kind, _, arg = spec.partition(":")
    if kind == "scripted":
        if not arg:
            raise MalformedSpecError("scripted cop needs a trace file path")
        return ScriptedCop(Trace.load(arg))
    try:
        n = int(arg) if arg else 1
    except ValueError as exc:
        raise MalformedSpecError(f"bad cop count in {spec!r}") from exc
    if n < 1:
        raise MalformedSpecError(f"cop count must be >= 1 in {spec!r}")
    if kind == "greedy":
        return GreedyPursuitCop(n, sigma=sigma, rho=rho)
    if kind == "random":
        return RandomCop(n, sigma=sigma, rho=rho)
    if kind == "pusher":
        return LinePusherCop(n, sigma=sigma, rho=rho)
    raise MalformedSpecError(f"unknown cop agent {spec!r}")


def make_robber_agent(spec: str) -> RobberAgent:
    kind, _, arg = spec.partition(":")
    if kind == "greedy-evader":
        try:
            margin = int(arg)
        except ValueError as exc:
            raise MalformedSpecError(
                f"greedy-evader needs an integer margin, got {spec!r}"
            ) from exc
        return GreedyMaxminEvader(margin)
    if kind == "bigon":
        from .bigon import BigonEvader
        return BigonEvader()
    if kind == "bottleneck":
        from .bottleneck import BottleneckEvader
        return BottleneckEvader()
    if kind == "lamplighter":
        from .lamplighter import LamplighterEvader
        return LamplighterEvader()
    if kind == "bs-sheet":
        from .bs_sheet import BsSheetEvader
        return BsSheetEvader()
    if kind == "meta":
        from ..metagame import make_meta_robber
        return make_meta_robber(arg)
    raise MalformedSpecError(f"unknown robber agent {spec!r}")

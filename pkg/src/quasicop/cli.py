"""Command-line front end.

Subcommands: ``run`` plays a full match and writes a replayable trace,
``replay`` re-simulates one, ``verify`` samples a scaling family's
distance bounds, ``scan`` measures bigon thinness, ``hd`` tabulates
horizontal displacement on the affine spaces, and ``serve`` exposes the
interactive protocol for the browser client.

Exit codes: 0 success (for run: horizon reached with a clean assertion
log; for verify: zero violations), 2 capture, 3 assertion failures or a
forfeit, 5 replay divergence, 64 unusable configuration, 1 violations or
resource limits elsewhere.
"""

from __future__ import annotations

import argparse
import json
import sys

from .agents import make_cop_agent, make_robber_agent
from .analysis import bigon_thinness_scan, hd
from .engine import replay, run
from .errors import (GameAssertionError, MalformedSpecError,
                     MalformedVertexError, ResourceLimitError,
                     StrategyUnavailableError)
from .homothety import SampleSpec, lamplighter_family, verify_family, \
    z2_scaling_family
from .spaces import parse_space_spec
from .spaces.bs import BsSpace
from .trace import Trace
from . import serve as serve_mod


def _int_list(text: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p != ""]
    except ValueError as exc:
        raise MalformedSpecError(f"bad integer list {text!r}") from exc


def cmd_run(args) -> int:
    space = parse_space_spec(args.space)
    cop = make_cop_agent(args.cops, sigma=args.sigma, rho=args.rho)
    robber = make_robber_agent(args.robber)
    try:
        trace = run(space, args.variant, cop, robber, horizon=args.horizon,
                    seed=args.seed, assertion_mode=args.assertion_mode,
                    space_spec=args.space)
    except GameAssertionError as exc:
        # fail-fast outside the stage loop (negotiation or placement)
        print(f"assertion failed before play: {exc}", file=sys.stderr)
        return 3
    if args.trace:
        trace.dump(args.trace)
    failed = trace.failed_assertions
    kind = trace.outcome["kind"]
    print(f"{kind} after {len(trace.stages)} stages, "
          f"{len(failed)} assertion failures"
          + (f", trace {args.trace}" if args.trace else ""))
    for rec in failed:
        print(f"  stage {rec.stage} {rec.name}: {rec.detail}")
    if kind == "Captured":
        return 2
    if failed or kind == "Forfeit":
        return 3
    return 0


def cmd_replay(args) -> int:
    try:
        trace = Trace.load(args.trace)
    except ValueError as exc:
        raise MalformedSpecError(f"unreadable trace file: {exc}") from exc
    space = parse_space_spec(trace.space_spec)
    ok, stage, detail = replay(space, trace, reach=args.recheck_reach)
    if ok:
        print(f"replay ok: {trace.outcome['kind']}, "
              f"{len(trace.stages)} stages")
        return 0
    where = "header" if stage is None else f"stage {stage}"
    print(f"replay diverged at {where}: {detail}", file=sys.stderr)
    return 5


def cmd_verify(args) -> int:
    kind, _, rest = args.family.partition(":")
    if kind == "z2":
        family = z2_scaling_family(tuple(_int_list(args.rho)))
    elif kind == "lamplighter":
        q = int(rest) if rest else 2
        family = lamplighter_family(q, tuple(_int_list(args.j)))
    else:
        raise MalformedSpecError(f"unknown family {args.family!r}")
    spec = SampleSpec(radius=args.radius, pair_count=args.pairs,
                      walk_radius=args.walk_radius, seed=args.seed,
                      witness_cap=args.witness_cap)
    report = verify_family(family, spec)
    json.dump(report.to_json(), sys.stdout, indent=2)
    print()
    return 0 if report.violation_count == 0 else 1


def cmd_scan(args) -> int:
    space = parse_space_spec(args.space)
    width, witness = bigon_thinness_scan(space, args.radius)
    out = {"maxWidth": width, "witness": None}
    if witness is not None:
        out["witness"] = {
            "gamma": [space.to_obj(v) for v in witness.gamma],
            "gammaPrime": [space.to_obj(v) for v in witness.gamma_prime],
            "delta": witness.delta,
            "t": witness.t,
            "etaMinus": [space.to_obj(v) for v in witness.eta_minus],
            "etaPlus": [space.to_obj(v) for v in witness.eta_plus],
        }
    json.dump(out, sys.stdout, indent=2)
    print()
    return 0


def cmd_hd(args) -> int:
    space = parse_space_spec(args.space)
    if not isinstance(space, BsSpace):
        raise MalformedSpecError(
            f"hd needs an affine space (bs:<m>), got {args.space!r}")
    print("H,reach,value")
    for height in _int_list(args.height):
        for reach in _int_list(args.reach):
            print(f"{height},{reach},{hd(space, height, reach)}")
    return 0


def cmd_serve(args) -> int:
    kind, _, arg = args.cops.partition(":")
    if kind != "remote":
        raise MalformedSpecError(
            f"serve plays the cops from the connection; use "
            f"--cops remote[:<n>], got {args.cops!r}")
    n = int(arg) if arg else 1
    config = serve_mod.build_config(args.space, args.variant, args.robber,
                                    n, args.horizon, args.seed,
                                    args.assertion_mode)
    # stdout may be a pipe; the port announcement must not sit in a buffer
    serve_mod.serve(config, host=args.host, port=args.port, once=args.once,
                    trace_path=args.trace,
                    announce=lambda message: print(message, flush=True))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quasicop",
        description="pursuit games on infinite graphs: simulate, verify, "
                    "serve")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="play one match and write its trace")
    p.add_argument("--space", required=True)
    p.add_argument("--variant", required=True, choices=("weak", "strong"))
    p.add_argument("--cops", required=True,
                   help="greedy[:n] | random[:n] | pusher[:n] | "
                        "scripted:<trace>")
    p.add_argument("--robber", required=True,
                   help="bigon | bottleneck | lamplighter | bs-sheet | "
                        "greedy-evader:<margin> | meta:<preset>")
    p.add_argument("--horizon", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--sigma", type=int, default=1, help="cop speed")
    p.add_argument("--rho", type=int, default=1, help="cop reach")
    p.add_argument("--trace", help="write the trace to this path")
    p.add_argument("--assertion-mode", choices=("record", "fail-fast"),
                   default="record")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("replay", help="re-simulate and re-check a trace")
    p.add_argument("trace")
    p.add_argument("--recheck-reach", type=int, default=None,
                   help="re-check captures at a smaller reach")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("verify",
                       help="sample a scaling family's distance bounds")
    p.add_argument("--family", required=True,
                   help="z2 | lamplighter[:<q>]")
    p.add_argument("--rho", default="2,4,8",
                   help="scales for the plane family (comma list)")
    p.add_argument("--j", default="2,3",
                   help="block widths for the dial family (comma list)")
    p.add_argument("--radius", type=int, default=5)
    p.add_argument("--pairs", type=int, default=10_000)
    p.add_argument("--walk-radius", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--witness-cap", type=int, default=5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="exact bigon thinness over a ball")
    p.add_argument("--space", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("hd",
                       help="horizontal displacement table (CSV) on bs:<m>")
    p.add_argument("--space", required=True)
    p.add_argument("--H", dest="height", required=True,
                   help="height bound(s), comma list")
    p.add_argument("--reach", required=True, help="reach(es), comma list")
    p.set_defaults(func=cmd_hd)

    p = sub.add_parser("serve",
                       help="serve interactive cop play over a socket")
    p.add_argument("--space", required=True)
    p.add_argument("--variant", required=True, choices=("weak", "strong"))
    p.add_argument("--robber", required=True)
    p.add_argument("--cops", default="remote:1", help="remote[:<n>]")
    p.add_argument("--horizon", required=True, type=int)
    p.add_argument("--seed", required=True, type=int)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=0,
                   help="0 picks a free port (announced on stdout)")
    p.add_argument("--once", action="store_true",
                   help="exit after one connection")
    p.add_argument("--trace", help="write each finished game's trace here")
    p.add_argument("--assertion-mode", choices=("record", "fail-fast"),
                   default="record")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MalformedSpecError, MalformedVertexError,
            StrategyUnavailableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 64
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 64
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

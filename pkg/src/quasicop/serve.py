"""Interactive cop play over newline-delimited JSON.

One game per connection: the client is the cop player, the robber is any
registered strategy.  The handler walks the ordinary engine run with a
remote-backed cop agent, so every move is validated by the same code as
offline matches and the emitted trace replays identically.

Message flow (client first): ``hello`` -> match config; ``param`` with
sigma (strong games then receive the robber's psi in a config message)
-> ``param`` with rho -> full params config; ``place`` -> stage-0 state;
``move`` -> state, repeated until an ``outcome`` message closes the game.
Illegal client messages get an ``illegal`` reply with the reason; three
in a row forfeit the game to the robber.
"""

from __future__ import annotations

import json
import socketserver
from typing import Callable, Optional

from .agents import make_robber_agent
from .agents.base import CopAgent
from .engine import COPS, GameParams, GameState, run, validate_path
from .errors import (MalformedSpecError, MalformedVertexError, ProtocolError,
                     ResourceLimitError)
from .spaces import parse_space_spec
from .trace import Trace

STRIKE_LIMIT = 3
REACH_BALL_CAP = 4096           # omit a ball rather than stream one this big
MAX_LINE = 1 << 20


class SessionClosed(ProtocolError):
    """Transport gone; unrecoverable, unlike an illegal message."""


class Session:
    """Line-framed JSON over a socket file pair."""

    def __init__(self, rfile, wfile):
        self.rfile = rfile
        self.wfile = wfile

    def send(self, obj: dict) -> None:
        try:
            self.wfile.write(json.dumps(obj, separators=(",", ":"))
                             .encode("utf-8") + b"\n")
            self.wfile.flush()
        except OSError as exc:
            raise SessionClosed(COPS, f"client connection lost: {exc}")

    def recv(self) -> dict:
        try:
            line = self.rfile.readline(MAX_LINE)
        except OSError as exc:
            raise SessionClosed(COPS, f"client connection lost: {exc}")
        if not line:
            raise SessionClosed(COPS, "client disconnected")
        try:
            msg = json.loads(line)
        except ValueError as exc:
            raise _Illegal(f"not valid JSON: {exc}")
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            raise _Illegal("messages are JSON objects with a string 'type'")
        return msg


class _Illegal(Exception):
    """Recoverable client mistake: reply 'illegal' and wait for a retry."""


class RemoteCop(CopAgent):
    """Cop agent driven by a connected client.

    Every request tolerates up to three consecutive illegal replies; the
    strike counter resets on each legal message, and running it out
    raises the protocol error that forfeits the game.
    """

    def __init__(self, n: int, session: Session):
        super().__init__(n)
        self.session = session

    def _transact(self, want: str, extract: Callable[[dict], object]):
        strikes = 0
        while True:
            try:
                msg = self.session.recv()
                if msg["type"] != want:
                    raise _Illegal(f"expected a {want!r} message, got "
                                   f"{msg['type']!r}")
                return extract(msg)
            except (_Illegal, MalformedVertexError) as exc:
                reason = str(exc)
            except SessionClosed:
                raise
            except ProtocolError as exc:
                if exc.offender != COPS:
                    raise
                reason = exc.reason
            strikes += 1
            self.session.send({"type": "illegal", "reason": reason})
            if strikes >= STRIKE_LIMIT:
                raise ProtocolError(
                    COPS, f"{STRIKE_LIMIT} illegal messages in a row "
                          f"(last: {reason})")

    def _int_field(self, msg: dict, name: str) -> int:
        value = msg.get(name)
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise _Illegal(f"{name} must be a positive integer, "
                           f"got {value!r}")
        return value

    def choose_sigma(self) -> int:
        return self._transact("param", lambda m: self._int_field(m, "sigma"))

    def choose_rho(self, sigma: int, psi: Optional[int] = None) -> int:
        if psi is not None:
            # strong variant: the robber's speed is on the table first
            self.session.send({"type": "config", "phase": "psi", "psi": psi})
        return self._transact("param", lambda m: self._int_field(m, "rho"))

    def on_params(self, params: GameParams) -> None:
        super().on_params(params)
        self.session.send({
            "type": "config", "phase": "params",
            "variant": self.variant,
            "params": params.to_json(),
            "treasure": self.space.to_obj(self.match_treasure),
        })

    def place(self, n: int) -> list:
        def extract(msg: dict) -> list:
            cops = msg.get("cops")
            if not isinstance(cops, list) or len(cops) != n:
                raise _Illegal(f"place needs a list of {n} cop vertices")
            return [self.space.from_obj(c) for c in cops]
        return self._transact("place", extract)

    def move(self, state: GameState) -> list:
        def extract(msg: dict) -> list:
            paths = msg.get("paths")
            if not isinstance(paths, list) or len(paths) != self.n:
                raise _Illegal(f"move needs one path per cop ({self.n})")
            out = []
            for i, raw in enumerate(paths):
                if not isinstance(raw, list) or not raw:
                    raise _Illegal(f"cop {i} path must be a nonempty list")
                path = [self.space.from_obj(v) for v in raw]
                out.append(validate_path(self.space, path,
                                         state.cop_positions[i],
                                         self.params.sigma, COPS))
            return out
        return self._transact("move", extract)

    # -- observation hooks (engine streams state through these) ----------

    def _reach_balls(self, cop_vertices) -> list:
        balls = []
        for c in cop_vertices:
            try:
                balls.append([self.space.to_obj(v) for v in
                              self.space.ball(c, self.params.rho,
                                              limit=REACH_BALL_CAP)])
            except ResourceLimitError:
                balls.append([])
        return balls

    def on_placed(self, cops, robber) -> None:
        self.session.send({
            "type": "state", "stage": 0,
            "cops": [self.space.to_obj(c) for c in cops],
            "robber": self.space.to_obj(robber),
            "robberPath": [self.space.to_obj(robber)],
            "reachBalls": self._reach_balls(cops),
        })

    def on_stage(self, record) -> None:
        ends = [self.space.from_obj(p[-1]) for p in record.cop_moves]
        self.session.send({
            "type": "state", "stage": record.stage,
            "cops": [p[-1] for p in record.cop_moves],
            "robber": record.robber_move[-1],
            "robberPath": record.robber_move,
            "reachBalls": self._reach_balls(ends),
            "minCopDist": record.min_cop_dist,
            "inBall": record.in_ball,
        })


def play_connection(session: Session, config: dict) -> Optional[Trace]:
    """Handshake and one full game; returns the trace (None if the client
    never got through the handshake)."""
    space = parse_space_spec(config["space"])
    n = config["n"]
    strikes = 0
    while True:
        try:
            msg = session.recv()
            if msg["type"] != "hello":
                raise _Illegal(f"expected 'hello', got {msg['type']!r}")
            break
        except _Illegal as exc:
            strikes += 1
            session.send({"type": "illegal", "reason": str(exc)})
            if strikes >= STRIKE_LIMIT:
                return None
    session.send({
        "type": "config", "phase": "match",
        "space": config["space"], "variant": config["variant"],
        "n": n, "horizon": config["horizon"],
        "treasure": space.to_obj(space.base),
        "robber": config["robber"],
    })
    cop = RemoteCop(n, session)
    robber = make_robber_agent(config["robber"])
    trace = run(space, config["variant"], cop, robber,
                horizon=config["horizon"], seed=config["seed"],
                assertion_mode=config.get("assertion_mode", "record"),
                space_spec=config["space"])
    try:
        session.send({"type": "outcome", "outcome": trace.outcome,
                      "assertions": [a.to_json() for a in trace.assertions]})
    except ProtocolError:
        pass                    # game decided; client gone
    return trace


def serve(config: dict, host: str = "127.0.0.1", port: int = 0,
          once: bool = False, trace_path: Optional[str] = None,
          announce: Callable[[str], None] = print) -> None:
    """Listen and play one game per connection, sequentially.

    Every connection uses the same seed, so behavior is a pure function
    of the configuration.  With a trace path, each finished game
    overwrites the file (the last game wins).
    """

    class Handler(socketserver.StreamRequestHandler):
        def handle(self) -> None:
            try:
                trace = play_connection(Session(self.rfile, self.wfile),
                                        config)
            except ProtocolError:
                return              # client vanished mid-handshake
            if trace is not None and trace_path:
                trace.dump(trace_path)

    class Server(socketserver.TCPServer):
        allow_reuse_address = True

    with Server((host, port), Handler) as server:
        actual = server.server_address
        announce(f"listening on {actual[0]}:{actual[1]}")
        if once:
            server.handle_request()
        else:
            try:
                server.serve_forever()
            except KeyboardInterrupt:
                pass


def build_config(space_spec: str, variant: str, robber_spec: str,
                 n: int, horizon: int, seed: int,
                 assertion_mode: str = "record") -> dict:
    """Validate the run configuration up front so bad specs fail before
    the socket opens."""
    parse_space_spec(space_spec)
    make_robber_agent(robber_spec)
    if variant not in ("weak", "strong"):
        raise MalformedSpecError(f"unknown variant {variant!r}")
    if n < 1:
        raise MalformedSpecError(f"cop count must be >= 1, got {n}")
    return {"space": space_spec, "variant": variant, "robber": robber_spec,
            "n": n, "horizon": horizon, "seed": seed,
            "assertion_mode": assertion_mode}

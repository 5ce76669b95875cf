"""Lamplighter groups over the integer line, with block-bundled lamp values.

A vertex is ``(lamps, pos)``: ``pos`` is the walker position and ``lamps`` a
sorted tuple of ``(site, value)`` pairs with values in ``[1, q**j)`` (zero
entries are dropped, so equal group elements compare equal).  A lamp value
encodes a block of ``j`` dials with ``q`` settings each, little-endian.

One move traverses an edge ``(p, p+1)`` of the line and may rewrite the lamp
at the lower end ``p``: stepping right from ``p`` writes site ``p``, stepping
left onto ``p`` writes site ``p``.  Every value (including the current one)
can be written, so the graph is ``2 * q**j``-regular and there is no
stand-still move.
"""

from __future__ import annotations

from typing import Optional, Tuple

from ..errors import MalformedVertexError
from .base import Space

LampVertex = Tuple[tuple, int]


class LamplighterSpace(Space):

    def __init__(self, q: int, j: int = 1, use_closed_form: bool = True):
        if q < 2:
            raise MalformedVertexError("lamp dials need at least 2 settings")
        if j < 1:
            raise MalformedVertexError("block width must be at least 1")
        self.q = q
        self.j = j
        self.nstates = q ** j
        self.use_closed_form = use_closed_form
        self.kind = f"lamp:{q}" if j == 1 else f"lamp:{q}:{j}"

    @property
    def base(self) -> LampVertex:
        return ((), 0)

    # -- lamp helpers -------------------------------------------------

    @staticmethod
    def get_lamp(v: LampVertex, site: int) -> int:
        for s, x in v[0]:
            if s == site:
                return x
        return 0

    def set_lamp(self, v: LampVertex, site: int, val: int) -> LampVertex:
        if not 0 <= val < self.nstates:
            raise MalformedVertexError(f"lamp value {val} out of range")
        return (self._written(v[0], site, val), v[1])

    @staticmethod
    def _written(lamps: tuple, site: int, val: int) -> tuple:
        out = [(s, x) for s, x in lamps if s != site]
        if val:
            out.append((site, val))
            out.sort()
        return tuple(out)

    def value_coords(self, val: int) -> tuple:
        """Split a block value into its j dial settings, little-endian."""
        return tuple((val // self.q ** i) % self.q for i in range(self.j))

    def coords_value(self, coords) -> int:
        return sum((c % self.q) * self.q ** i for i, c in enumerate(coords))

    def lamp_add(self, x: int, y: int) -> int:
        if self.j == 1:
            return (x + y) % self.q
        out, mult = 0, 1
        for _ in range(self.j):
            out += ((x + y) % self.q) * mult
            x //= self.q
            y //= self.q
            mult *= self.q
        return out

    def lamp_neg(self, x: int) -> int:
        if self.j == 1:
            return (-x) % self.q
        out, mult = 0, 1
        for _ in range(self.j):
            out += ((-x) % self.q) * mult
            x //= self.q
            mult *= self.q
        return out

    # -- group structure ----------------------------------------------

    def mul(self, u: LampVertex, w: LampVertex) -> LampVertex:
        """Product: overlay w's lamps shifted by u's position, add positions."""
        lamps = dict(u[0])
        n = u[1]
        for s, x in w[0]:
            t = s + n
            val = self.lamp_add(lamps.get(t, 0), x)
            if val:
                lamps[t] = val
            else:
                lamps.pop(t, None)
        return (tuple(sorted(lamps.items())), n + w[1])

    def inv(self, u: LampVertex) -> LampVertex:
        n = u[1]
        lamps = tuple(sorted((s - n, self.lamp_neg(x)) for s, x in u[0]))
        return (lamps, -n)

    # -- Space interface ----------------------------------------------

    def neighbors(self, v: LampVertex) -> list:
        lamps, pos = v
        out = []
        for val in range(self.nstates):
            out.append((self._written(lamps, pos, val), pos + 1))
        for val in range(self.nstates):
            out.append((self._written(lamps, pos - 1, val), pos - 1))
        return out

    def to_obj(self, v: LampVertex):
        return {"lamps": [[s, x] for s, x in v[0]], "pos": v[1]}

    def from_obj(self, obj) -> LampVertex:
        if not isinstance(obj, dict) or set(obj) != {"lamps", "pos"}:
            raise MalformedVertexError(f"not a lamplighter vertex: {obj!r}")
        pos = obj["pos"]
        if not isinstance(pos, int) or isinstance(pos, bool):
            raise MalformedVertexError("pos must be an integer")
        raw = obj["lamps"]
        if not isinstance(raw, list):
            raise MalformedVertexError("lamps must be a list")
        entries = []
        prev_site = None
        for item in raw:
            if (not isinstance(item, list) or len(item) != 2 or
                    any(isinstance(x, bool) or not isinstance(x, int) for x in item)):
                raise MalformedVertexError(f"bad lamp entry: {item!r}")
            site, val = item
            if not 1 <= val < self.nstates:
                raise MalformedVertexError(f"lamp value {val} out of range")
            if prev_site is not None and site <= prev_site:
                raise MalformedVertexError("lamp sites must be strictly increasing")
            prev_site = site
            entries.append((site, val))
        return (tuple(entries), pos)

    # -- metric ---------------------------------------------------------

    def closed_form_distance(self, u: LampVertex, w: LampVertex) -> int:
        """Shortest walk covering every site whose lamp must change.

        A site can only be rewritten by traversing the edge just above it, so
        the walk must visit both ends of the interval spanned by the differing
        sites; sweeping that interval once rewrites everything en route.
        """
        n, m = u[1], w[1]
        here = dict(u[0])
        diff = [s for s, x in w[0] if here.get(s, 0) != x]
        if len(here) != len(w[0]) or len(diff) != 0:
            there = {s for s, _ in w[0]}
            diff += [s for s in here if s not in there]
        if not diff:
            return abs(n - m)
        lo = min(diff)
        hi = max(diff) + 1
        a = min(lo, n, m)
        b = max(hi, n, m)
        return (b - a) + min((n - a) + (b - m), (b - n) + (m - a))

    def distance(self, u: LampVertex, w: LampVertex,
                 cutoff: Optional[int] = None) -> Optional[int]:
        if not self.use_closed_form:
            return super().distance(u, w, cutoff)
        d = self.closed_form_distance(u, w)
        if cutoff is not None and d > cutoff:
            return None
        return d

    def distance_lower_bound(self, u: LampVertex, w: LampVertex) -> int:
        return self.closed_form_distance(u, w)

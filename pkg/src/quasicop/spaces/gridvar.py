"""Sublattice variant of the plane with long-range mixed steps.

Vertices are integer pairs (a, b) with a + b divisible by m.  Two
vertices are adjacent when their difference (x, y) satisfies
|x| + |y| = m and x + y in {-m, 0, m}.  Distance is exact BFS; no
closed form is assumed.
"""

from __future__ import annotations

from ..errors import MalformedVertexError
from .base import Space


def _step_offsets(m: int) -> list:
    offsets = []
    for x in range(-m, m + 1):
        for y in (m - abs(x), -(m - abs(x))):
            if abs(x) + abs(y) != m:
                continue
            if x + y not in (-m, 0, m):
                continue
            offsets.append((x, y))
    # dedupe (y = 0 appears twice above) and fix enumeration order
    return sorted(set(offsets))


class GridVariationSpace(Space):
    def __init__(self, m: int):
        if m < 1:
            raise MalformedVertexError("modulus must be >= 1")
        self.m = m
        self.kind = f"gridvar:{m}"
        self._offsets = _step_offsets(m)

    @property
    def base(self):
        return (0, 0)

    def neighbors(self, v) -> list:
        a, b = v
        return [(a + x, b + y) for x, y in self._offsets]

    def to_obj(self, v):
        return list(v)

    def from_obj(self, obj):
        if (not isinstance(obj, list) or len(obj) != 2
                or not all(isinstance(c, int) and not isinstance(c, bool)
                           for c in obj)):
            raise MalformedVertexError(f"not a gridvar vertex: {obj!r}")
        a, b = obj
        if (a + b) % self.m != 0:
            raise MalformedVertexError(
                f"({a},{b}) is not on the mod-{self.m} sublattice")
        return (a, b)

    def distance_lower_bound(self, u, w) -> int:
        # every step moves by taxicab length exactly m
        gap = abs(u[0] - w[0]) + abs(u[1] - w[1])
        return -(-gap // self.m) if gap else 0

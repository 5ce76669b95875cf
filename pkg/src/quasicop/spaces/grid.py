"""Integer lattices with the taxicab word metric, and the line."""

from __future__ import annotations

from typing import Optional

from ..errors import MalformedVertexError
from .base import Space


class GridSpace(Space):
    """Z^dim with unit steps along coordinate axes.

    Vertices are plain int tuples.  Distance has the exact coordinatewise
    closed form; a BFS-only mode exists so the closed form can be gated
    against the generic search in tests.
    """

    def __init__(self, dim: int, use_closed_form: bool = True):
        if dim < 1:
            raise MalformedVertexError("grid dimension must be >= 1")
        self.dim = dim
        self.kind = "line" if dim == 1 else f"grid:{dim}"
        self.use_closed_form = use_closed_form

    @property
    def base(self):
        return (0,) * self.dim

    def neighbors(self, v) -> list:
        out = []
        for i in range(self.dim):
            for step in (1, -1):
                w = list(v)
                w[i] += step
                out.append(tuple(w))
        return out

    def to_obj(self, v):
        return list(v)

    def from_obj(self, obj):
        if (not isinstance(obj, list) or len(obj) != self.dim
                or not all(isinstance(c, int) and not isinstance(c, bool)
                           for c in obj)):
            raise MalformedVertexError(f"not a {self.kind} vertex: {obj!r}")
        return tuple(obj)

    def distance(self, u, w, cutoff: Optional[int] = None) -> Optional[int]:
        if not self.use_closed_form:
            return self._bfs_distance(u, w, cutoff)
        d = sum(abs(a - b) for a, b in zip(u, w))
        if cutoff is not None and d > cutoff:
            return None
        return d

    def distance_lower_bound(self, u, w) -> int:
        return sum(abs(a - b) for a, b in zip(u, w))


def make_line() -> GridSpace:
    return GridSpace(1)

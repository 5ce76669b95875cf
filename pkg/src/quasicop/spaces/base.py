"""Space abstraction: lazily expandable infinite graphs with a word metric.

Every space exposes a deterministic neighbor enumeration, a canonical
vertex serialization (used for hashing, traces and tie-breaking), exact
distance queries with a cutoff, deterministic geodesics and ball
enumeration with a hard abort threshold.
"""

from __future__ import annotations

import json
from abc import ABC, abstractmethod
from typing import Any, Iterable, Optional

from ..errors import ExceedsCutoffError, ResourceLimitError

# Hard ceiling on ball enumeration, see ball().
BALL_VERTEX_LIMIT = 5_000_000


def dumps_canonical(obj: Any) -> str:
    """Compact, key-stable JSON used for all vertex serialization."""
    return json.dumps(obj, separators=(",", ":"), sort_keys=False)


class Space(ABC):
    """An infinite graph explored lazily through neighbor expansion."""

    kind: str = "?"

    @property
    @abstractmethod
    def base(self):
        """The distinguished base vertex (default treasure location)."""

    @abstractmethod
    def neighbors(self, v) -> list:
        """All neighbors of v in a fixed deterministic order."""

    @abstractmethod
    def to_obj(self, v) -> Any:
        """JSON-ready canonical payload for v."""

    @abstractmethod
    def from_obj(self, obj) -> Any:
        """Parse and validate a JSON payload back into a vertex.

        Raises MalformedVertexError on anything that does not denote a
        vertex of this space in canonical form.
        """

    def serialize(self, v) -> str:
        return dumps_canonical(self.to_obj(v))

    def parse(self, text: str):
        return self.from_obj(json.loads(text))

    def sort_key(self, v) -> str:
        """Deterministic total order on vertices (serialization order)."""
        return self.serialize(v)

    # -- metric ----------------------------------------------------------

    def distance(self, u, w, cutoff: Optional[int] = None) -> Optional[int]:
        """Exact graph distance, or None when it exceeds the cutoff."""
        return self._bfs_distance(u, w, cutoff)

    def distance_lower_bound(self, u, w) -> int:
        """Cheap provable lower bound on distance; 0 is always valid."""
        return 0 if u == w else 1

    def _bfs_distance(self, u, w, cutoff: Optional[int]) -> Optional[int]:
        """Bidirectional BFS with lazy expansion.

        With cutoff=None the search is unbounded; the frontier budget
        still applies so queries on infinite graphs cannot run away.
        """
        if u == w:
            return 0
        if cutoff is not None:
            if cutoff <= 0:
                return None
            lb = self.distance_lower_bound(u, w)
            if lb > cutoff:
                return None
        dist_u = {self._key(u): 0}
        dist_w = {self._key(w): 0}
        frontier_u = [u]
        frontier_w = [w]
        depth_u = depth_w = 0
        budget = BALL_VERTEX_LIMIT
        while frontier_u and frontier_w:
            if cutoff is not None and depth_u + depth_w >= cutoff:
                return None
            # expand the smaller frontier
            if len(frontier_u) <= len(frontier_w):
                frontier_u, depth_u, meet = self._expand(
                    frontier_u, dist_u, dist_w, depth_u)
            else:
                frontier_w, depth_w, meet = self._expand(
                    frontier_w, dist_w, dist_u, depth_w)
            if meet is not None:
                if cutoff is not None and meet > cutoff:
                    return None
                return meet
            budget -= len(frontier_u) + len(frontier_w)
            if budget <= 0:
                raise ResourceLimitError(
                    f"distance search exceeded {BALL_VERTEX_LIMIT} vertices")
        return None

    def _expand(self, frontier, dist_here, dist_there, depth):
        new_depth = depth + 1
        new_frontier = []
        best = None
        for v in frontier:
            for x in self.neighbors(v):
                kx = self._key(x)
                if kx in dist_here:
                    continue
                dist_here[kx] = new_depth
                other = dist_there.get(kx)
                if other is not None:
                    total = new_depth + other
                    if best is None or total < best:
                        best = total
                new_frontier.append(x)
        return new_frontier, new_depth, best

    def _key(self, v):
        # vertices are hashable in every concrete space
        return v

    # -- geodesics -------------------------------------------------------

    def geodesic(self, u, w, cutoff: Optional[int] = None) -> list:
        """One deterministic geodesic from u to w (inclusive).

        Among the shortest paths, each step picks the neighbor with the
        lexicographically smallest serialization among those that stay on
        a geodesic.  Raises ExceedsCutoffError when d(u,w) > cutoff.
        """
        d = self.distance(u, w, cutoff)
        if d is None:
            raise ExceedsCutoffError(f"no geodesic within cutoff {cutoff}")
        path = [u]
        cur = u
        remaining = d
        while remaining > 0:
            step = self.geodesic_step(cur, w, remaining)
            path.append(step)
            cur = step
            remaining -= 1
        return path

    def geodesic_step(self, cur, target, remaining: int):
        """The next vertex on the tie-broken geodesic toward target."""
        best = None
        best_key = None
        for x in self.neighbors(cur):
            if self.distance(x, target, remaining - 1) == remaining - 1:
                k = self.sort_key(x)
                if best_key is None or k < best_key:
                    best, best_key = x, k
        if best is None:
            raise ExceedsCutoffError("geodesic step lost the target")
        return best

    # -- balls -----------------------------------------------------------

    def ball(self, center, radius: int, limit: int = BALL_VERTEX_LIMIT) -> list:
        """All vertices within the given radius, in BFS discovery order."""
        return list(self.iter_ball(center, radius, limit))

    def iter_ball(self, center, radius: int,
                  limit: int = BALL_VERTEX_LIMIT) -> Iterable:
        seen = {self._key(center)}
        yield center
        frontier = [center]
        count = 1
        for _ in range(radius):
            nxt = []
            for v in frontier:
                for x in self.neighbors(v):
                    kx = self._key(x)
                    if kx in seen:
                        continue
                    seen.add(kx)
                    count += 1
                    if count > limit:
                        raise ResourceLimitError(
                            f"ball enumeration exceeded {limit} vertices")
                    nxt.append(x)
                    yield x
            if not nxt:
                return
            frontier = nxt

"""Regular trees presented as reduced words in a free group."""

from __future__ import annotations

import string
from typing import Optional

from ..errors import MalformedVertexError
from .base import Space


def _inverse(letter: str) -> str:
    return letter.lower() if letter.isupper() else letter.upper()


class FreeTreeSpace(Space):
    """Cayley graph of the free group of the given rank (a 2*rank-regular tree).

    Vertices are reduced words: generators are lowercase letters, formal
    inverses uppercase.  The empty word is the base.
    """

    def __init__(self, rank: int):
        if not 1 <= rank <= 26:
            raise MalformedVertexError("rank must be between 1 and 26")
        self.rank = rank
        self.kind = f"free-tree:{rank}"
        letters = string.ascii_lowercase[:rank]
        self._alphabet = list(letters) + [c.upper() for c in letters]
        self._alphabet.sort()

    @property
    def base(self):
        return ""

    def neighbors(self, v: str) -> list:
        out = []
        for g in self._alphabet:
            if v and v[-1] == _inverse(g):
                out.append(v[:-1])
            else:
                out.append(v + g)
        return out

    def to_obj(self, v):
        return v

    def from_obj(self, obj):
        if not isinstance(obj, str):
            raise MalformedVertexError(f"not a tree vertex: {obj!r}")
        for ch in obj:
            if ch not in self._alphabet:
                raise MalformedVertexError(f"unknown letter {ch!r}")
        for i in range(len(obj) - 1):
            if obj[i + 1] == _inverse(obj[i]):
                raise MalformedVertexError(f"word {obj!r} is not reduced")
        return obj

    def distance(self, u: str, w: str, cutoff: Optional[int] = None) -> Optional[int]:
        common = 0
        for a, b in zip(u, w):
            if a != b:
                break
            common += 1
        d = (len(u) - common) + (len(w) - common)
        if cutoff is not None and d > cutoff:
            return None
        return d

    def distance_lower_bound(self, u, w) -> int:
        return abs(len(u) - len(w))

    def geodesic(self, u: str, w: str, cutoff: Optional[int] = None) -> list:
        # unique geodesic: climb to the common prefix, then descend
        d = self.distance(u, w, cutoff)
        if d is None:
            from ..errors import ExceedsCutoffError
            raise ExceedsCutoffError(f"no geodesic within cutoff {cutoff}")
        common = 0
        for a, b in zip(u, w):
            if a != b:
                break
            common += 1
        path = [u]
        cur = u
        while len(cur) > common:
            cur = cur[:-1]
            path.append(cur)
        while len(cur) < len(w):
            cur = w[:len(cur) + 1]
            path.append(cur)
        return path

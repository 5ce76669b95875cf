"""Solvable one-relator groups acting on the line by affine maps x -> q + m^k x.

Vertices are stored canonically as ``(num, exp, k)`` for the translation part
``q = num / m**exp`` with ``exp >= 0`` and either ``exp == 0`` or ``m`` not
dividing ``num`` (and ``num == 0`` forces ``exp == 0``).  Generators: ``a``
adds ``m**k`` to ``q``; ``t`` increments ``k``.

Word distances here have no cheap closed form, so ``distance`` runs a
bidirectional search guarded by provable lower bounds; ``word_length_upper_bound``
gives a certified upper bound from an explicit word, which is what large-radius
ball membership checks rely on.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Optional, Tuple

from ..errors import MalformedVertexError
from .base import Space

BsVertex = Tuple[int, int, int]

_NUM_RE = re.compile(r"-?(0|[1-9][0-9]*)\Z")


class BsSpace(Space):

    def __init__(self, m: int):
        if m < 2:
            raise MalformedVertexError("the stretch factor m must be at least 2")
        self.m = m
        self.kind = f"bs:{m}"

    @property
    def base(self) -> BsVertex:
        return (0, 0, 0)

    # -- canonical form and group structure -----------------------------

    def _canon(self, num: int, exp: int) -> Tuple[int, int]:
        if num == 0:
            return (0, 0)
        if exp < 0:
            return (num * self.m ** (-exp), 0)
        while exp > 0 and num % self.m == 0:
            num //= self.m
            exp -= 1
        return (num, exp)

    def q_value(self, v: BsVertex) -> Fraction:
        return Fraction(v[0], self.m ** v[1])

    def from_q(self, q: Fraction, k: int) -> BsVertex:
        q = Fraction(q)
        den = q.denominator
        for exp in range(den.bit_length() + 1):
            scaled = self.m ** exp
            if scaled % den == 0:
                num, exp = self._canon(q.numerator * (scaled // den), exp)
                return (num, exp, k)
        raise MalformedVertexError(f"{q} has no power-of-{self.m} denominator")

    def mul(self, u: BsVertex, w: BsVertex) -> BsVertex:
        n1, e1, k1 = u
        n2, e2, k2 = w
        # q = n1/m^e1 + m^k1 * n2/m^e2
        e2k = e2 - k1
        e = max(e1, e2k, 0)
        num = n1 * self.m ** (e - e1) + n2 * self.m ** (e - e2k)
        num, e = self._canon(num, e)
        return (num, e, k1 + k2)

    def inv(self, u: BsVertex) -> BsVertex:
        num, exp, k = u
        num, exp = self._canon(-num, exp + k)
        return (num, exp, -k)

    # -- Space interface -------------------------------------------------

    def neighbors(self, v: BsVertex) -> list:
        num, exp, k = v
        out = []
        for sign in (1, -1):
            # a^sign: q += sign * m^k
            e = max(exp, -k)
            n2 = num * self.m ** (e - exp) + sign * self.m ** (k + e)
            n2, e = self._canon(n2, e)
            out.append((n2, e, k))
        out.append((num, exp, k + 1))
        out.append((num, exp, k - 1))
        return out

    def to_obj(self, v: BsVertex):
        return {"num": str(v[0]), "exp": v[1], "k": v[2]}

    def from_obj(self, obj) -> BsVertex:
        if not isinstance(obj, dict) or set(obj) != {"num", "exp", "k"}:
            raise MalformedVertexError(f"not a vertex of {self.kind}: {obj!r}")
        raw = obj["num"]
        if not isinstance(raw, str) or not _NUM_RE.match(raw) or raw == "-0":
            raise MalformedVertexError(f"num must be a canonical decimal string: {raw!r}")
        num = int(raw)
        exp, k = obj["exp"], obj["k"]
        for x in (exp, k):
            if not isinstance(x, int) or isinstance(x, bool):
                raise MalformedVertexError("exp and k must be integers")
        if exp < 0 or (exp > 0 and (num == 0 or num % self.m == 0)):
            raise MalformedVertexError(f"non-canonical m-adic pair ({num}, {exp})")
        return (num, exp, k)

    # -- metric -----------------------------------------------------------

    def distance_lower_bound(self, u: BsVertex, w: BsVertex) -> int:
        """Largest of three certified lower bounds on the word distance."""
        ku, kw = u[2], w[2]
        dq = self.q_value(w) - self.q_value(u)
        lb = abs(ku - kw)
        if dq == 0:
            return lb
        # valuation bound: some a-step must happen at height <= v(dq)
        val = self._valuation(dq)
        lb = max(lb, max(0, ku - val) + max(0, kw - val) + 1)
        # climb bound: a path peaking at height h needs (h-ku)+(h-kw) vertical
        # steps and at least |dq|/m^h generator steps a
        adq = abs(dq)
        h = max(ku, kw)
        best = None
        while True:
            mh = Fraction(self.m) ** h
            steps = (h - ku) + (h - kw) + self._ceil_frac(adq / mh)
            if best is None or steps < best:
                best = steps
            if mh >= adq:
                break
            h += 1
        return max(lb, best)

    def _valuation(self, q: Fraction) -> int:
        """Exponent of m in a nonzero m-adic rational."""
        num, den = q.numerator, q.denominator
        v = 0
        while den > 1:
            den //= self.m
            v -= 1
        while num % self.m == 0:
            num //= self.m
            v += 1
        return v

    @staticmethod
    def _ceil_frac(q: Fraction) -> int:
        return -((-q.numerator) // q.denominator)

    def word_length_upper_bound(self, u: BsVertex, w: BsVertex) -> int:
        """Length of an explicit word from u to w (base-m digit walk)."""
        num, exp, k = self.mul(self.inv(u), w)
        if num == 0:
            return abs(k)
        digits = []
        x = abs(num)
        while x:
            digits.append(x % self.m)
            x //= self.m
        climbs = len(digits) - 1
        return exp + sum(digits) + climbs + abs(k + exp - climbs)

    def distance(self, u: BsVertex, w: BsVertex,
                 cutoff: Optional[int] = None) -> Optional[int]:
        return self._bfs_distance(u, w, cutoff)

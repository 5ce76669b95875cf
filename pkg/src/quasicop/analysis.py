"""Geometry toolkit: bigon width scanning, exact-width bigon and
bottleneck witnesses, and the horizontal-reach function on the solvable
affine groups.

Widths use the synchronized parameterization d(gamma(t), gamma'(t)) over
two geodesics with common endpoints; both have the same edge count, so no
reparameterization is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import ResourceLimitError, StrategyUnavailableError
from .spaces.base import Space
from .spaces.bs import BsSpace
from .spaces.grid import GridSpace

PAIR_LIMIT = 5_000_000


class DistCache:
    """Memoized exact distances keyed on serialized endpoints."""

    def __init__(self, space: Space):
        self.space = space
        self._cache: dict = {}

    def __call__(self, u, w) -> int:
        ku, kw = self.space._key(u), self.space._key(w)
        if kw < ku:
            ku, kw = kw, ku
        hit = self._cache.get((ku, kw))
        if hit is None:
            hit = self.space.distance(u, w)
            self._cache[(ku, kw)] = hit
        return hit


def geodesic_layers(space: Space, u, w, d: Optional[int] = None) -> list:
    """Layer t holds every vertex at distance t from u lying on some
    geodesic from u to w (so layer diameters bound all bigon widths)."""
    if d is None:
        d = space.distance(u, w)
    layers = [[u]]
    seen = {space._key(u)}
    for t in range(1, d + 1):
        rem = d - t
        nxt = []
        for v in layers[-1]:
            for nb in space.neighbors(v):
                k = space._key(nb)
                if k in seen:
                    continue
                if space.distance(nb, w, cutoff=rem) == rem:
                    seen.add(k)
                    nxt.append(nb)
        layers.append(nxt)
    return layers


@dataclass
class BigonWitness:
    gamma: list
    gamma_prime: list
    delta: int
    t: int
    eta_minus: list = field(default_factory=list)
    eta_plus: list = field(default_factory=list)

    def validate(self, space: Space) -> "BigonWitness":
        ell = len(self.gamma) - 1
        if len(self.gamma_prime) - 1 != ell:
            raise ValueError("bigon paths must have equal length")
        if self.gamma[0] != self.gamma_prime[0] or \
                self.gamma[-1] != self.gamma_prime[-1]:
            raise ValueError("bigon paths must share both endpoints")
        for path in (self.gamma, self.gamma_prime):
            for a, b in zip(path, path[1:]):
                if b not in space.neighbors(a):
                    raise ValueError("bigon path has a non-edge step")
            if space.distance(path[0], path[-1]) != ell:
                raise ValueError("bigon path is not geodesic")
        widths = [space.distance(a, b)
                  for a, b in zip(self.gamma, self.gamma_prime)]
        if max(widths) != self.delta:
            raise ValueError(f"bigon width {max(widths)} != declared "
                             f"{self.delta}")
        if widths[self.t] != self.delta:
            raise ValueError("declared t does not attain the width")
        if not self.eta_minus:
            self.eta_minus = (self.gamma[self.t::-1]
                              + self.gamma_prime[1:self.t + 1])
        if not self.eta_plus:
            self.eta_plus = (self.gamma[self.t:]
                             + self.gamma_prime[-2:self.t - 1 if self.t else None:-1])
        for eta in (self.eta_minus, self.eta_plus):
            if eta[0] != self.gamma[self.t] or \
                    eta[-1] != self.gamma_prime[self.t]:
                raise ValueError("detour endpoints must be the two anchors")
            for a, b in zip(eta, eta[1:]):
                if b not in space.neighbors(a):
                    raise ValueError("detour has a non-edge step")
        return self


@dataclass
class BottleneckWitness:
    x: object
    y: object
    z: object
    gamma: list
    eta_minus: list
    eta_plus: list
    lambda_bound: int

    def validate(self, space: Space) -> "BottleneckWitness":
        dxy = space.distance(self.x, self.y)
        dyz = space.distance(self.y, self.z)
        dxz = space.distance(self.x, self.z)
        if not (dxy == dyz == dxz - dyz):
            raise ValueError("y must be a metric midpoint of x, z")
        if self.gamma[0] != self.x or self.gamma[-1] != self.z:
            raise ValueError("detour path must run x to z")
        for a, b in zip(self.gamma, self.gamma[1:]):
            if b not in space.neighbors(a):
                raise ValueError("detour path has a non-edge step")
        clearance = min(space.distance(self.y, v) for v in self.gamma)
        if clearance <= 6 * self.lambda_bound:
            raise ValueError(
                f"path clearance {clearance} <= 6*{self.lambda_bound}")
        if self.eta_minus[0] != self.x or self.eta_minus[-1] != self.y:
            raise ValueError("eta_minus must run x to y")
        if self.eta_plus[0] != self.y or self.eta_plus[-1] != self.z:
            raise ValueError("eta_plus must run y to z")
        for eta, dd in ((self.eta_minus, dxy), (self.eta_plus, dyz)):
            if len(eta) - 1 != dd:
                raise ValueError("eta halves must be geodesic")
            for a, b in zip(eta, eta[1:]):
                if b not in space.neighbors(a):
                    raise ValueError("eta half has a non-edge step")
        return self


def bigon_thinness_scan(space: Space, radius: int
                        ) -> tuple[int, Optional[BigonWitness]]:
    """Exact max synchronized width over all bigons with endpoints in the
    radius ball around the base, plus a witness attaining it.

    Layer diameters within each endpoint pair give the exact pairwise
    maximum: any vertex at distance t from one endpoint and d-t from the
    other lies on a geodesic, and two such vertices come from two
    independently chosen geodesics.
    """
    ball = space.ball(space.base, radius)
    if len(ball) * (len(ball) - 1) // 2 > PAIR_LIMIT:
        raise ResourceLimitError(
            f"{len(ball)} ball vertices make too many endpoint pairs")
    dist = DistCache(space)
    pairs = []
    for i, u in enumerate(ball):
        for w in ball[i + 1:]:
            pairs.append((dist(u, w), i, u, w))
    pairs.sort(key=lambda r: -r[0])

    max_width = 0
    best = None          # (u, w, t, a, b)
    for d, _, u, w in pairs:
        if d <= max_width:
            break        # widths never exceed the endpoint distance
        layers = geodesic_layers(space, u, w, d)
        for t, layer in enumerate(layers):
            if len(layer) < 2:
                continue
            for ai, a in enumerate(layer):
                for b in layer[ai + 1:]:
                    wd = dist(a, b)
                    if wd > max_width:
                        max_width = wd
                        best = (u, w, t, a, b)
    if best is None:
        return 0, None
    u, w, t, a, b = best
    gamma = space.geodesic(u, a) + space.geodesic(a, w)[1:]
    gamma_prime = space.geodesic(u, b) + space.geodesic(b, w)[1:]
    witness = BigonWitness(gamma=gamma, gamma_prime=gamma_prime,
                           delta=max_width, t=t).validate(space)
    return max_width, witness


def _staircase_bigon(space: GridSpace, half: int) -> BigonWitness:
    """Width-2*half bigon between (0,0) and (half,half): one geodesic walks
    the x side first, the other the y side, meeting width 2t at step t."""
    L = half
    gamma = [(min(t, L), max(0, t - L)) for t in range(2 * L + 1)]
    gamma_prime = [(max(0, t - L), min(t, L)) for t in range(2 * L + 1)]
    return BigonWitness(gamma=gamma, gamma_prime=gamma_prime, delta=2 * L,
                        t=L).validate(space)


def find_bigon_exact_width(space: Space, delta: int) -> BigonWitness:
    """A bigon of synchronized width exactly delta.

    Analytic on the plane grid (even widths only: staircase widths are 2t,
    so odd deltas are a parity obstruction and the caller bumps by one).
    Elsewhere a bounded scan is attempted and honest unavailability is
    reported (trees admit only width 0).
    """
    if delta < 1:
        raise ValueError("delta must be >= 1")
    if isinstance(space, GridSpace) and space.dim == 2:
        if delta % 2 == 1:
            raise StrategyUnavailableError(
                f"no width-{delta} bigon on the plane grid: staircase "
                f"widths are even (parity)")
        return _staircase_bigon(space, delta // 2)
    width, witness = bigon_thinness_scan(space, min(delta, 8))
    if witness is not None and width == delta:
        return witness
    raise StrategyUnavailableError(
        f"no width-{delta} bigon found (scan reached width {width})")


def bottleneck_witness(space: Space, lam: int) -> BottleneckWitness:
    """A midpoint y of x, z plus an x-to-z path clearing 6*lam around y.

    Analytic on the plane grid: x=(-L,0), y=(0,0), z=(L,0) with L = 6*lam+1
    and a three-sided rectangle detour of height L.  Generic fallback: BFS
    from x to z avoiding the closed 6*lam ball around the base; spaces with
    the bottleneck property (trees) honestly fail.
    """
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    L = 6 * lam + 1
    if isinstance(space, GridSpace) and space.dim == 2:
        x, y, z = (-L, 0), (0, 0), (L, 0)
        up = [(-L, h) for h in range(L + 1)]
        across = [(c, L) for c in range(-L + 1, L + 1)]
        down = [(L, L - h) for h in range(1, L + 1)]
        gamma = up + across + down
        eta_minus = [(c, 0) for c in range(-L, 1)]
        eta_plus = [(c, 0) for c in range(0, L + 1)]
        return BottleneckWitness(x=x, y=y, z=z, gamma=gamma,
                                 eta_minus=eta_minus, eta_plus=eta_plus,
                                 lambda_bound=lam).validate(space)

    y = space.base
    sphere = [v for v in space.ball(y, L) if space.distance(y, v) == L]
    best = None
    for i, x in enumerate(sphere):
        for z in sphere[i + 1:]:
            if space.distance(x, z) == 2 * L:
                best = (x, z)
                break
        if best:
            break
    if best is None:
        raise StrategyUnavailableError(
            f"no diametral pair at distance {2 * L} around the base")
    x, z = best
    gamma = _avoidance_path(space, x, z, y, 6 * lam, L)
    if gamma is None:
        raise StrategyUnavailableError(
            f"every path from x to z meets the {6 * lam} ball around y "
            f"(bottleneck holds here)")
    return BottleneckWitness(
        x=x, y=y, z=z, gamma=gamma,
        eta_minus=space.geodesic(x, y), eta_plus=space.geodesic(y, z),
        lambda_bound=lam).validate(space)


def _avoidance_path(space: Space, x, z, center, clearance: int,
                    search: int) -> Optional[list]:
    """BFS path x to z through vertices at distance > clearance from
    center, exploring at most distance clearance + 2*search from center."""
    horizon = clearance + 2 * search + 2
    if space.distance(center, x) <= clearance or \
            space.distance(center, z) <= clearance:
        return None
    parents = {space._key(x): None}
    frontier = [x]
    kz = space._key(z)
    while frontier and kz not in parents:
        nxt = []
        for v in frontier:
            for nb in space.neighbors(v):
                k = space._key(nb)
                if k in parents:
                    continue
                dc = space.distance(center, nb, cutoff=horizon)
                if dc is not None and dc <= clearance:
                    continue
                if dc is None:
                    continue     # stay inside the bounded search region
                parents[k] = v
                nxt.append(nb)
        frontier = nxt
    if kz not in parents:
        return None
    path = [z]
    while path[-1] != x:
        path.append(parents[space._key(path[-1])])
    path.reverse()
    return path


def hd(space: BsSpace, height: int, reach: int) -> Fraction:
    """Max horizontal displacement (axis-projected offset) over all
    elements within `reach` of a pure height-h element, h in [0, height].

    Exact rational; callers compare against powers of the base exactly.
    """
    if not isinstance(space, BsSpace):
        raise ValueError("hd is defined on the affine spaces only")
    if height < 0 or reach < 0:
        raise ValueError("height and reach must be >= 0")
    best = Fraction(0)
    for h in range(height + 1):
        center = (0, 0, h)
        for v in space.iter_ball(center, reach):
            q = abs(space.q_value(v))
            if q > best:
                best = q
    return best

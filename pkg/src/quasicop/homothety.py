"""Scaling families between model spaces and a target, with exact audits.

A scaling family embeds an indexed sequence of model spaces into one
target space so that distances multiply by a controlled factor: model
distance d maps into the band [scale*(d/A - B), scale*(A*d + B)].  Two
instances ship.  Grid dilation multiplies plane coordinates by the
scale and is an exact homothety (A=1, B=0).  Lamplighter block grouping
reads j consecutive dials of the one-dial street as a single j-wide
dial (A=1, B=2).  A brute-force quasi-inverse builder recovers a
projection from an embedding alone, and ``verify_family`` samples every
claimed bound with exact rational arithmetic, reporting violations as
data with witnesses rather than raising.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from . import lampcore
from .errors import MalformedSpecError, ResourceLimitError
from .spaces.base import Space
from .spaces.grid import GridSpace
from .spaces.lamplighter import LamplighterSpace


class QuasiHomothetyFamily:
    """An indexed family of scale embeddings iota and projections pi.

    ``deltas[j]`` is the j-th model space, embedded in ``gamma`` by
    ``iota(j, x)`` with scale ``rhos[j]``; ``pi(j, x)`` projects back.
    ``kernel_band``, when set, computes the exhaustive image-band gap
    histogram for index j much faster than the generic pair loop.
    """

    def __init__(self, name: str, gamma: Space, deltas: Mapping[int, Space],
                 rhos: Mapping[int, int], a, b,
                 iota: Callable[[int, object], object],
                 pi: Optional[Callable[[int, object], object]] = None,
                 kernel_band: Optional[Callable[[int, int], tuple]] = None,
                 image_test: Optional[Callable[[int, object], bool]] = None):
        self.name = name
        self.gamma = gamma
        self.deltas = dict(deltas)
        self.rhos = {j: int(r) for j, r in rhos.items()}
        self.js = tuple(sorted(self.deltas))
        if not self.js or set(self.rhos) != set(self.js):
            raise MalformedSpecError("family needs matching model and scale "
                                     "indices")
        scales = [self.rhos[j] for j in self.js]
        if scales[0] < 1 or any(x >= y for x, y in zip(scales, scales[1:])):
            raise MalformedSpecError(
                f"scales must be strictly increasing positive, got {scales}")
        self.A = Fraction(a)
        self.B = Fraction(b)
        if self.A < 1 or self.B < 0:
            raise MalformedSpecError("need A >= 1 and B >= 0")
        self.iota = iota
        self.pi = pi
        self.kernel_band = kernel_band
        self.image_test = image_test


def z2_scaling_family(rhos: Sequence[int]) -> QuasiHomothetyFamily:
    """Plane dilations by each given scale; exact, so A=1 and B=0."""
    scales = tuple(int(r) for r in rhos)
    plane = GridSpace(2)

    def iota(j, x):
        return (j * x[0], j * x[1])

    def pi(j, x):
        return (_nearest_multiple(x[0], j), _nearest_multiple(x[1], j))

    def image_test(j, x):
        return x[0] % j == 0 and x[1] % j == 0

    return QuasiHomothetyFamily(
        "z2", plane, {j: plane for j in scales},
        {j: j for j in scales}, 1, 0, iota, pi, image_test=image_test)


def _nearest_multiple(x: int, r: int) -> int:
    """Index of the multiple of r nearest to x; halves round down."""
    return (2 * x + r - 1) // (2 * r)


def lamplighter_family(q: int, js: Sequence[int] = (2, 3)
                       ) -> QuasiHomothetyFamily:
    """Block grouping: j dials of the q-state street become one wide dial.

    The j-wide dial value at model site k unpacks, base q, into target
    dial values at sites j*k .. j*k+j-1; positions stretch by j.  The
    projection regroups target sites by floor division and cannot be off
    by more than the walker's position remainder, giving A=1, B=2.
    """
    if q < 2:
        raise MalformedSpecError("the dial group must be nontrivial")
    order = tuple(sorted(set(int(j) for j in js)))
    if not order or order[0] < 1:
        raise MalformedSpecError(f"bad block widths {js!r}")
    line = LamplighterSpace(q)

    def iota(j, v):
        lamps, pos = v
        out = []
        for site, val in lamps:
            for i in range(j):
                digit = (val // q ** i) % q
                if digit:
                    out.append((j * site + i, digit))
        return (tuple(out), j * pos)

    def pi(j, v):
        lamps, pos = v
        blocks: dict = {}
        for site, val in lamps:
            k, i = divmod(site, j)
            blocks[k] = blocks.get(k, 0) + val * q ** i
        return (tuple(sorted(blocks.items())), pos // j)

    kernel = None
    if q == 2:
        def kernel(j, radius):
            return lampcore.band_pair_sweep(j, radius)

    def image_test(j, v):
        return v[1] % j == 0

    return QuasiHomothetyFamily(
        f"lamplighter:{q}", line, {j: LamplighterSpace(q, j) for j in order},
        {j: j for j in order}, 1, 2, iota, pi, kernel_band=kernel,
        image_test=image_test)


def generic_quasi_inverse(family: QuasiHomothetyFamily, search_radius: int,
                          seeds: Optional[Callable] = None) -> Callable:
    """Projection built by search: scan the model ball around a seed
    guess for the point whose image lands nearest the target, preferring
    exact preimages, breaking ties by serialization order."""
    def pi(j, x):
        delta = family.deltas[j]
        seed = seeds(j, x) if seeds else delta.base
        best_key = None
        best = None
        for c in delta.ball(seed, search_radius):
            d = family.gamma.distance(family.iota(j, c), x)
            key = (d, delta.sort_key(c))
            if best_key is None or key < best_key:
                best_key, best = key, c
        return best
    return pi


# -- verification -------------------------------------------------------

@dataclass(frozen=True)
class SampleSpec:
    """How hard to sample: exhaustive balls when small, seeded walks else."""
    radius: int = 5
    exhaustive_limit: int = 20_000
    pair_count: int = 10_000
    walk_radius: int = 8
    seed: int = 0
    witness_cap: int = 5
    js: Optional[tuple] = None


@dataclass
class InequalityReport:
    name: str
    j: int
    checked: int
    worst_slack: Optional[Fraction]
    violation_count: int
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "j": self.j,
            "checked": self.checked,
            "worstSlack": (None if self.worst_slack is None
                           else str(self.worst_slack)),
            "violationCount": self.violation_count,
            "violations": self.violations,
        }


@dataclass
class VerificationReport:
    family: str
    a: Fraction
    b: Fraction
    js: tuple
    sampling: dict
    inequalities: list

    @property
    def violation_count(self) -> int:
        return sum(r.violation_count for r in self.inequalities)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "A": str(self.a),
            "B": str(self.b),
            "js": list(self.js),
            "sampling": self.sampling,
            "violationCount": self.violation_count,
            "inequalities": [r.to_json() for r in self.inequalities],
        }


def _sample_vertices(space: Space, spec: SampleSpec) -> tuple[list, str]:
    """Radius ball if it fits the exhaustive budget, else walk endpoints."""
    try:
        return (space.ball(space.base, spec.radius,
                           limit=spec.exhaustive_limit), "exhaustive")
    except ResourceLimitError:
        rng = random.Random(spec.seed)
        out = []
        for _ in range(2 * spec.pair_count):
            v = space.base
            for _ in range(rng.randint(0, spec.walk_radius)):
                nbrs = space.neighbors(v)
                v = nbrs[rng.randrange(len(nbrs))]
            out.append(v)
        return out, "walks"


def _pairs(sample: list, mode: str, spec: SampleSpec):
    if mode == "exhaustive":
        for i, x in enumerate(sample):
            for y in sample[i + 1:]:
                yield x, y
    else:
        half = len(sample) // 2
        for x, y in zip(sample[:half], sample[half:]):
            yield x, y


class _Tally:
    """Folds (slack, witness) streams into one report row."""

    def __init__(self, name: str, j: int, cap: int):
        self.report = InequalityReport(name, j, 0, None, 0)
        self.cap = cap

    def add(self, slack: Fraction, witness: Callable[[], dict]) -> None:
        r = self.report
        r.checked += 1
        if r.worst_slack is None or slack < r.worst_slack:
            r.worst_slack = slack
        if slack < 0:
            r.violation_count += 1
            if len(r.violations) < self.cap:
                r.violations.append(witness())


def band_gap_histogram(family: QuasiHomothetyFamily, j: int, radius: int,
                       exhaustive_limit: int = 20_000) -> tuple[int, int, dict]:
    """(ball, pairs, {gap: count}) with gap = d_target(images) - scale*d.

    Exhaustive over the radius ball of the j-th model space; uses the
    family's kernel when it has one, else a generic pair loop (which is
    only viable for small balls and is budget-capped accordingly).
    """
    if family.kernel_band is not None:
        return family.kernel_band(j, radius)
    delta = family.deltas[j]
    scale = family.rhos[j]
    ball = delta.ball(delta.base, radius, limit=exhaustive_limit)
    images = [family.iota(j, v) for v in ball]
    hist: dict = {}
    pairs = 0
    for i, x in enumerate(ball):
        for k in range(i, len(ball)):
            gap = (family.gamma.distance(images[i], images[k])
                   - scale * delta.distance(x, ball[k]))
            hist[gap] = hist.get(gap, 0) + 1
            pairs += 1
    return len(ball), pairs, hist


def _kernel_band_witnesses(family: QuasiHomothetyFamily, j: int,
                           spec: SampleSpec, tally: _Tally,
                           budget: int = 500_000) -> None:
    """Recover concrete violating pairs after a kernel histogram sweep.

    The kernel reports counts only; this decodes the same ball and
    rescans pairs with the space closed forms until enough witnesses are
    in hand.  Violations are dense when present, so the budget is ample.
    """
    codes, _, lo, width, plo = lampcore.ball_table(j, spec.radius)
    verts = [lampcore.decode_vertex(int(c), j, lo, width, plo)
             for c in codes]
    delta = family.deltas[j]
    scale = family.rhos[j]
    a, b = family.A, family.B
    scanned = 0
    for i, x in enumerate(verts):
        ix = family.iota(j, x)
        for y in verts[i:]:
            if len(tally.report.violations) >= tally.cap or scanned >= budget:
                return
            scanned += 1
            d = delta.distance(x, y)
            mid = Fraction(family.gamma.distance(ix, family.iota(j, y)),
                           scale)
            lhs, rhs = d / a - b, a * d + b
            if mid < lhs or mid > rhs:
                tally.report.violations.append({
                    "x": delta.to_obj(x), "y": delta.to_obj(y),
                    "lhs": str(lhs), "mid": str(mid), "rhs": str(rhs)})


def verify_family(family: QuasiHomothetyFamily,
                  spec: SampleSpec = SampleSpec()) -> VerificationReport:
    """Sample all five bound families; violations are data, not errors.

    Rows per index j: the embedding is near-onto ("surjective-defect",
    also recorded as "projection-defect" since the projection supplies
    the witness), image distances stay in the scale band ("image-band"),
    projected distances stay in the widened band ("projected-band"), and
    projecting an embedded point moves it at most A*B ("roundtrip-defect").
    Families with an ``image_test`` get an "image-membership" row: the
    claimed membership predicate must agree with the round trip fixing x.
    """
    js = tuple(spec.js) if spec.js else family.js
    a, b = family.A, family.B
    wide = 2 * a + 3 * b
    rows: list[InequalityReport] = []
    sampling: dict = {"radius": spec.radius,
                      "exhaustiveLimit": spec.exhaustive_limit,
                      "pairCount": spec.pair_count,
                      "walkRadius": spec.walk_radius,
                      "seed": spec.seed, "modes": {}}

    gamma_sample, gamma_mode = _sample_vertices(family.gamma, spec)
    sampling["modes"]["gamma"] = gamma_mode

    for j in js:
        delta = family.deltas[j]
        scale = family.rhos[j]
        onto = _Tally("surjective-defect", j, spec.witness_cap)
        onto2 = _Tally("projection-defect", j, spec.witness_cap)
        roundtrip = _Tally("roundtrip-defect", j, spec.witness_cap)
        pband = _Tally("projected-band", j, spec.witness_cap)
        iband = _Tally("image-band", j, spec.witness_cap)
        member = _Tally("image-membership", j, spec.witness_cap)

        if family.pi is not None:
            for x in gamma_sample:
                xbar = family.pi(j, x)
                back = family.iota(j, xbar)
                defect = Fraction(family.gamma.distance(back, x))
                slack = a * scale + b - defect
                witness = (lambda x=x, defect=defect:
                           {"x": family.gamma.to_obj(x), "lhs": str(defect),
                            "rhs": str(a * scale + b)})
                onto.add(slack, witness)
                onto2.add(slack, witness)
                if family.image_test is not None:
                    claimed = family.image_test(j, x)
                    # round trip fixes x exactly when x is an image point
                    fixed = back == x
                    member.add(Fraction(0 if claimed == fixed else -1),
                               lambda x=x, claimed=claimed, fixed=fixed:
                               {"x": family.gamma.to_obj(x),
                                "lhs": str(fixed), "rhs": str(claimed)})

            for x, y in _pairs(gamma_sample, gamma_mode, spec):
                mid = Fraction(family.gamma.distance(x, y), scale)
                d = delta.distance(family.pi(j, x), family.pi(j, y))
                lhs, rhs = d / a - wide, a * d + wide
                pband.add(min(mid - lhs, rhs - mid),
                          lambda x=x, y=y, lhs=lhs, mid=mid, rhs=rhs: {
                              "x": family.gamma.to_obj(x),
                              "y": family.gamma.to_obj(y),
                              "lhs": str(lhs), "mid": str(mid),
                              "rhs": str(rhs)})

        delta_sample, delta_mode = _sample_vertices(delta, spec)
        sampling["modes"][f"delta:{j}"] = delta_mode
        if family.pi is not None:
            for xbar in delta_sample:
                back = family.pi(j, family.iota(j, xbar))
                moved = Fraction(delta.distance(xbar, back))
                roundtrip.add(a * b - moved,
                              lambda xbar=xbar, moved=moved:
                              {"x": delta.to_obj(xbar), "lhs": str(moved),
                               "rhs": str(a * b)})

        if delta_mode == "exhaustive" or family.kernel_band is not None:
            nball, pairs, hist = band_gap_histogram(
                family, j, spec.radius, spec.exhaustive_limit)
            iband.report.checked = pairs
            for gap, count in hist.items():
                slack = min(Fraction(gap, scale) + b, b - Fraction(gap, scale))
                if (iband.report.worst_slack is None
                        or slack < iband.report.worst_slack):
                    iband.report.worst_slack = slack
                if slack < 0:
                    iband.report.violation_count += count
            if iband.report.violation_count and family.kernel_band is not None:
                _kernel_band_witnesses(family, j, spec, iband)
            elif iband.report.violation_count:
                _generic_band_witnesses(family, j, spec, iband)
            sampling["modes"][f"band:{j}"] = "exhaustive"
        else:
            for xbar, ybar in _pairs(delta_sample, delta_mode, spec):
                d = delta.distance(xbar, ybar)
                mid = Fraction(family.gamma.distance(
                    family.iota(j, xbar), family.iota(j, ybar)), scale)
                lhs, rhs = d / a - b, a * d + b
                iband.add(min(mid - lhs, rhs - mid),
                          lambda xbar=xbar, ybar=ybar, lhs=lhs, mid=mid,
                          rhs=rhs: {
                              "x": delta.to_obj(xbar),
                              "y": delta.to_obj(ybar),
                              "lhs": str(lhs), "mid": str(mid),
                              "rhs": str(rhs)})
            sampling["modes"][f"band:{j}"] = delta_mode

        rows.extend([onto.report, iband.report, pband.report,
                     onto2.report, roundtrip.report])
        if family.pi is not None and family.image_test is not None:
            rows.append(member.report)

    return VerificationReport(family.name, a, b, js, sampling, rows)


def _generic_band_witnesses(family: QuasiHomothetyFamily, j: int,
                            spec: SampleSpec, tally: _Tally) -> None:
    delta = family.deltas[j]
    scale = family.rhos[j]
    a, b = family.A, family.B
    ball = delta.ball(delta.base, spec.radius, limit=spec.exhaustive_limit)
    for i, x in enumerate(ball):
        for y in ball[i:]:
            if len(tally.report.violations) >= tally.cap:
                return
            d = delta.distance(x, y)
            mid = Fraction(family.gamma.distance(
                family.iota(j, x), family.iota(j, y)), scale)
            lhs, rhs = d / a - b, a * d + b
            if mid < lhs or mid > rhs:
                tally.report.violations.append({
                    "x": delta.to_obj(x), "y": delta.to_obj(y),
                    "lhs": str(lhs), "mid": str(mid), "rhs": str(rhs)})

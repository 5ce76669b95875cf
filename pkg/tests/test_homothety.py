from fractions import Fraction

import pytest

from quasicop.errors import MalformedSpecError
from quasicop.homothety import (QuasiHomothetyFamily, SampleSpec,
                                band_gap_histogram, lamplighter_family,
                                verify_family, z2_scaling_family)

QUICK = SampleSpec(radius=3, pair_count=400, walk_radius=4, seed=1)

ROW_NAMES = {"surjective-defect", "projection-defect", "roundtrip-defect",
             "projected-band", "image-band", "image-membership"}


def rows_by_name(report, name):
    return [r for r in report.inequalities if r.name == name]


# -- plane dilations -----------------------------------------------------------

def test_z2_family_shape():
    fam = z2_scaling_family((2, 4, 8))
    assert fam.js == (2, 4, 8)
    assert fam.rhos == {2: 2, 4: 4, 8: 8}
    assert (fam.A, fam.B) == (1, 0)
    assert fam.iota(4, (2, -1)) == (8, -4)
    assert fam.pi(4, (8, -4)) == (2, -1)
    assert fam.image_test(4, (8, -4)) and not fam.image_test(4, (9, -4))


def test_z2_verifies_clean():
    report = verify_family(z2_scaling_family((2, 4, 8)), QUICK)
    assert report.ok and report.violation_count == 0
    assert {r.name for r in report.inequalities} == ROW_NAMES
    assert {r.j for r in report.inequalities} == {2, 4, 8}


def test_z2_band_is_exact_equality():
    fam = z2_scaling_family((3,))
    ball, pairs, hist = band_gap_histogram(fam, 3, 3)
    # dilations preserve distance exactly after scaling: every gap is zero
    assert set(hist) == {0}
    assert hist[0] == pairs == ball * (ball + 1) // 2


def test_projection_rounds_to_nearest_multiple():
    fam = z2_scaling_family((4,))
    assert fam.pi(4, (5, -5)) == (1, -1)
    assert fam.pi(4, (2, 2)) == (0, 0)     # halves round down
    assert fam.pi(4, (3, 7)) == (1, 2)
    assert fam.pi(4, (1, -1)) == (0, 0)


# -- lamplighter block grouping ---------------------------------------------------

def test_lamplighter_family_shape():
    fam = lamplighter_family(2)
    assert fam.js == (2, 3)
    assert (fam.A, fam.B) == (1, 2)
    # one wide dial with value 3 unpacks to two unit dials
    assert fam.iota(2, (((0, 3),), 1)) == (((0, 1), (1, 1)), 2)
    assert fam.pi(2, (((0, 1), (1, 1)), 2)) == (((0, 3),), 1)
    assert fam.kernel_band is not None
    assert lamplighter_family(3).kernel_band is None


def test_lamplighter_j2_verifies_clean():
    report = verify_family(lamplighter_family(2, js=(2,)), QUICK)
    assert report.violation_count == 0


def test_lamplighter_j3_band_fails_honestly():
    # the block embedding genuinely leaves the declared band at j=3
    report = verify_family(lamplighter_family(2, js=(3,)),
                           SampleSpec(radius=4, pair_count=400, walk_radius=4))
    bad = rows_by_name(report, "image-band")
    assert len(bad) == 1 and bad[0].j == 3
    assert bad[0].violation_count == 22880
    assert bad[0].worst_slack == Fraction(-2, 3)
    assert len(bad[0].violations) == 5      # witnesses capped, not dropped
    for name in ROW_NAMES - {"image-band"}:
        assert all(r.violation_count == 0 for r in rows_by_name(report, name))


def test_widened_band_absorbs_the_j3_deficit():
    # the same embedding with the slack constant 4 has no violations at all
    base = lamplighter_family(2)
    fixed = QuasiHomothetyFamily(
        "lamplighter:2+slack", base.gamma, base.deltas, base.rhos, 1, 4,
        base.iota, base.pi, kernel_band=base.kernel_band,
        image_test=base.image_test)
    report = verify_family(fixed, SampleSpec(radius=4, pair_count=400,
                                             walk_radius=4))
    assert report.violation_count == 0


def test_kernel_and_generic_band_sweeps_agree():
    base = lamplighter_family(2, js=(2,))
    plain = QuasiHomothetyFamily(
        "lamplighter:2-generic", base.gamma, base.deltas, base.rhos,
        base.A, base.B, base.iota, base.pi, kernel_band=None,
        image_test=base.image_test)
    assert band_gap_histogram(base, 2, 3) == band_gap_histogram(plain, 2, 3)


# -- mutation sensitivity ----------------------------------------------------------

def test_unscaled_embedding_is_caught():
    base = z2_scaling_family((4,))

    def lazy_iota(j, x):
        return (j * x[0], x[1])            # forgets to scale the second axis

    broken = QuasiHomothetyFamily("z2-broken", base.gamma, base.deltas,
                                  base.rhos, 1, 0, lazy_iota, base.pi)
    report = verify_family(broken, QUICK)
    bad = rows_by_name(report, "image-band")[0]
    assert bad.violation_count > 0
    assert bad.violations and all("mid" in w for w in bad.violations)


def test_wrong_membership_claim_is_caught():
    base = z2_scaling_family((4,))
    liar = QuasiHomothetyFamily("z2-liar", base.gamma, base.deltas,
                                base.rhos, 1, 0, base.iota, base.pi,
                                image_test=lambda j, x: True)
    report = verify_family(liar, QUICK)
    assert rows_by_name(report, "image-membership")[0].violation_count > 0


# -- report plumbing ----------------------------------------------------------------

def test_report_json_shape():
    report = verify_family(z2_scaling_family((2,)), QUICK)
    row = report.to_json()
    assert row["family"] == "z2"
    assert row["A"] == "1" and row["B"] == "0"
    assert row["violationCount"] == 0
    assert {"name", "j", "checked", "worstSlack", "violationCount",
            "violations"} <= set(row["inequalities"][0])


def test_family_constructor_guards():
    plane = z2_scaling_family((2,)).gamma
    with pytest.raises(MalformedSpecError):
        QuasiHomothetyFamily("x", plane, {2: plane}, {3: 3}, 1, 0,
                             lambda j, v: v)
    with pytest.raises(MalformedSpecError):
        z2_scaling_family((0,))
    with pytest.raises(MalformedSpecError):
        QuasiHomothetyFamily("x", plane, {2: plane}, {2: 2}, Fraction(1, 2),
                             0, lambda j, v: v)
    with pytest.raises(MalformedSpecError):
        lamplighter_family(1)

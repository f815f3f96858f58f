from fractions import Fraction

import pytest

from bfree import conditions as cond
from bfree.specfile import load_spec
from bfree.toeplitz import direct_levels, two_hole_skeleton


def profile(levels, name, top, upto):
    return cond.hole_profile(levels(name, top), upto)


def test_b1_separation(levels):
    P = profile(levels, "b1", 5, 3)
    assert cond.check_Sh(P, 3).holds
    assert cond.check_Seh_prime(P, 3, 2).holds
    assert cond.check_DSeh_prime(P, 3, 2).holds


def test_b2_adjacent_holes(levels):
    P = profile(levels, "b2", 5, 3)
    sh = cond.check_Sh(P, 1)
    assert sh.verdict == cond.VIOLATED
    assert (1, 1, 2) in sh.witnesses
    assert {w[1] for w in sh.witnesses} == {1, 2, 3}
    assert cond.replay_witness(sh, P)
    assert cond.check_Seh_prime(P, 3, 2).holds
    assert cond.check_DSeh_prime(P, 3, 2).holds


def test_gh_sh_holds():
    P = cond.hole_profile(direct_levels(load_spec("gh"), 6), 4)
    assert cond.check_Sh(P, 4).holds


def test_condition_star(levels):
    P = profile(levels, "b1", 5, 3)
    star = cond.check_condition_star(P)
    assert star.verdict == cond.VIOLATED and star.witnesses[0] == (1, 0)
    assert cond.replay_witness(star, P)
    gh = cond.hole_profile(direct_levels(load_spec("gh"), 6), 4)
    assert cond.check_condition_star(gh).verdict == cond.VIOLATED


def test_one_hole_per_period_satisfies_star():
    P = cond.hole_profile(direct_levels(load_spec("gh"), 6), 4)
    ess_only = [cond.HoleLevel(h.n, h.p, h.essential, h.essential) for h in P]
    assert cond.check_condition_star(ess_only).holds


def test_skeleton_two_holes():
    P = cond.hole_profile(direct_levels(two_hole_skeleton(5), 5), 4)
    assert cond.check_condition_star(P).holds
    for v in (cond.check_Sh(P, 2), cond.check_Seh_prime(P, 2, 2),
              cond.check_DSeh_prime(P, 2, 2, beta_fixed=0)):
        assert v.verdict == cond.VIOLATED
        assert {abs(w[0]) for w in v.witnesses} == {2}
        assert cond.replay_witness(v, P)


@pytest.mark.parametrize("name, top, upto", [("b1", 5, 3), ("b1n", 5, 3), ("b2", 5, 3),
                                             ("not-all-holes", 5, 3)])
def test_dseh_beta_zero_is_seh_prime(levels, name, top, upto):
    P = profile(levels, name, top, upto)
    a = cond.check_Seh_prime(P, 3, 2)
    b = cond.check_DSeh_prime(P, 3, 2, beta_fixed=0)
    assert a.verdict == b.verdict
    assert [w[:3] for w in b.witnesses] == a.witnesses


def test_dseh_budget_gives_inconclusive(levels):
    P = profile(levels, "b2", 5, 3)
    v = cond.check_DSeh_prime(P, 3, 2, beta_budget=50)
    assert v.verdict == cond.INCONCLUSIVE


def test_TI(levels):
    assert cond.check_TI(levels("b1", 4), 3).holds
    assert cond.check_TI(levels("b1n", 4), 3).holds
    b2 = levels("b2", 5)
    assert cond.check_TI(b2, 3, ess_hole_levels=cond.hole_profile(b2, 3)).verdict == cond.VIOLATED


def test_totient_sums(levels):
    b2 = levels("b2", 4)
    full, per = cond.totient_sums(b2, 1)
    assert full == Fraction(3, 2)
    assert dict(cond.totient_sums(b2, 2)[1])[4] == Fraction(1, 6)
    assert all(s == 0 for _, s in cond.totient_sums(levels("b1", 4), 2)[1])


def test_heilbronn_rohrbach(levels):
    assert cond.heilbronn_rohrbach_bound(levels("b1", 4)[2]) == Fraction(1, 8)
    assert cond.heilbronn_rohrbach_bound(levels("b2", 4)[1]) == Fraction(1, 3)


def test_centralizer_reports(levels):
    for name, expect in (("b1", "trivial"), ("b2", "trivial"), ("b1n", "torsion cyclic, order divides 3")):
        L = levels(name, 5)
        P = cond.hole_profile(L, 3)
        rep = cond.centralizer_report(L[:3], P)
        assert rep["conclusion"].startswith(expect), (name, rep["conclusion"])
    rep = cond.centralizer_report(levels("b1", 5)[:3], cond.hole_profile(levels("b1", 5), 3))
    assert [r["ratio"] for r in rep["levels"]] == [1, 1, 1]

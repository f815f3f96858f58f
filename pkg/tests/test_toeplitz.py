import pytest

from bfree.bset import SpecError
from bfree.holes import ResidueSet
from bfree.toeplitz import GHVariant, UserSkeleton, direct_eta_segment, direct_holes, two_hole_skeleton


def test_gh_holes():
    gh = GHVariant()
    assert direct_holes(gh, 1) == ResidueSet(8, (3, 7))
    assert direct_holes(gh, 2) == ResidueSet(32, (11, 27))
    with pytest.raises(ValueError):
        direct_holes(gh, 0)


def test_gh_budget_one_unresolved():
    w, unresolved = direct_eta_segment(GHVariant(), 0, 7, 1)
    assert unresolved == [3, 7] and not w.certified


def test_gh_budget_three():
    gh = GHVariant()
    _, unresolved = direct_eta_segment(gh, 0, 7, 3)
    assert all(x in direct_holes(gh, 3) for x in unresolved)
    assert gh.bit(3, 3)[1] >= 2


def test_gh_empirical_holes():
    """A position is a level-n hole iff it is not filled by levels 1..n."""
    gh = GHVariant()
    for n in (1, 2, 3):
        p = gh.period(n)
        empirical = {x % p for x in range(4 * p) if gh.bit(x, n)[0] is None}
        assert ResidueSet(p, empirical) == direct_holes(gh, n)


def test_skeleton_without_holes_is_periodic():
    sk = UserSkeleton(((3, "011"),))
    w, unresolved = direct_eta_segment(sk, 0, 8, 1)
    assert w.text() == "011011011" and not unresolved


def test_skeleton_validation():
    with pytest.raises(SpecError):
        UserSkeleton(((4, "0?1?"), (8, "1?1?0?1?")))  # position 0 reassigned
    with pytest.raises(SpecError):
        UserSkeleton(((4, "0?1"),))


def test_two_hole_skeleton_shape():
    sk = two_hole_skeleton(4)
    for n in range(1, 5):
        H = sk.holes(n)
        assert len(H.residues) == 2 and H.residues[1] - H.residues[0] == 2

import pytest
from hypothesis import given, settings, strategies as st

from bfree.holes import (HypothesisViolated, ResidueSet, essential_holes_iterative, holes_level,
                         minimal_period, multiples_difference, period_formula_singleton,
                         period_formula_union, project_difference)
from bfree.oracle import naive_holes, naive_min_period
from bfree.specfile import load_spec
from bfree.toeplitz import direct_levels


def test_b1_level_one(levels):
    H = holes_level(levels("b1", 3)[0])
    assert H == ResidueSet(6, (2, 4))


def test_b1n_level_one(levels):
    assert holes_level(levels("b1n", 3)[0]) == ResidueSet(18, (2, 4, 8, 10, 14, 16))


def test_b2_level_one(levels):
    H = holes_level(levels("b2", 3)[0])
    assert H.modulus == 30 and len(H) == 16
    assert 2 in H and 3 in H


@pytest.mark.parametrize("name, top", [("b1", 4), ("b1n", 4), ("b2", 3),
                                       ("not-all-holes", 3), ("two-filtrations", 1)])
def test_holes_match_oracle(levels, name, top):
    spec = load_spec(name)
    for lv in levels(name, top):
        assert holes_level(lv) == naive_holes(spec, lv)


def test_residue_set_semantics():
    a = ResidueSet(6, (2, 4))
    assert a == a.lift(18) == ResidueSet(18, (2, 4, 8, 10, 14, 16))
    assert hash(a) == hash(a.lift(18))
    assert a.reduced().modulus == 6
    assert ResidueSet(4, (1,)) | ResidueSet(6, (0,)) == ResidueSet(12, (0, 1, 5, 6, 9))
    assert (ResidueSet(4, (1, 3)) & ResidueSet(3, (0,))) == ResidueSet(12, (3, 9))
    assert 14 in a and 15 not in a


@pytest.mark.parametrize("rs, tau", [(ResidueSet(6, (2, 4)), 6), (ResidueSet(8, (3, 7)), 4),
                                     (ResidueSet(5, range(5)), 1), (ResidueSet(6, (0, 3)), 3),
                                     (ResidueSet(12, ()), 1)])
def test_minimal_period_examples(rs, tau):
    assert minimal_period(rs).tau == tau == naive_min_period(rs)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 60).flatmap(
    lambda m: st.tuples(st.just(m), st.sets(st.integers(0, m - 1)))))
def test_minimal_period_vs_oracle(data):
    m, res = data
    rs = ResidueSet(m, res)
    assert minimal_period(rs).tau == naive_min_period(rs)


@pytest.mark.parametrize("a, C, tau", [(4, (6, 9), 12), (2, (6,), 6), (1, (2,), 2)])
def test_singleton_formula_examples(a, C, tau):
    assert period_formula_singleton(a, C) == tau
    assert minimal_period(multiples_difference([a], C)).tau == tau


def test_union_formula_examples():
    assert period_formula_union((2,), (6,)) == 6
    assert period_formula_union((2, 3), (4,)) == 12
    assert minimal_period(multiples_difference((2, 3), (4,))).tau == 12
    with pytest.raises(HypothesisViolated):
        period_formula_union((2, 3), (10, 15))  # C^(/2) = {5, 15} is not primitive
    assert minimal_period(multiples_difference((2, 3), (10, 15))).tau == 30
    assert period_formula_union((2, 3), (5,)) == 30


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 24), st.lists(st.integers(2, 24), min_size=1, max_size=3))
def test_projection_matches_brute_force(a, C):
    if any(a % c == 0 for c in C):
        return
    X = multiples_difference([a], C)
    for g in (1, 2, 6, 12, 30):
        brute = ResidueSet(g, {x % g for x in X.residues} if X.modulus % g == 0 else
                           {x % g for x in X.lift(X.modulus * g).residues})
        assert project_difference([a], C, g) == brute


def test_gh_essential_level_one():
    spec = load_spec("gh")
    E, cert = essential_holes_iterative(direct_levels(spec, 4), 1)
    assert E == ResidueSet(8, (3,)) and cert.kind == "stabilized"


def test_b1_essential_level_one(levels):
    E, cert = essential_holes_iterative(levels("b1", 3), 1)
    assert E == ResidueSet(6, (2, 4)) and cert.kind == "stabilized"

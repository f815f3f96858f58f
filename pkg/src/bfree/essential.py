"""Essential holes from the arithmetic of B: (a, A)-sequences and the sets S_N(a)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from math import gcd, lcm

from .arith import intset, primitivize
from .bset import Check
from .holes import RESIDUE_CAP, ResidueSet, multiples_difference

COMBINATION_CAP = 10**5


class NotApplicable(ValueError):
    pass


class NotComputed(ValueError):
    pass


class EmptyComponent(ArithmeticError):
    def __init__(self, a, S_a):
        super().__init__(f"aZ minus M_S(a) is empty for a = {a}, S(a) = {S_a}")
        self.a = a
        self.S_a = S_a


@dataclass(frozen=True)
class AASequence:
    N: int
    values: tuple

    @property
    def depth(self) -> int:
        return len(self.values) - 1

    def to_dict(self):
        return {"N": self.N, "values": list(self.values)}


@dataclass(frozen=True)
class SeqSet:
    """S_N((a_n)) computed up to the sequence's depth."""
    values: tuple
    truncated: bool


def _by_level(levels):
    table = {lv.n: lv for lv in levels}
    for lv in table.values():
        if not hasattr(lv, "S"):
            raise NotApplicable("arithmetic essential holes need B-free levels")
    return table


def enumerate_aA_sequences(levels, N: int, a: int, depth: int) -> list:
    """All (a, A)-sequences a_N = a, ..., a_{N+depth}.

    Extensions range over the infinite-source values of each level: every
    member of an (a, A)-sequence has infinitely many sources, so this only
    removes dead branches that a finite search could not prune otherwise.
    """
    table = _by_level(levels)
    if N + depth not in table:
        raise ValueError(f"depth {depth} needs level {N + depth}")
    if a not in table[N].A_inf:
        raise ValueError(f"{a} is not an infinite-source value at level {N}")
    paths = [(a,)]
    for n in range(N, N + depth):
        ell = table[n].ell
        nxt = table[n + 1].A_inf
        paths = [p + (v,) for p in paths for v in nxt if gcd(v, ell) == p[-1]]
    return [AASequence(N, p) for p in paths]


def S_of_sequence(seq: AASequence, spec, ell_N: int, S_N=()) -> SeqSet:
    """{gcd(b, ell_N) : b in B, b | a_n v ell_N for some listed n}."""
    found = set(S_N)
    for an in seq.values:
        X = lcm(an, ell_N)
        for b in spec.covering(X).realized():
            if X % b == 0:
                found.add(gcd(b, ell_N))
    return SeqSet(intset(found), truncated=True)


def _combine(sets) -> tuple:
    total = 1
    for R in sets:
        total *= max(len(R), 1)
    if total > COMBINATION_CAP:
        raise NotComputed(f"{total} lcm combinations exceed the cap {COMBINATION_CAP}")
    return primitivize(lcm(*combo) if combo else 1 for combo in product(*sets))


def S_of_a(levels, N: int, a: int, depth: int, spec=None) -> tuple:
    """The primitive set S_N(a) over all (a, A)-sequences of the given depth."""
    table = _by_level(levels)
    level = table[N]
    spec = spec or level.spec
    seqs = enumerate_aA_sequences(levels, N, a, depth)
    if not seqs:
        raise ArithmeticError(f"no ({a}, A)-sequence of depth {depth}; classification suspect")
    R = sorted({S_of_sequence(s, spec, level.ell, level.S).values for s in seqs})
    return _combine(R)


def default_depth(levels, N: int) -> int:
    return max(lv.n for lv in levels) - N


def arithmetic_components(levels, N: int, depth: int = None) -> list:
    """(a, S_N(a)) for each infinite-source a at level N."""
    table = _by_level(levels)
    depth = default_depth(levels, N) if depth is None else depth
    level = table[N]
    out = []
    for a in level.A_inf:
        Sa = S_of_a(levels, N, a, depth)
        if any(a % c == 0 for c in Sa):
            raise EmptyComponent(a, Sa)
        out.append((a, Sa))
    return out


def essential_holes_arithmetic(levels, N: int, depth: int = None) -> ResidueSet:
    """Union over a in A^inf of aZ minus M_{S_N(a)}, modulo ell_{S_N} when feasible."""
    table = _by_level(levels)
    ell = table[N].ell
    total = ResidueSet(1, ())
    for a, Sa in arithmetic_components(levels, N, depth):
        total = total | multiples_difference([a], Sa)
    if ell <= RESIDUE_CAP:
        total = total.lift(ell)
    return total


def arithmetic_is_stable(levels, N: int, depth: int = None) -> bool:
    """True when depth d and depth d - 1 give the same S_N(a) for every a."""
    depth = default_depth(levels, N) if depth is None else depth
    if depth < 2:
        return False
    return arithmetic_components(levels, N, depth) == arithmetic_components(levels, N, depth - 1)


def gh_shortcut_check(levels, N: int, n_max: int, spec=None) -> Check:
    """No generator outside S_N divides ell_{S_N} v a' for a' infinite at levels N < n <= n_max.

    Witness is (n, a', b) for the first failure.
    """
    table = _by_level(levels)
    level = table[N]
    spec = spec or level.spec
    S_N = set(level.S)
    for n in range(N + 1, n_max + 1):
        for a2 in table[n].A_inf:
            X = lcm(level.ell, a2)
            for b in spec.covering(X).realized():
                if b not in S_N and X % b == 0:
                    return Check(False, (n, a2, b))
    return Check(True, None)

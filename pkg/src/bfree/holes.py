"""Periodic residue sets, hole sets, essential holes and minimal periods."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import gcd, lcm

import numpy as np

from .arith import (DensityNotComputed, div_transform, excess_part, factorize,
                    intset, lcm_of, primitivize)
from .bset import is_taut_truncation

RESIDUE_CAP = 5 * 10**7


class UnsaturatedLevel(ValueError):
    pass


class EmptySetError(ValueError):
    pass


class HypothesisViolated(ValueError):
    def __init__(self, message, offender=None):
        super().__init__(message)
        self.offender = offender


class ModulusTooLarge(ValueError):
    pass


def _check_modulus(m: int) -> None:
    if m > RESIDUE_CAP:
        raise ModulusTooLarge(f"modulus {m} exceeds the residue cap {RESIDUE_CAP}")


class ResidueSet:
    """The periodic set residues + modulus*Z.

    Two residue sets compare equal when they describe the same subset of
    the integers, whatever moduli they are stored with.
    """

    __slots__ = ("modulus", "residues")

    def __init__(self, modulus: int, residues=()):
        if modulus < 1:
            raise ValueError("modulus must be positive")
        self.modulus = int(modulus)
        res = sorted({int(r) % self.modulus for r in residues})
        self.residues = tuple(res)

    @classmethod
    def from_mask(cls, mask) -> "ResidueSet":
        mask = np.asarray(mask, dtype=bool)
        return cls(len(mask), np.flatnonzero(mask).tolist())

    def mask(self, modulus: int = None) -> np.ndarray:
        """Boolean membership array over [0, modulus)."""
        m = self.modulus if modulus is None else modulus
        if m % self.modulus:
            raise ValueError(f"{m} is not a multiple of {self.modulus}")
        _check_modulus(m)
        base = np.zeros(self.modulus, dtype=bool)
        if self.residues:
            base[list(self.residues)] = True
        return np.tile(base, m // self.modulus)

    def lift(self, modulus: int) -> "ResidueSet":
        return ResidueSet.from_mask(self.mask(modulus))

    def project(self, g: int) -> "ResidueSet":
        """Residues r mod g whose class r + gZ meets the set."""
        h = gcd(g, self.modulus)
        return ResidueSet(h, (r % h for r in self.residues)).lift(g)

    def reduced(self) -> "ResidueSet":
        """The same set stored modulo its minimal period."""
        t = _min_period_of_mask(self.mask())
        return ResidueSet(t, (r for r in self.residues if r < t))

    def __contains__(self, k: int) -> bool:
        r = k % self.modulus
        lo, hi = 0, len(self.residues)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.residues[mid] < r:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(self.residues) and self.residues[lo] == r

    def __len__(self):
        return len(self.residues)

    def __eq__(self, other):
        if not isinstance(other, ResidueSet):
            return NotImplemented
        m = lcm(self.modulus, other.modulus)
        if m <= RESIDUE_CAP:
            return bool(np.array_equal(self.mask(m), other.mask(m)))
        a, b = self.reduced(), other.reduced()
        return a.modulus == b.modulus and a.residues == b.residues

    def __hash__(self):
        r = self.reduced()
        return hash((r.modulus, r.residues))

    def __repr__(self):
        shown = ", ".join(map(str, self.residues[:8]))
        more = ", ..." if len(self.residues) > 8 else ""
        return f"ResidueSet({self.modulus}, {{{shown}{more}}})"

    def _binary(self, other, op):
        m = lcm(self.modulus, other.modulus)
        return ResidueSet.from_mask(op(self.mask(m), other.mask(m)))

    def __and__(self, other):
        return self._binary(other, np.logical_and)

    def __or__(self, other):
        return self._binary(other, np.logical_or)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a & ~b)

    def issubset(self, other) -> bool:
        return len(self - other) == 0

    def shifted(self, k: int) -> "ResidueSet":
        """The set minus k, i.e. {h - k : h in self}."""
        return ResidueSet(self.modulus, (r - k for r in self.residues))

    def density(self):
        from fractions import Fraction
        return Fraction(len(self.residues), self.modulus)

    def to_dict(self) -> dict:
        return {"modulus": self.modulus, "residues": list(self.residues)}


@dataclass(frozen=True)
class PeriodReport:
    tau: int
    certified_by: str

    def to_dict(self):
        return {"tau": self.tau, "certified_by": self.certified_by}


def _is_period(mask: np.ndarray, t: int) -> bool:
    rows = mask.reshape(-1, t)
    return bool((rows == rows[0]).all())


def _min_period_of_mask(mask: np.ndarray) -> int:
    m = len(mask)
    t = m
    for p in factorize(m):
        while t % p == 0 and _is_period(mask, t // p):
            t //= p
    return t


def minimal_period(rs: ResidueSet) -> PeriodReport:
    """Smallest divisor t of the modulus with rs + t = rs."""
    if not rs.residues:
        return PeriodReport(1, "direct-search")
    return PeriodReport(_min_period_of_mask(rs.mask()), "direct-search")


# ----- closed-form periods ------------------------------------------------

def period_formula_singleton(a: int, C) -> int:
    """Minimal period of aZ minus M_C, namely a * lcm((C^{/a})^prim)."""
    C = intset(C)
    if any(a % c == 0 for c in C):
        raise EmptySetError(f"{a} lies in M_C, so aZ minus M_C is empty")
    return a * lcm_of(primitivize(div_transform(C, a)))


def union_hypothesis(A, C):
    """First a in A for which C^{/a} contains 1 or is not primitive, else None."""
    for a in intset(A):
        Ca = div_transform(C, a)
        if 1 in Ca or primitivize(Ca) != Ca:
            return a
    return None


def period_formula_union(A, C) -> int:
    """Minimal period lcm(A u C) of M_A minus M_C when the formula's hypotheses hold."""
    A, C = intset(A), intset(C)
    if primitivize(A) != A:
        raise HypothesisViolated("A is not primitive")
    bad = union_hypothesis(A, C)
    if bad is not None:
        raise HypothesisViolated(
            f"C^(/{bad}) = {div_transform(C, bad)} contains 1 or is not primitive", bad)
    return lcm_of(A + C)


# ----- sets of the form (union of aZ) minus M_C ----------------------------

def difference_period(As, C) -> int:
    """A period of the union of aZ minus M_C (lcm of the component periods)."""
    C = intset(C)
    P = 1
    for a in intset(As):
        if any(a % c == 0 for c in C):
            continue
        P = lcm(P, period_formula_singleton(a, C))
    return P


def multiples_difference(As, C, modulus: int = None) -> ResidueSet:
    """The union over a in As of aZ minus M_C, sieved one component at a time."""
    C = intset(C)
    P = difference_period(As, C)
    M = P if modulus is None else modulus
    if M % P:
        raise ValueError(f"modulus {M} is not a multiple of the period {P}")
    _check_modulus(M)
    out = np.zeros(M, dtype=bool)
    for a in intset(As):
        if any(a % c == 0 for c in C):
            continue
        span = M // a
        keep = np.ones(span, dtype=bool)
        for d in primitivize(div_transform(C, a)):
            keep[::d] = False
        out[np.flatnonzero(keep) * a] = True
    return ResidueSet.from_mask(out)


def project_difference(As, C, g: int) -> ResidueSet:
    """Residues r mod g whose class r + gZ meets the union of aZ minus M_C.

    The class meets aZ iff gcd(a, g) | r; the intersection is a progression
    x + lcm(a, g)Z with gcd(x, lcm(a, g)) = lcm(gcd(r, g), a), and it sits
    inside M_C iff some c divides that gcd, i.e. iff the excess part of c
    over a divides both r and g.
    """
    _check_modulus(g)
    C = intset(C)
    r = np.arange(g, dtype=np.int64)
    out = np.zeros(g, dtype=bool)
    for a in intset(As):
        if any(a % c == 0 for c in C):
            continue
        ok = r % gcd(a, g) == 0
        for c in C:
            cs = excess_part(c, a)
            if g % cs == 0:
                ok &= r % cs != 0
        out |= ok
    return ResidueSet.from_mask(out)


# ----- levels -------------------------------------------------------------

class BFreeView:
    """Hole-set access for one filtration level of a B-free spec."""

    def __init__(self, level):
        self.level = level
        self.n = level.n
        self.p = level.ell

    def period(self) -> int:
        return difference_period(self.level.A_minus_S, self.level.S)

    def holes(self) -> ResidueSet:
        return multiples_difference(self.level.A_minus_S, self.level.S)

    def project(self, g: int) -> ResidueSet:
        return project_difference(self.level.A_minus_S, self.level.S, g)


def view(level):
    """Uniform hole access for B-free levels and directly specified ones."""
    if hasattr(level, "holes") and hasattr(level, "project"):
        return level
    return BFreeView(level)


_TAUT_CACHE = {}


def tautness_status(level) -> str:
    """'taut', 'not-taut' or 'unverified' for the truncation around a level."""
    spec = level.spec
    if spec is None:
        return "unverified"
    B = spec.realized(level.n + 1) if spec.family != "explicit" else spec.realized()
    key = tuple(B)
    if key not in _TAUT_CACHE:
        try:
            _TAUT_CACHE[key] = "taut" if is_taut_truncation(B).ok else "not-taut"
        except DensityNotComputed:
            _TAUT_CACHE[key] = "unverified"
    return _TAUT_CACHE[key]


def holes_level(level, check_taut: bool = True) -> ResidueSet:
    """H_n = M_{A_S} minus M_S for a saturated level.

    The result is stored modulo ell_S when that fits under RESIDUE_CAP and
    modulo the (smaller) structural period otherwise.
    """
    if not hasattr(level, "S"):
        return level.holes()
    if not level.saturated:
        raise UnsaturatedLevel(f"level {level.n} is not saturated; call saturate() first")
    result = BFreeView(level).holes()
    if level.ell <= RESIDUE_CAP:
        result = result.lift(level.ell)
    if check_taut:
        status = tautness_status(level)
        if status != "taut":
            warnings.warn(f"level {level.n}: truncation tautness {status}; "
                          "cross-checking against the oracle")
            from .oracle import naive_holes
            if naive_holes(level.spec, level) != result:
                raise ArithmeticError(f"level {level.n}: hole formula disagrees with the oracle")
    return result


@dataclass(frozen=True)
class Certificate:
    kind: str
    level: int

    def to_dict(self):
        return {"kind": self.kind, "level": self.level}


def essential_holes_iterative(levels, N: int, n_max: int = None, stab_window: int = 2):
    """Essential holes at level N by intersecting projections of later levels.

    Returns (ResidueSet, Certificate).  The certificate is 'stabilized' when
    the running set stayed unchanged for `stab_window` consecutive levels,
    and 'truncated' when the available levels ran out first.
    """
    views = {v.n: v for v in map(view, levels)}
    if N not in views:
        raise ValueError(f"level {N} not available")
    top = max(views) if n_max is None else n_max
    if top > max(views):
        raise ValueError(f"levels only reach {max(views)}, n_max = {top}")
    base = views[N]
    pN = base.p
    current = base.holes()
    changed_at = N
    streak = 0
    for n in range(N + 1, top + 1):
        v = views[n]
        g = gcd(v.period(), pN)
        nxt = current & v.project(g)
        if nxt == current:
            streak += 1
        else:
            streak = 0
            changed_at = n
        current = nxt
        if streak >= stab_window:
            return current, Certificate("stabilized", changed_at)
    return current, Certificate("truncated", top)

"""Exact integer arithmetic on big integers.

Everything here works on Python ints, so moduli never overflow.  Finite
integer sets are passed around as sorted tuples of distinct positive ints.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import gcd, isqrt, lcm

DENSITY_SUBSET_CAP = 20
DENSITY_SIEVE_BOUND = 10**6


class DensityNotComputed(ValueError):
    """Raised when a density is outside the configured computation caps."""


def intset(values) -> tuple:
    """Normalise an iterable of positive integers to a sorted tuple."""
    out = sorted({int(v) for v in values})
    if out and out[0] < 1:
        raise ValueError(f"integer sets hold positive integers, got {out[0]}")
    return tuple(out)


def lcm_of(values) -> int:
    return reduce(lcm, values, 1)


def gcd_of(values) -> int:
    return reduce(gcd, values, 0)


def factorize(n: int) -> dict:
    """Prime factorisation by trial division."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = 5
    step = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += step
        step = 6 - step
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for p in range(3, isqrt(n) + 1, 2):
        if n % p == 0:
            return False
    return True


def totient(n: int) -> int:
    """Euler's phi."""
    result = n
    for p in factorize(n):
        result -= result // p
    return result


def div_transform(A, k: int) -> tuple:
    """The set {a / gcd(a, k) : a in A}."""
    if k < 1:
        raise ValueError("k must be positive")
    return intset(a // gcd(a, k) for a in A)


def perp_subset(A, k: int) -> tuple:
    """Elements of A coprime to k."""
    if k < 1:
        raise ValueError("k must be positive")
    return tuple(a for a in intset(A) if gcd(a, k) == 1)


def primitivize(A) -> tuple:
    """Divisibility-minimal elements of A."""
    kept = []
    for a in intset(A):
        if not any(a % b == 0 for b in kept):
            kept.append(a)
    return tuple(kept)


def excess_part(c: int, a: int) -> int:
    """The part of c supported on primes where c has higher valuation than a.

    This is the smallest c* with the property: c divides lcm(d, a) iff
    c* divides d.  It differs from c / gcd(c, a) whenever c and a share a
    prime to different powers.
    """
    u = c // gcd(c, a)
    out = 1
    g = gcd(c, u)
    while g > 1:
        out *= g
        c //= g
        g = gcd(c, g)
    return out


def progression_intersect(r: int, l: int, s: int, m: int):
    """Intersect r + lZ with s + mZ.

    Returns (x, L, g) with 0 <= x < L = lcm(l, m) and g = gcd(x, L), or
    None when the progressions are disjoint.
    """
    if l < 1 or m < 1:
        raise ValueError("moduli must be positive")
    sol = crt([(r, l), (s, m)])
    if sol is None:
        return None
    x, L = sol
    g = gcd(x, L)
    expected = lcm(gcd(r, l), gcd(s, m))
    if g != expected:
        raise ArithmeticError(f"gcd identity failed: {g} != {expected}")
    return x, L, g


def crt(congruences):
    """Smallest non-negative solution of x = r_i (mod m_i), or None.

    Returns (x, M) with M the lcm of the moduli.
    """
    x, M = 0, 1
    for r, m in congruences:
        if m < 1:
            raise ValueError("moduli must be positive")
        r %= m
        g = gcd(M, m)
        if (r - x) % g:
            return None
        # solve x + M*t = r (mod m)
        m_g = m // g
        t = ((r - x) // g) * pow(M // g, -1, m_g) % m_g if m_g > 1 else 0
        x += M * t
        M = M * m_g
        x %= M
    return x, M


def inconsistent_pair(congruences):
    """First pair of congruences that clash modulo the gcd of their moduli."""
    items = list(congruences)
    for i, (r1, m1) in enumerate(items):
        for r2, m2 in items[i + 1:]:
            if (r1 - r2) % gcd(m1, m2):
                return (r1, m1), (r2, m2)
    return None


def multiples_mask(A, modulus: int) -> bytearray:
    """0/1 bytes of length `modulus` marking residues in M_A.

    Every element of A must divide the modulus.
    """
    mask = bytearray(modulus)
    for a in A:
        if modulus % a:
            raise ValueError(f"{a} does not divide {modulus}")
        mask[0::a] = b"\x01" * (modulus // a)
    return mask


def _density_inclusion_exclusion(A) -> Fraction:
    # signed lcm table of the complement, merged on equal lcm values
    table = {1: 1}
    for a in A:
        new = dict(table)
        for l, coef in table.items():
            L = lcm(l, a)
            new[L] = new.get(L, 0) - coef
        table = {k: v for k, v in new.items() if v}
    free = sum((Fraction(coef, l) for l, coef in table.items()), Fraction(0))
    return 1 - free


def density_of_multiples(A, subset_cap: int = DENSITY_SUBSET_CAP,
                         sieve_bound: int = DENSITY_SIEVE_BOUND) -> Fraction:
    """Exact density of the set of multiples of a finite set A."""
    A = primitivize(A)
    if not A:
        return Fraction(0)
    if 1 in A:
        return Fraction(1)
    if len(A) <= subset_cap:
        return _density_inclusion_exclusion(A)
    L = lcm_of(A)
    if L <= sieve_bound:
        return Fraction(sum(multiples_mask(A, L)), L)
    raise DensityNotComputed(
        f"|A| = {len(A)} exceeds the subset cap and lcm {L} exceeds the sieve bound")

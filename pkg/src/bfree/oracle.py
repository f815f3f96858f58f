"""Brute-force reference implementations.

Nothing here shares code with the main computational path: the loops are
plain Python over explicit residues, so agreement between the two is
meaningful evidence.
"""

from math import gcd

from .holes import ResidueSet

ORACLE_CAP = 2 * 10**6


class OracleTooLarge(ValueError):
    pass


def _lcm(values):
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


def _level_set(spec, level):
    if isinstance(level, int):
        from .filtration import filtration_set
        return tuple(filtration_set(spec, level))
    return tuple(level.S)


def naive_holes(spec, level) -> ResidueSet:
    """Holes at a level by scanning every class k + p_n Z.

    A class is constant 0 when some element of the saturated S divides k,
    and constant 1 when no generator b has gcd(b, p_n) dividing k.
    Everything else is a hole.
    """
    S = _level_set(spec, level)
    p = _lcm(S)
    if p > ORACLE_CAP:
        raise OracleTooLarge(f"p_n = {p} exceeds the oracle cap")
    wide = spec.covering(p)
    gens = wide.realized()
    sat = [b for b in gens if p % b == 0]
    meet = sorted({gcd(b, p) for b in gens})
    holes = []
    for k in range(p):
        if any(k % b == 0 for b in sat):
            continue
        if all(k % g for g in meet):
            continue
        holes.append(k)
    return ResidueSet(p, holes)


def naive_essential_holes(spec, N: int, n_max: int) -> ResidueSet:
    """Holes k at level N whose class k + p_N Z meets the holes of every level up to n_max."""
    base = naive_holes(spec, N)
    pN = base.modulus
    later = [naive_holes(spec, n) for n in range(N + 1, n_max + 1)]
    keep = []
    for k in base.residues:
        ok = True
        for h in later:
            if not any((r - k) % pN == 0 for r in h.residues):
                ok = False
                break
        if ok:
            keep.append(k)
    return ResidueSet(pN, keep)


def naive_min_period(rs: ResidueSet) -> int:
    """Smallest t dividing the modulus with (R + t) mod p = R, by exhaustive scan."""
    p = rs.modulus
    members = set(rs.residues)
    if not members:
        return 1
    for t in range(1, p + 1):
        if p % t:
            continue
        if all((r + t) % p in members for r in members):
            return t
    return p


def naive_rho(bits, n: int) -> int:
    """Number of distinct length-n words in a bit window (string, bytes or BitWindow)."""
    if hasattr(bits, "bits"):
        bits = bits.bits
    if isinstance(bits, (bytes, bytearray)):
        text = "".join("1" if b else "0" for b in bits)
    else:
        text = str(bits)
    return len({text[i:i + n] for i in range(len(text) - n + 1)})


def naive_eta(elements, lo: int, hi: int) -> str:
    """Characteristic word of the B-free integers on [lo, hi] for a finite B."""
    return "".join("0" if any(k % b == 0 for b in elements) else "1"
                   for k in range(lo, hi + 1))

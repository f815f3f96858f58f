"""Subword complexity of eta and the CRT lower-bound certificate for B_2-type sets."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import floor, log, log2

import numpy as np

from .arith import crt, factorize
from .bset import BitWindow, BSetSpec, eta_window

DEFAULT_L = 10**5
WITNESS_CAP = 10**5


class AssumptionViolated(ValueError):
    pass


class CapExceeded(ValueError):
    pass


def _as_array(bits) -> np.ndarray:
    if isinstance(bits, BitWindow):
        bits = bits.bits
    if isinstance(bits, str):
        return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")
    return np.frombuffer(bytes(bits), dtype=np.uint8)


def count_blocks(bits, n: int) -> int:
    """Distinct length-n words of a bit array (packed codes, then np.unique)."""
    arr = _as_array(bits)
    count = len(arr) - n + 1
    if count <= 0:
        return 0
    if n <= 63:
        codes = np.zeros(count, dtype=np.uint64)
        for j in range(n):
            codes = (codes << np.uint64(1)) | arr[j:j + count].astype(np.uint64)
        return len(np.unique(codes))
    view = np.lib.stride_tricks.sliding_window_view(arr, n)
    packed = np.packbits(view, axis=1)
    rows = np.ascontiguousarray(packed).view(np.dtype((np.void, packed.shape[1])))
    return len(np.unique(rows))


def _eta_for_blocks(spec, n_max, L):
    return eta_window(spec, -L, L + n_max - 1)


def rho_window(spec: BSetSpec, n: int, L: int = DEFAULT_L) -> int:
    """Distinct blocks eta[k, k + n - 1] with k in [-L, L]; a lower bound for rho(n)."""
    return count_blocks(_eta_for_blocks(spec, n, L), n)


def rho_profile(spec: BSetSpec, ns, L: int = DEFAULT_L) -> dict:
    """rho_window for several n, sharing one eta window."""
    ns = list(ns)
    w = _eta_for_blocks(spec, max(ns), L)
    arr = _as_array(w)
    width = 2 * L + 1
    return {n: count_blocks(arr[:width + n - 1], n) for n in ns}


# ----- parameters delta, m_n, j_n ---------------------------------------------

@dataclass(frozen=True)
class DeltaBound:
    lower: Fraction
    upper: Fraction
    ranks: int
    tail: Fraction

    def to_dict(self):
        return {"lower": str(self.lower), "upper": str(self.upper),
                "lower_float": float(self.lower), "ranks": self.ranks, "tail": str(self.tail)}


@dataclass(frozen=True)
class Params:
    n: int
    delta: DeltaBound
    m_n: int
    j_n: object

    def to_dict(self):
        return {"n": self.n, "delta": self.delta.to_dict(), "m_n": self.m_n, "j_n": self.j_n}


def _c_list(spec: BSetSpec, upto: int) -> list:
    if spec.family not in ("b1", "b2"):
        raise AssumptionViolated("the complexity bound is set up for the b1 and b2 families")
    if spec.family == "b2" and spec.d and tuple(spec.d) != tuple(spec.c):
        raise AssumptionViolated("the complexity bound assumes d = c")
    return list(spec.params(upto)["c"])


def delta_bound(spec: BSetSpec, ranks: int = 24, tail: Fraction = None) -> DeltaBound:
    """1/2 - sum 1/c_i, enclosed between an exact partial sum and a tail majorant.

    With extend = 'none' the sum is finite and exact.  With 'prime_squares'
    every later c_j is p^2 for a distinct prime p at least the smallest
    prime u not used so far, so the tail is below sum_{m >= u} 1/m^2 < 1/(u-1).
    """
    if spec.extend == "none":
        cs = list(spec.c)
        tail = Fraction(0) if tail is None else tail
    else:
        cs = _c_list(spec, ranks)
        if tail is None:
            if spec.extend != "prime_squares":
                raise AssumptionViolated(
                    "sum of 1/c_i diverges for prime extension; declare a tail or use prime_squares")
            used = set()
            for c in cs:
                used.update(factorize(c))
            u = 5 if spec.family == "b2" else 3  # first candidate of the family's extension
            while u in used or any(u % p == 0 for p in range(2, int(u**0.5) + 1)):
                u += 1
            tail = Fraction(1, u - 1)
    partial = sum((Fraction(1, c) for c in cs), Fraction(0))
    upper = Fraction(1, 2) - partial
    lower = upper - tail
    if lower <= 0:
        raise AssumptionViolated(f"delta lower bound {float(lower):.4f} is not positive")
    return DeltaBound(lower, upper, len(cs), tail)


def _below_threshold(value: int, delta: Fraction, n: int) -> bool:
    # value < delta * n / (2 log2 n)
    return value * 2 * log2(n) < float(delta) * n


def complexity_params(spec: BSetSpec, n: int, tail: Fraction = None) -> Params:
    """(delta, m_n, j_n); j_n uses the lower end of the delta enclosure."""
    if n < 2:
        raise ValueError("n must be at least 2")
    delta = delta_bound(spec, tail=tail)
    m_n = floor(log2(n))
    cs = _c_list(spec, max(m_n, 1)) if spec.extend != "none" else list(spec.c)
    for j in range(1, len(cs)):
        if not 2**j * cs[j - 1] < 2**(j + 1) * cs[j]:
            raise AssumptionViolated(f"2^j c_j must increase (fails at j = {j})")
    j_n = None
    for j in range(1, min(m_n, len(cs)) + 1):
        if _below_threshold(2**j * cs[j - 1], delta.lower, n):
            j_n = j
        else:
            break
    return Params(n, delta, m_n, j_n)


def first_n_with_j(spec: BSetSpec, j: int = 1, start: int = 2, stop: int = 10**6) -> int:
    """Least n with j_n >= j (monotone scan)."""
    for n in range(start, stop):
        p = complexity_params(spec, n)
        if p.j_n is not None and p.j_n >= j:
            return n
    raise CapExceeded(f"no n below {stop} reaches j_n >= {j}")


# ----- CRT witnesses ------------------------------------------------------------

@dataclass
class CRTCertificate:
    n: int
    m_n: int
    j_n: object
    bound: int
    tuples: list = field(default_factory=list)
    positions: list = field(default_factory=list)
    blocks: list = field(default_factory=list)
    cs: list = field(default_factory=list, repr=False)
    family: str = "b2"

    @property
    def distinct(self) -> int:
        return len(set(self.blocks))

    @property
    def ok(self) -> bool:
        return self.j_n is None or self.distinct >= self.bound

    def congruences(self, r) -> list:
        return congruence_system(self.cs, self.m_n, r, self.family)

    def to_dict(self):
        return {"n": self.n, "m_n": self.m_n, "j_n": self.j_n, "bound": self.bound,
                "distinct_blocks": self.distinct, "ok": self.ok,
                "witnesses": [{"r": list(r), "x": str(x), "block": b}
                              for r, x, b in zip(self.tuples, self.positions, self.blocks)]}


def congruence_system(cs, m_n: int, r, family: str = "b2") -> list:
    """x = 2^j r_j (mod 2^j c_j) for j <= m_n and x = 0 (mod 6^(m_n + 1)).

    B_1 has no 3^k c_k generators, so for it the last modulus is 2^(m_n + 1).
    """
    system = [(2**j * r[j - 1], 2**j * cs[j - 1]) for j in range(1, m_n + 1)]
    system.append((0, (6 if family == "b2" else 2) ** (m_n + 1)))
    return system


def crt_witnesses(spec: BSetSpec, n: int, cap: int = WITNESS_CAP) -> CRTCertificate:
    """One block eta[x_r + 1, x_r + n] per residue tuple r modulo (c_1, ..., c_{j_n})."""
    params = complexity_params(spec, n)
    cs = _c_list(spec, params.m_n) if spec.extend != "none" else list(spec.c)
    cert = CRTCertificate(n, params.m_n, params.j_n, 1, cs=cs, family=spec.family)
    if params.j_n is None:
        return cert
    ranges = [range(c) for c in cs[:params.j_n]]
    total = 1
    for c in cs[:params.j_n]:
        total *= c
    if total > cap:
        raise CapExceeded(f"{total} residue tuples exceed the cap {cap}")
    cert.bound = total
    for head in product(*ranges):
        r = list(head) + [0] * (params.m_n - params.j_n)
        sol = crt(congruence_system(cs, params.m_n, r, spec.family))
        if sol is None:
            raise ArithmeticError(f"CRT system inconsistent for r = {r}")
        x = sol[0]
        cert.tuples.append(tuple(head))
        cert.positions.append(x)
        cert.blocks.append(eta_window(spec, x + 1, x + n).text())
    return cert


def replay_certificate(cert: CRTCertificate) -> bool:
    """Every x_r meets its congruences and tuples differing mod some c_j give different blocks."""
    for r, x in zip(cert.tuples, cert.positions):
        full = list(r) + [0] * (cert.m_n - (cert.j_n or 0))
        if any((x - a) % m for a, m in cert.congruences(full)):
            return False
    seen = {}
    for r, b in zip(cert.tuples, cert.blocks):
        if b in seen and seen[b] != r:
            return False
        seen[b] = r
    return True


# ----- trend ----------------------------------------------------------------

def superpoly_report(source, ns, L: int = DEFAULT_L) -> dict:
    """(n, rho_window, log rho / log n) rows.  Trend evidence, not proof."""
    ns = list(ns)
    if isinstance(source, BSetSpec):
        rho = rho_profile(source, ns, L)
    else:
        rho = {n: count_blocks(source, n) for n in ns}
    rows = []
    for n in ns:
        expo = log(rho[n]) / log(n) if n > 1 and rho[n] > 0 else None
        rows.append({"n": n, "rho": rho[n], "log_exponent": expo})
    return {"rows": rows, "L": L, "label": "trend evidence, not proof"}

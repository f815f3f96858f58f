"""B-sets: declarative descriptions, realized truncations and eta windows.

A spec names a parametric family (or lists generators explicitly).  Each
generator has a rank, the family index it belongs to, and the spec's
horizon is the largest rank that is realized.  Parameter lists that are
shorter than the horizon are extended with fresh primes, fresh prime
squares, or not at all (`extend = "none"` makes the set finite).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import lru_cache
from math import gcd, prod

from .arith import density_of_multiples, intset, is_prime

FAMILIES = ("explicit", "b1", "b1n", "b2", "not_all_holes", "two_filtrations")
EXTEND_RULES = ("primes", "prime_squares", "none")
INFINITY = "inf"
HORIZON_CAP = 400
DEFAULT_HORIZON = 8


class SpecError(ValueError):
    """Invalid or inconsistent B-set description."""


class InsufficientHorizon(ValueError):
    """The realized truncation cannot certify the requested computation."""

    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Generator:
    value: int
    rank: int
    tag: str


@dataclass(frozen=True)
class Check:
    """A boolean answer together with the evidence behind it."""
    ok: bool
    witness: object = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class BitWindow:
    start: int
    bits: bytes
    certified: bool = True

    def __post_init__(self):
        if len(self.bits) < 1:
            raise ValueError("a bit window holds at least one bit")

    @property
    def end(self):
        """Last position covered (inclusive)."""
        return self.start + len(self.bits) - 1

    def __len__(self):
        return len(self.bits)

    def at(self, pos: int) -> int:
        i = pos - self.start
        if not 0 <= i < len(self.bits):
            raise IndexError(f"position {pos} outside [{self.start}, {self.end}]")
        return self.bits[i]

    def restrict(self, lo: int, hi: int) -> "BitWindow":
        if lo < self.start or hi > self.end or hi < lo:
            raise IndexError(f"[{lo}, {hi}] not inside [{self.start}, {self.end}]")
        return BitWindow(lo, self.bits[lo - self.start:hi - self.start + 1], self.certified)

    def text(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)


@dataclass(frozen=True)
class OdometerVec:
    """A point y of the odometer, given coordinatewise by residues y_b mod b.

    Coordinates not listed in `overrides` follow Delta(shift), i.e.
    y_b = shift mod b.
    """
    shift: int = 0
    overrides: tuple = ()

    def coord(self, b: int) -> int:
        for mod, res in self.overrides:
            if mod == b:
                return res % b
        return self.shift % b

    @classmethod
    def delta(cls, n: int) -> "OdometerVec":
        return cls(shift=n)

    @classmethod
    def from_dict(cls, residues: dict, shift: int = 0) -> "OdometerVec":
        return cls(shift=shift, overrides=tuple(sorted(residues.items())))


def _fresh_after(used, minimum):
    """Smallest prime >= minimum dividing none of `used`."""
    p = minimum
    while True:
        if is_prime(p) and all(u % p for u in used):
            return p
        p += 1


def _param_lists(family, c, d, q):
    if family in ("b1", "b1n"):
        return {"c": list(c)}
    if family == "b2":
        lists = {"c": list(c)}
        if d:
            lists["d"] = list(d)
        return lists
    if family == "not_all_holes":
        return {"q": list(q), "c": list(c)}
    if family == "two_filtrations":
        return {"q": list(q), "c": list(c), "d": list(d)}
    return {}


@lru_cache(maxsize=256)
def _extended_params(family, c, d, q, extend, upto):
    lists = _param_lists(family, c, d, q)
    if not lists:
        return {}
    if extend != "none":
        minimum = 5 if family == "b2" else 3
        used = [v for vals in lists.values() for v in vals]
        if family == "b2":
            used.append(6)
        while min(len(v) for v in lists.values()) < upto:
            for key in lists:
                if len(lists[key]) < upto:
                    p = _fresh_after(used, minimum)
                    val = p * p if extend == "prime_squares" else p
                    lists[key].append(val)
                    used.append(val)
    out = {k: tuple(v) for k, v in lists.items()}
    if family == "b2" and "d" not in out:
        out["d"] = out["c"]
    return out


@dataclass(frozen=True)
class BSetSpec:
    family: str
    c: tuple = ()
    d: tuple = ()
    q: tuple = ()
    N: object = None
    elements: tuple = ()
    horizon: int = DEFAULT_HORIZON
    window: int = 100
    extend: str = "primes"
    filtration: str = "default"
    name: str = ""

    # ----- construction -------------------------------------------------
    @classmethod
    def build(cls, family, **kw) -> "BSetSpec":
        for key in ("c", "d", "q", "elements"):
            if key in kw and kw[key] is not None:
                kw[key] = tuple(int(v) for v in kw[key])
            else:
                kw.pop(key, None)
        spec = cls(family=family, **kw)
        spec.validate()
        return spec

    def with_horizon(self, horizon: int) -> "BSetSpec":
        spec = replace(self, horizon=horizon)
        spec.validate()
        return spec

    # ----- parameters ---------------------------------------------------
    @property
    def finite(self) -> bool:
        return self.family == "explicit" or self.extend == "none"

    @property
    def max_rank(self):
        """Largest rank that exists, or None for infinite families."""
        if self.family == "explicit":
            return len(self.elements)
        if self.extend == "none":
            lists = [len(self.c)] if self.family in ("b1", "b1n") else []
            if self.family == "b2":
                lists = [len(self.c), len(self.d) if self.d else len(self.c)]
            elif self.family == "not_all_holes":
                lists = [len(self.c), len(self.q)]
            elif self.family == "two_filtrations":
                lists = [len(self.c), len(self.d), len(self.q)]
            return min(lists)
        return None

    @property
    def realized_rank(self) -> int:
        top = self.max_rank
        return self.horizon if top is None else min(self.horizon, top)

    def params(self, upto: int) -> dict:
        """Parameter lists extended to length `upto` (1-based ranks)."""
        return _extended_params(self.family, self.c, self.d, self.q, self.extend, upto)

    def _param_lists(self):
        return _param_lists(self.family, self.c, self.d, self.q)

    @property
    def N_value(self):
        if self.N in (None, INFINITY, "infinity", float("inf")):
            return None
        return int(self.N)

    # ----- generators ---------------------------------------------------
    def generators_of_rank(self, k: int) -> list:
        fam = self.family
        if fam == "explicit":
            return [Generator(self.elements[k - 1], k, "e")]
        P = self.params(k)
        if fam == "b1":
            return [Generator(2**k * P["c"][k - 1], k, "2^k c_k")]
        if fam == "b1n":
            gens = [Generator(2**k * P["c"][k - 1], k, "2^k c_k")]
            N = self.N_value
            if N is None or k < N:
                gens.append(Generator(2**(k - 1) * P["c"][k - 1]**2, k, "2^(k-1) c_k^2"))
            return gens
        if fam == "b2":
            return [Generator(2**k * P["c"][k - 1], k, "2^k c_k"),
                    Generator(3**k * P["d"][k - 1], k, "3^k d_k")]
        if fam == "not_all_holes":
            q, c = P["q"], P["c"]
            value = prod(q[:max(k - 2, 0)]) * q[k - 1] * c[k - 1]
            return [Generator(value, k, "b_m")]
        if fam == "two_filtrations":
            q, c, d = P["q"], P["c"], P["d"]
            return [Generator(2**k * q[k - 1] * c[k - 1], k, "b"),
                    Generator(2**k * q[k - 1] * d[k - 1], k, "b'"),
                    Generator(2**(k + 1) * q[k - 1], k, "b''")]
        raise SpecError(f"unknown family {fam!r}")

    def generators(self, upto=None) -> list:
        """Realized generators (ranks 1..horizon, or 1..upto if given)."""
        top = self.realized_rank if upto is None else upto
        if self.max_rank is not None:
            top = min(top, self.max_rank)
        out = []
        for k in range(1, top + 1):
            out.extend(self.generators_of_rank(k))
        return out

    def realized(self, upto=None) -> tuple:
        return intset(g.value for g in self.generators(upto))

    def rank_lower_bound(self, k: int) -> int:
        """A lower bound for every generator of rank >= k."""
        if self.family in ("b1", "b1n"):
            return 3 * 2**k
        if self.family == "b2":
            return 5 * 2**k
        if self.family == "two_filtrations":
            return 3 * 2**(k + 1)
        if self.family == "not_all_holes":
            # k pairwise coprime factors > 1 have pairwise distinct primes
            out, p = 1, 2
            for _ in range(k):
                while not is_prime(p):
                    p += 1
                out *= p
                p += 1
            return out
        return 0

    def first_unrealized_value(self):
        """Smallest generator value above the horizon (None if none exist)."""
        top = self.max_rank
        h = self.realized_rank
        if top is not None and h >= top:
            return None
        best = None
        k = h + 1
        while best is None or self.rank_lower_bound(k) < best:
            if top is not None and k > top:
                break
            for g in self.generators_of_rank(k):
                if best is None or g.value < best:
                    best = g.value
            k += 1
        return best

    def covers(self, bound: int) -> bool:
        """True when every generator <= bound is realized."""
        first = self.first_unrealized_value()
        return first is None or first > bound

    def covering(self, bound: int) -> "BSetSpec":
        """A copy whose horizon realizes every generator <= bound."""
        spec = self
        while not spec.covers(bound):
            if spec.horizon >= HORIZON_CAP:
                raise InsufficientHorizon(
                    f"realizing all generators <= {bound} needs rank > {HORIZON_CAP}")
            step = max(1, spec.horizon // 2)
            spec = spec.with_horizon(min(HORIZON_CAP, spec.horizon + step))
        return spec

    # ----- validation ---------------------------------------------------
    def validate(self) -> None:
        if self.family not in FAMILIES:
            raise SpecError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.extend not in EXTEND_RULES:
            raise SpecError(f"extend must be one of {EXTEND_RULES}")
        if self.horizon < 1:
            raise SpecError("horizon must be positive")
        if self.window < 1:
            raise SpecError("window must be positive")
        fam = self.family
        if fam == "explicit":
            if any(e < 1 for e in self.elements):
                raise SpecError("explicit generators must be positive")
            if len(set(self.elements)) != len(self.elements):
                raise SpecError("explicit generators must be distinct")
        else:
            lists = self._param_lists()
            for key, vals in lists.items():
                if not vals and self.extend == "none":
                    raise SpecError(f"params.{key} is empty and extend = 'none'")
                for v in vals:
                    if v <= 1:
                        raise SpecError(f"params.{key} entries must exceed 1, got {v}")
            if fam in ("b1", "b1n", "two_filtrations"):
                for key, vals in lists.items():
                    for v in vals:
                        if v % 2 == 0:
                            raise SpecError(f"params.{key} entries must be odd, got {v}")
            if fam == "b2":
                for key, vals in lists.items():
                    for v in vals:
                        if gcd(v, 6) != 1:
                            raise SpecError(f"params.{key} entries must be coprime to 6, got {v}")
            if fam == "b1n":
                if self.N is None:
                    raise SpecError("family b1n needs params.N (a positive integer or 'inf')")
                if self.N_value is not None and self.N_value < 1:
                    raise SpecError("params.N must be positive")
            # pairwise coprimality inside each list, and across lists where required
            groups = list(lists.items())
            if fam in ("not_all_holes", "two_filtrations"):
                pooled = [(k, v) for k, vals in groups for v in vals]
                _check_pairwise(pooled)
            else:
                for key, vals in groups:
                    _check_pairwise([(key, v) for v in vals])
        check = is_primitive(self)
        if not check.ok:
            a, b = check.witness
            raise SpecError(f"realized truncation is not primitive: {a} divides {b}")

    # ----- serialisation ------------------------------------------------
    def to_dict(self) -> dict:
        out = {"family": self.family, "horizon": self.horizon, "window": self.window}
        if self.family == "explicit":
            out["params"] = {"elements": list(self.elements)}
        else:
            P = self.params(self.realized_rank)
            out["params"] = {k: list(v) for k, v in sorted(P.items())}
            if self.family == "b1n":
                out["params"]["N"] = self.N if self.N_value is None else self.N_value
            out["extend"] = self.extend
        if self.filtration != "default":
            out["filtration"] = self.filtration
        out["realized"] = [g.value for g in self.generators()]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _check_pairwise(items):
    for i, (k1, a) in enumerate(items):
        for k2, b in items[i + 1:]:
            if gcd(a, b) != 1:
                raise SpecError(f"parameters {k1}={a} and {k2}={b} are not coprime")


def spec_from_document(doc: dict, name: str = "") -> BSetSpec:
    """Build a spec from a parsed key/value document."""
    family = doc.get("family")
    if family is None:
        raise SpecError("spec document lacks a 'family' field")
    params = dict(doc.get("params", {}))
    kw = {
        "horizon": int(doc.get("horizon", DEFAULT_HORIZON)),
        "window": int(doc.get("window", 100)),
        "extend": params.pop("extend", doc.get("extend", "primes")),
        "filtration": doc.get("filtration", "default"),
        "name": name or doc.get("name", ""),
    }
    if family == "explicit":
        kw["elements"] = params.pop("elements", doc.get("elements", []))
        kw["extend"] = "none"
    for key in ("c", "d", "q"):
        if key in params:
            kw[key] = params.pop(key)
    if "N" in params:
        kw["N"] = params.pop("N")
    if params:
        raise SpecError(f"unknown parameters: {sorted(params)}")
    return BSetSpec.build(family, **kw)


# ----- operations --------------------------------------------------------

def is_primitive(spec: BSetSpec) -> Check:
    """No realized generator divides another."""
    gens = sorted(spec.realized())
    for i, a in enumerate(gens):
        for b in gens[i + 1:]:
            if b % a == 0:
                return Check(False, (a, b))
    return Check(True)


def is_taut_truncation(B) -> Check:
    """Removing any single element strictly lowers the density of multiples."""
    B = intset(B)
    full = density_of_multiples(B)
    for b in B:
        rest = [x for x in B if x != b]
        if density_of_multiples(rest) >= full:
            return Check(False, b)
    return Check(True)


def _sieve(lo, hi, classes):
    """Bytes over [lo, hi]: 0 where some (modulus, residue) class hits."""
    n = hi - lo + 1
    bits = bytearray(b"\x01") * n
    for b, res in classes:
        first = (res - lo) % b
        if first < n:
            count = (n - 1 - first) // b + 1
            bits[first::b] = bytes(count)
    return bytes(bits)


def eta_segment(spec: BSetSpec, lo: int, hi: int) -> BitWindow:
    """eta on [lo, hi]: bit k is 1 iff no generator divides k."""
    if hi < lo:
        raise ValueError("hi must be >= lo")
    reach = max(abs(lo), abs(hi))
    first = spec.first_unrealized_value()
    if first is not None and first <= reach:
        bad = next(p for p in range(lo, hi + 1) if abs(p) >= first)
        raise InsufficientHorizon(
            f"horizon {spec.horizon} leaves generator {first} unrealized; "
            f"position {bad} cannot be decided", position=bad)
    bits = _sieve(lo, hi, [(b, 0) for b in spec.realized()])
    return BitWindow(lo, bits)


def eta_window(spec: BSetSpec, lo: int, hi: int) -> BitWindow:
    """Like eta_segment, but raises the horizon as far as the window needs."""
    return eta_segment(spec.covering(max(abs(lo), abs(hi))), lo, hi)


def phi_code(spec: BSetSpec, y: OdometerVec, lo: int, hi: int, strict: bool = False) -> BitWindow:
    """The coding function: bit s is 1 iff s avoids every class bZ - y_b.

    The window is flagged certified when all generators up to
    max(|lo|, |hi|) + |shift| + (largest overridden modulus) are realized.
    """
    if hi < lo:
        raise ValueError("hi must be >= lo")
    extra = max([m for m, _ in y.overrides], default=0)
    bound = max(abs(lo), abs(hi)) + abs(y.shift) + extra
    certified = spec.covers(bound)
    if strict and not certified:
        raise InsufficientHorizon(f"phi_code window needs all generators <= {bound}")
    gens = spec.realized()
    bits = _sieve(lo, hi, [(b, -y.coord(b)) for b in gens])
    return BitWindow(lo, bits, certified)

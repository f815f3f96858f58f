"""Sliding maps on bit windows and the finite-order automorphisms F_l of B_1^N.

F_l is not a block code on bits alone: it needs the residue of the point
in the odometer modulo p_l = lcm(S_l).  Windows therefore travel together
with that residue (their phase).  For a window cut from sigma^k(eta) the
phase is k mod p_l.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from math import lcm

import numpy as np

from .arith import crt, lcm_of
from .bset import BitWindow, BSetSpec, OdometerVec, SpecError, eta_window, phi_code
from .filtration import filtration_set


class WindowTooShort(ValueError):
    pass


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class PhasedWindow:
    start: int
    bits: np.ndarray = field(compare=False)
    phase: int = 0
    modulus: int = 1

    @classmethod
    def of(cls, window: BitWindow, phase: int = 0, modulus: int = 1) -> "PhasedWindow":
        arr = np.frombuffer(window.bits, dtype=np.uint8).copy()
        return cls(window.start, arr, phase % modulus, modulus)

    @property
    def end(self) -> int:
        return self.start + len(self.bits) - 1

    def window(self) -> BitWindow:
        return BitWindow(self.start, self.bits.tobytes())

    def segment(self, lo: int, hi: int) -> np.ndarray:
        if lo < self.start or hi > self.end:
            raise IndexError(f"[{lo}, {hi}] not inside [{self.start}, {self.end}]")
        return self.bits[lo - self.start:hi - self.start + 1]


@dataclass(frozen=True)
class BlockMap:
    """Either a shift power sigma^k or F_l with parameters (c_l, p_l, q).

    `phase_blind` builds a deliberately wrong F that ignores the phase; it
    exists for mutation tests.
    """
    kind: str
    k: int = 0
    ell: int = 0
    c: int = 1
    p: int = 1
    q: int = 0
    phase_blind: bool = False

    @property
    def radius(self) -> int:
        return abs(self.k) if self.kind == "shift" else self.q

    def describe(self) -> dict:
        if self.kind == "shift":
            return {"kind": "ShiftPower", "k": self.k}
        return {"kind": "FEll", "ell": self.ell, "c": self.c, "p": self.p, "q": self.q,
                "phase_blind": self.phase_blind}


def ShiftPower(k: int) -> BlockMap:
    return BlockMap("shift", k=k)


def level_period(spec: BSetSpec, n: int) -> int:
    """p_n = lcm(S_n) for the spec's filtration."""
    return lcm_of(filtration_set(spec, n))


def FEll(spec: BSetSpec, ell: int, q: int = None, phase_blind: bool = False) -> BlockMap:
    """F_l for B_1^N: q = p_l / c_l unless overridden (overrides are for mutation tests)."""
    if spec.family != "b1n":
        raise SpecError("F_l is defined for the B_1^N family")
    N = spec.N_value
    if ell < 1 or (N is not None and ell >= N):
        raise SpecError(f"F_l needs 1 <= l < N (got l = {ell}, N = {spec.N})")
    c = spec.params(ell)["c"][ell - 1]
    p = level_period(spec, ell)
    return BlockMap("fell", ell=ell, c=c, p=p, q=p // c if q is None else q,
                    phase_blind=phase_blind)


def apply_block_map(m: BlockMap, x: PhasedWindow) -> PhasedWindow:
    """Apply m to a phased window.

    A shift power re-indexes the window and adds k to the phase.  F_l reads
    position s + q, so the output loses q positions on the right; bit s is
    x_{s+q} when s + phase lies in c_l Z and x_s otherwise.  The phase of
    F_l(x) is phase + q, which leaves the c_l Z test unchanged because c_l
    divides q.
    """
    if m.kind == "shift":
        return replace(x, start=x.start - m.k, phase=(x.phase + m.k) % x.modulus)
    if len(x.bits) <= m.q:
        raise WindowTooShort(f"window of {len(x.bits)} bits cannot feed radius {m.q}")
    n_out = len(x.bits) - m.q
    out = x.bits[:n_out].copy()
    s = np.arange(x.start, x.start + n_out, dtype=np.int64)
    phase = 0 if m.phase_blind else x.phase
    hit = (s + phase) % m.c == 0
    out[hit] = x.bits[m.q:][hit]
    modulus = lcm(x.modulus, m.p)
    return PhasedWindow(x.start, out, (x.phase + m.q) % modulus, modulus)


def _eta_phased(spec, lo, hi, m: BlockMap, shift: int = 0) -> PhasedWindow:
    """sigma^shift(eta) on [lo, hi] with its phase."""
    w = eta_window(spec, lo + shift, hi + shift)
    return PhasedWindow(lo, np.frombuffer(w.bits, dtype=np.uint8).copy(), shift % m.p, m.p)


@dataclass
class Verdict:
    ok: bool
    status: str
    witness: object = None
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok

    def to_dict(self):
        w = self.witness
        return {"ok": self.ok, "status": self.status,
                "witness": list(w) if isinstance(w, tuple) else w, "details": self.details}


def verify_commutation(m: BlockMap, spec: BSetSpec, k_range, window: int) -> Verdict:
    """F(sigma^k eta) = sigma^k(F eta) on [-window, window - radius] for every k in k_range."""
    lo, hi = -window, window
    for k in k_range:
        left = apply_block_map(m, _eta_phased(spec, lo, hi, m, k))
        base = apply_block_map(m, _eta_phased(spec, lo + k, hi + k, m, 0))
        right = apply_block_map(ShiftPower(k), base)
        a = left.segment(lo, left.end)
        b = right.segment(lo, right.end)
        diff = np.flatnonzero(a != b)
        if len(diff):
            return Verdict(False, "mismatch", (k, int(lo + diff[0])),
                           {"window": window, "map": m.describe()})
    return Verdict(True, "confirmed", None,
                   {"window": window, "k_range": [min(k_range), max(k_range)], "map": m.describe()})


def verify_order(m: BlockMap, spec: BSetSpec, order: int, window: int = None) -> Verdict:
    """F^order = id on the surviving part of an eta window, and F^i != id for 0 < i < order."""
    if order < 1:
        raise ValueError("order must be positive")
    width = 4 * order * m.radius if window is None else window
    if width <= order * m.radius:
        raise WindowTooShort(f"window {width} cannot absorb {order} applications of radius {m.radius}")
    lo, hi = -(width // 2), width - width // 2
    eta = _eta_phased(spec, lo, hi, m)
    x = eta
    early = []
    for i in range(1, order + 1):
        x = apply_block_map(m, x)
        diff = np.flatnonzero(x.bits != eta.segment(x.start, x.end))
        if i < order:
            if not len(diff):
                return Verdict(False, "refuted", ("F^i = id", i),
                               {"window": width, "map": m.describe()})
            early.append((i, int(x.start + diff[0])))
        elif len(diff):
            return Verdict(False, "refuted", ("F^order != id", int(x.start + diff[0])),
                           {"window": width, "map": m.describe(), "non_identity_powers": early})
    return Verdict(True, "confirmed", None,
                   {"window": width, "order": order, "map": m.describe(),
                    "non_identity_powers": early})


def rotation_point(m: BlockMap, spec: BSetSpec) -> OdometerVec:
    """y_F: residue q at the modulus 2^(l-1) c_l^2, zero elsewhere."""
    return OdometerVec.from_dict({2 ** (m.ell - 1) * m.c ** 2: m.q})


def verify_rotation(m: BlockMap, spec: BSetSpec, window: int, y: OdometerVec = None) -> Verdict:
    """F(eta) = phi(y_F) on [-window, window]."""
    y = rotation_point(m, spec) if y is None else y
    lo, hi = -window, window
    fx = apply_block_map(m, _eta_phased(spec, lo, hi + m.q, m))
    extra = max([mod for mod, _ in y.overrides], default=0)
    wide = spec.covering(max(abs(lo), abs(hi)) + abs(y.shift) + extra)
    phi = phi_code(wide, y, lo, hi)
    a = fx.segment(lo, hi)
    b = np.frombuffer(phi.bits, dtype=np.uint8)
    diff = np.flatnonzero(a != b)
    details = {"window": window, "y": [list(o) for o in y.overrides], "certified": phi.certified}
    if len(diff):
        return Verdict(False, "mismatch", int(lo + diff[0]), details)
    return Verdict(True, "confirmed", None, details)


def window_shift_z(spec: BSetSpec, m: BlockMap, t: int) -> int:
    pt = level_period(spec, t)
    sol = crt([(0, pt // m.c), (m.q, m.p)])
    if sol is None:
        raise ArithmeticError("CRT system for z is inconsistent")
    return sol[0]


def verify_window_shift(m: BlockMap, spec: BSetSpec, n: int, t: int) -> Verdict:
    """(F eta)[-n, n] = eta[-n + z, n + z] with z = 0 mod p_t / c_l and z = q mod p_l."""
    if t < m.ell or 2 ** t <= n:
        raise PreconditionError(f"need t >= l and 2^t > n (t = {t}, l = {m.ell}, n = {n})")
    z = window_shift_z(spec, m, t)
    fx = apply_block_map(m, _eta_phased(spec, -n, n + m.q, m))
    a = fx.segment(-n, n)
    b = np.frombuffer(eta_window(spec, -n + z, n + z).bits, dtype=np.uint8)
    diff = np.flatnonzero(a != b)
    details = {"z": z, "n": n, "t": t}
    if len(diff):
        return Verdict(False, "mismatch", int(-n + diff[0]), details)
    return Verdict(True, "confirmed", None, details)

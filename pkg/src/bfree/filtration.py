"""Filtrations S_1 <= S_2 <= ... of a B-set, the sets A_S and their sources."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from math import gcd

from .arith import intset, lcm_of, primitivize
from .bset import BSetSpec

MEMBER = "member-of-S"
FINITE = "finite-source"
INFINITE = "infinite-source"
DEFAULT_THRESHOLD = 3


class LevelCapExceeded(ValueError):
    pass


def level_cap() -> int:
    return int(os.environ.get("BFREE_LEVEL_CAP", "12"))


@dataclass(frozen=True)
class AEntry:
    value: int
    cls: str
    sources: int


@dataclass(frozen=True)
class LevelData:
    n: int
    S: tuple
    ell: int
    A: tuple
    saturated: bool
    heuristic: bool = False
    stable: bool = True
    probe: int = 0
    spec: BSetSpec = field(default=None, compare=False, repr=False)

    @property
    def A_values(self) -> tuple:
        return tuple(e.value for e in self.A)

    @property
    def A_minus_S(self) -> tuple:
        return tuple(e.value for e in self.A if e.cls != MEMBER)

    @property
    def A_inf(self) -> tuple:
        return tuple(e.value for e in self.A if e.cls == INFINITE)

    @property
    def A_inf_p(self) -> tuple:
        return primitivize(self.A_inf)

    def entry(self, value: int) -> AEntry:
        for e in self.A:
            if e.value == value:
                return e
        raise KeyError(value)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "S": list(self.S),
            "ell": self.ell,
            "A": [{"value": e.value, "class": e.cls, "sources": e.sources} for e in self.A],
            "A_inf_p": list(self.A_inf_p),
            "saturated": self.saturated,
            "classification": "heuristic" if self.heuristic else "family",
            "stable": self.stable,
            "probe_horizon": self.probe,
        }


def filtration_set(spec: BSetSpec, n: int, variant: str = None) -> tuple:
    """S_n for the spec's family (first n elements for explicit specs)."""
    variant = variant or spec.filtration
    fam = spec.family
    if fam == "explicit":
        if n > len(spec.elements):
            raise LevelCapExceeded(f"explicit spec has only {len(spec.elements)} elements")
        return intset(spec.elements[:n])
    top = spec.max_rank
    need = n + 1 if (fam == "two_filtrations" and variant == "primed") else n
    if top is not None and need > top:
        raise LevelCapExceeded(f"level {n} needs rank {need} but the family stops at {top}")
    gens = [g for k in range(1, n + 1) for g in spec.generators_of_rank(k)]
    if fam == "two_filtrations" and variant == "primed":
        gens += [g for g in spec.generators_of_rank(n + 1) if g.tag == "b"]
    return intset(g.value for g in gens)


def _source_counts(spec: BSetSpec, S, ell, upto):
    counts = {}
    for g in spec.generators(upto):
        if g.value in S:
            continue
        a = gcd(g.value, ell)
        counts[a] = counts.get(a, 0) + 1
    return counts


def _build_level(spec, n, S, stab_threshold, probe_horizon):
    S = intset(S)
    ell = lcm_of(S)
    level = LevelData(n=n, S=S, ell=ell, A=(), saturated=False, spec=spec)
    level = classify_A_infinity(level, spec, stab_threshold, probe_horizon)
    sat = saturated_set(spec, S, ell)
    return replace(level, saturated=(sat == S))


def default_filtration(spec: BSetSpec, n_max: int, variant: str = None,
                       stab_threshold: int = DEFAULT_THRESHOLD, probe_horizon: int = None) -> list:
    """Levels 1..n_max of the family's filtration, with classified A sets."""
    if n_max > level_cap():
        raise LevelCapExceeded(f"n_max = {n_max} exceeds the level cap {level_cap()}")
    out = []
    for n in range(1, n_max + 1):
        S = filtration_set(spec, n, variant)
        out.append(_build_level(spec, n, S, stab_threshold, probe_horizon))
    return out


def saturated_set(spec: BSetSpec, S, ell=None) -> tuple:
    """S^sat = A_S cut with B, i.e. every generator dividing lcm(S)."""
    ell = lcm_of(S) if ell is None else ell
    wide = spec.covering(ell)
    return intset(b for b in wide.realized() if ell % b == 0)


def saturate(level: LevelData, spec: BSetSpec) -> LevelData:
    """Replace S by S^sat; lcm(S) is unchanged."""
    sat = saturated_set(spec, level.S, level.ell)
    if lcm_of(sat) != level.ell:
        raise ArithmeticError("saturation changed lcm(S)")
    if sat == level.S:
        return replace(level, saturated=True)
    fresh = _build_level(spec, level.n, sat, DEFAULT_THRESHOLD, level.probe or None)
    return replace(fresh, saturated=True)


def classify_A_infinity(level: LevelData, spec: BSetSpec,
                        stab_threshold: int = DEFAULT_THRESHOLD, probe_horizon: int = None) -> LevelData:
    """Tag each element of A_S as member-of-S, finite-source or infinite-source.

    For infinite families a value is infinite-source when it has at least
    `stab_threshold` sources among generators of rank <= probe_horizon and
    the verdict does not change when the probe horizon doubles.  Explicit
    and finite specs count every generator; explicit ones are flagged as
    heuristic.
    """
    S, ell = level.S, level.ell
    top_rank = max((g.rank for g in spec.generators(level.n + 1)
                    if g.value in S), default=level.n)
    if probe_horizon is None:
        probe_horizon = max(spec.realized_rank, top_rank + 2 * stab_threshold + 2)
    heuristic = spec.family == "explicit"
    stable = True
    if spec.finite:
        counts = _source_counts(spec, S, ell, spec.max_rank)
        wide = counts
    else:
        counts = _source_counts(spec, S, ell, probe_horizon)
        wide = _source_counts(spec, S, ell, 2 * probe_horizon)
    entries = [AEntry(s, MEMBER, 0) for s in S]
    for a in sorted(set(counts) | set(wide)):
        if a in S:
            continue
        near, far = counts.get(a, 0), wide.get(a, 0)
        if spec.finite and not heuristic:
            cls = FINITE
        else:
            tag_near, tag_far = near >= stab_threshold, far >= stab_threshold
            if tag_near != tag_far or a not in counts:
                stable = False
            cls = INFINITE if tag_far else FINITE
        entries.append(AEntry(a, cls, far))
    entries.sort(key=lambda e: e.value)
    return replace(level, A=tuple(entries), heuristic=heuristic, stable=stable,
                   probe=probe_horizon)

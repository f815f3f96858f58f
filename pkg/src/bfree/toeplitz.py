"""Directly specified Toeplitz sequences: the Garcia-Hedlund variant and user skeletons.

A direct spec gives, for each level n, a period p_n and the set of holes
H_n as a p_n-periodic set, together with a rule for filling the positions
that stop being holes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bset import BitWindow, SpecError
from .holes import ResidueSet


class DirectLevel:
    """One level of a direct spec; quacks like the B-free hole views."""

    def __init__(self, n: int, p: int, holes: ResidueSet):
        self.n = n
        self.p = p
        self._holes = holes

    def holes(self) -> ResidueSet:
        return self._holes

    def period(self) -> int:
        return self._holes.modulus

    def project(self, g: int) -> ResidueSet:
        return self._holes.project(g)

    def __repr__(self):
        return f"DirectLevel(n={self.n}, p={self.p}, holes={self._holes!r})"


def gh_r(n: int) -> int:
    """r_n = 1 + 4 + ... + 4^(n-1)."""
    return (4**n - 1) // 3


@dataclass(frozen=True)
class GHVariant:
    """p_n = 2^(2n+1), H_n = 4^n Z - r_n, alternating fill.

    The position 4^(n-1) (4t - k) - r_(n-1) with k in {0, 2, 3} is filled
    at level n with the bit t mod 2; k = 1 gives the holes of level n.
    """
    name: str = "gh"
    kind: str = "gh_variant"

    def period(self, n: int) -> int:
        _level_gate(n)
        return 2 ** (2 * n + 1)

    def holes(self, n: int) -> ResidueSet:
        p = self.period(n)
        step = 4**n
        return ResidueSet(p, (j * step - gh_r(n) for j in range(p // step)))

    def bit(self, x: int, budget: int):
        """(bit, level) for position x, or (None, None) if still a hole at `budget`."""
        for n in range(1, budget + 1):
            m = (x + gh_r(n - 1)) // 4 ** (n - 1)
            k = (-m) % 4
            if k == 1:
                continue
            t = (m + k) // 4
            return t % 2, n
        return None, None

    def to_dict(self):
        return {"family": self.kind, "name": self.name}


@dataclass(frozen=True)
class UserSkeleton:
    """Explicit levels: (period, word) with the word over {0, 1, ?}; '?' marks holes."""
    levels: tuple
    name: str = "skeleton"
    kind: str = "skeleton"
    notes: tuple = field(default=("nesting checked on the given levels only; user-asserted beyond",))

    def __post_init__(self):
        if not self.levels:
            raise SpecError("a skeleton needs at least one level")
        prev = None
        for i, (p, word) in enumerate(self.levels, start=1):
            if len(word) != p or set(word) - set("01?"):
                raise SpecError(f"level {i}: word must have length {p} over 0, 1, ?")
            if prev is not None:
                pp, pw = prev
                if p % pp:
                    raise SpecError(f"level {i}: period {p} is not a multiple of {pp}")
                for x, ch in enumerate(word):
                    old = pw[x % pp]
                    if old != "?" and ch != old:
                        raise SpecError(f"level {i}: position {x} reassigned from {old} to {ch}")
            prev = (p, word)

    def period(self, n: int) -> int:
        _level_gate(n, len(self.levels))
        return self.levels[n - 1][0]

    def holes(self, n: int) -> ResidueSet:
        p = self.period(n)
        word = self.levels[n - 1][1]
        return ResidueSet(p, (i for i, ch in enumerate(word) if ch == "?"))

    def bit(self, x: int, budget: int):
        for n in range(1, min(budget, len(self.levels)) + 1):
            p, word = self.levels[n - 1]
            ch = word[x % p]
            if ch != "?":
                return int(ch), n
        return None, None

    def to_dict(self):
        return {"family": self.kind, "name": self.name,
                "levels": [[p, w] for p, w in self.levels]}


def _level_gate(n: int, top: int = None):
    if n < 1:
        raise ValueError("levels start at 1")
    if top is not None and n > top:
        raise ValueError(f"the skeleton only has {top} levels")


def direct_holes(spec, n: int) -> ResidueSet:
    return spec.holes(n)


def direct_levels(spec, n_max: int) -> list:
    return [DirectLevel(n, spec.period(n), spec.holes(n)) for n in range(1, n_max + 1)]


def direct_eta_segment(spec, lo: int, hi: int, level_budget: int):
    """(BitWindow, unresolved positions) on [lo, hi]; unresolved bits read as 0."""
    if level_budget < 1:
        raise ValueError("level_budget must be at least 1")
    if hi < lo:
        raise ValueError("empty window")
    bits = bytearray()
    unresolved = []
    for x in range(lo, hi + 1):
        b, _ = spec.bit(x, level_budget)
        if b is None:
            unresolved.append(x)
            b = 0
        bits.append(b)
    return BitWindow(lo, bytes(bits), certified=not unresolved), unresolved


def two_hole_skeleton(n_levels: int) -> UserSkeleton:
    """A skeleton satisfying condition (*) with two holes per period.

    p_n = 4 * 3^(n-1); the holes of level n are r_n and r_n + 2 with
    r_1 = 1 and r_(n+1) = r_n + p_n, so each level keeps the middle block
    of holes and fills the outer two blocks with opposite patterns.
    """
    p, word = 4, "0?1?"
    levels = [(p, word)]
    r = 1
    for _ in range(1, n_levels):
        chars = list(word * 3)
        fills = {0: "01", 2: "10"}
        for s, pattern in fills.items():
            chars[s * p + r] = pattern[0]
            chars[s * p + r + 2] = pattern[1]
        r += p
        p *= 3
        word = "".join(chars)
        levels.append((p, word))
    return UserSkeleton(tuple(levels), name="two-hole-skeleton")


def direct_spec_from_document(doc: dict, name: str = None):
    family = doc.get("family")
    if family == "gh_variant":
        return GHVariant(name=name or doc.get("name", "gh"))
    if family == "skeleton":
        levels = tuple((int(p), str(w)) for p, w in doc.get("levels", []))
        return UserSkeleton(levels, name=name or doc.get("name", "skeleton"))
    raise SpecError(f"not a direct Toeplitz family: {family!r}")

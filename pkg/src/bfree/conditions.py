"""Finite-level checks of the separation, disjointness and centralizer conditions.

Every "holds" verdict is qualified by the budget it was checked on, and
every "violated" verdict carries witnesses that `replay_witness` can
re-check from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

import numpy as np

from .arith import gcd_of, intset, totient
from .holes import (RESIDUE_CAP, ResidueSet, essential_holes_iterative, holes_level,
                    minimal_period, period_formula_singleton, view)

HOLDS = "holds-up-to-budget"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"

DEFAULT_BETA_BUDGET = 10**6


@dataclass
class ConditionVerdict:
    condition: str
    verdict: str
    witnesses: list = field(default_factory=list)
    budget: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "verdict": self.verdict,
            "witnesses": [list(w) if isinstance(w, tuple) else w for w in self.witnesses],
            "budget": self.budget,
            "details": self.details,
        }


@dataclass
class HoleLevel:
    """Holes and essential holes at one level, with their minimal periods."""
    n: int
    p: int
    holes: ResidueSet
    essential: ResidueSet = None
    certificate: object = None

    @property
    def tau(self) -> int:
        return minimal_period(self.holes.reduced()).tau

    @property
    def tau_tilde(self) -> int:
        return minimal_period(self.essential.reduced()).tau


def hole_profile(levels, upto: int = None, stab_window: int = 2) -> list:
    """HoleLevel records for every level n <= upto whose essential set can be computed."""
    views = sorted((view(lv) for lv in levels), key=lambda v: v.n)
    top = views[-1].n
    upto = top if upto is None else upto
    out = []
    for v in views:
        if v.n > upto:
            break
        lv = next(l for l in levels if l.n == v.n)
        H = holes_level(lv) if hasattr(lv, "S") else v.holes()
        E, cert = essential_holes_iterative(levels, v.n, top, stab_window)
        out.append(HoleLevel(v.n, v.p, H, E, cert))
    return out


def _shift_mask(mask: np.ndarray, k: int) -> np.ndarray:
    """m[x] = mask[(x + k) mod len]."""
    return np.roll(mask, -(k % len(mask)))


def _sets_by_level(levels, attr):
    out = {}
    for lv in levels:
        s = getattr(lv, attr)
        if s is None:
            raise ValueError(f"level {lv.n} has no {attr} set")
        out[lv.n] = (lv.p, s)
    return out


# ----- (Sh) ----------------------------------------------------------------

def check_Sh(hole_levels, k_max: int, n_max: int = None, attr: str = "holes") -> ConditionVerdict:
    """H_n and H_n - k disjoint for 0 < |k| <= k_max from some level on.

    The intersection is symmetric in k, so only positive k are scanned.
    Witnesses are (k, n, x) with x and x + k both holes at level n.
    """
    sets = _sets_by_level(hole_levels, attr)
    n_max = max(sets) if n_max is None else n_max
    ns = sorted(n for n in sets if n <= n_max)
    name = "Sh" if attr == "holes" else "Seh"
    witnesses, first_clear = [], {}
    for k in range(1, k_max + 1):
        clear_from = None
        for n in ns:
            X = sets[n][1]
            m = X.mask()
            both = np.flatnonzero(m & _shift_mask(m, k))
            if len(both):
                witnesses.append((k, n, int(both[0])))
                clear_from = None
            elif clear_from is None:
                clear_from = n
        first_clear[k] = clear_from
    bad = [k for k, v in first_clear.items() if v is None]
    verdict = VIOLATED if bad else HOLDS
    kept = [w for w in witnesses if w[0] in bad]
    return ConditionVerdict(name, verdict, kept,
                            {"k_max": k_max, "levels": ns},
                            {"least_clear_level": {str(k): v for k, v in first_clear.items()}})


def check_Seh(ess_hole_levels, k_max: int, n_max: int = None) -> ConditionVerdict:
    """The essential-hole version of check_Sh."""
    return check_Sh(ess_hole_levels, k_max, n_max, attr="essential")


# ----- (Seh') and (DSeh') ----------------------------------------------------

def _classes_ok(X: ResidueSet, g: int, target: np.ndarray) -> np.ndarray:
    """For r mod g: the class r + gZ meets X, and X inside it lies in `target`.

    X and target live modulo X.modulus and g divides it.
    """
    m = X.mask()
    Q = len(m)
    rows_x = m.reshape(Q // g, g)
    rows_bad = (m & ~target).reshape(Q // g, g)
    return rows_x.any(axis=0) & ~rows_bad.any(axis=0)


def _seh_prime_residues(sets, k, N, n_max):
    """Residues r (as a ResidueSet mod a divisor of p_N) violating (Seh') for k."""
    pN = sets[N][0]
    acc = ResidueSet(1, (0,))
    for n in range(N, n_max + 1):
        X = sets[n][1]
        g = gcd(pN, X.modulus)
        m = X.mask()
        ok = _classes_ok(X, g, _shift_mask(m, k))
        acc = acc & ResidueSet.from_mask(ok)
        if not acc.residues:
            break
    return acc


def check_Seh_prime(ess_hole_levels, k_max: int, N_max: int, n_max: int = None) -> ConditionVerdict:
    """Search for progressions r + p_N Z with
    empty != (r + p_N Z) cap H~_n  inside  H~_n - k  for all N <= n <= n_max.
    """
    sets = _sets_by_level(ess_hole_levels, "essential")
    n_max = max(sets) if n_max is None else n_max
    witnesses = []
    for N in sorted(n for n in sets if n <= N_max):
        for k in _signed(k_max):
            acc = _seh_prime_residues(sets, k, N, n_max)
            if acc.residues:
                witnesses.append((k, N, acc.residues[0]))
    budget = {"k_max": k_max, "N_max": N_max, "n_max": n_max}
    return ConditionVerdict("Seh'", VIOLATED if witnesses else HOLDS, witnesses, budget)


def _signed(k_max):
    for k in range(1, k_max + 1):
        yield k
        yield -k


class _DSehLevel:
    """Precomputed data for one level of the (DSeh') search."""

    def __init__(self, X: ResidueSet, pN: int):
        self.Q = X.modulus
        self.mask = X.mask()
        self.xs = np.flatnonzero(self.mask)
        self.g = gcd(pN, self.Q)
        self.rx = self.xs % self.g

    def admissible(self, betas: np.ndarray, k: int, rset: ResidueSet) -> np.ndarray:
        """Boolean (len(betas), g): class r meets X and every x there has
        x + beta and x + 2 beta + k in X.  Only classes compatible with
        the admissible set `rset` from earlier levels are examined."""
        Q = self.Q
        h = gcd(rset.modulus, self.g)
        keep = rset.project(h).mask()[self.xs % h]
        xs, rx = self.xs[keep], self.rx[keep]
        b = (betas % Q)[:, None]
        hit = self.mask[(xs[None, :] + b) % Q] & self.mask[(xs[None, :] + 2 * b + k) % Q]
        bad = np.zeros((len(betas), self.g), dtype=bool)
        rows, cols = np.nonzero(~hit)
        bad[rows, rx[cols]] = True
        meets = np.zeros(self.g, dtype=bool)
        meets[rx] = True
        return meets[None, :] & ~bad


def check_DSeh_prime(ess_hole_levels, k_max: int, N_max: int, n_max: int = None,
                     beta_budget: int = DEFAULT_BETA_BUDGET, beta_fixed: int = None) -> ConditionVerdict:
    """Violation search for (DSeh') over coherent beta residues.

    beta is refined level by level: at level n only beta modulo the period
    Q_n of H~_n matters, and Q_n divides p_n, so a coherent beta is a
    residue modulo lcm(Q_N, ..., Q_n).  Branches whose admissible r set
    becomes empty are pruned.  `beta_fixed` pins beta to one integer (0
    recovers (Seh')).  Running out of budget gives 'inconclusive'.
    """
    sets = _sets_by_level(ess_hole_levels, "essential")
    n_max = max(sets) if n_max is None else n_max
    witnesses = []
    evaluations = 0
    exhausted = False
    for N in sorted(n for n in sets if n <= N_max):
        pN = sets[N][0]
        data = {n: _DSehLevel(sets[n][1], pN) for n in range(N, n_max + 1)}
        for k in _signed(k_max):
            # frontier entries: (beta, modulus of beta, admissible r set)
            start = 0 if beta_fixed is None else beta_fixed
            frontier = [(start, 1, ResidueSet(1, (0,)))]
            for n in range(N, n_max + 1):
                lv = data[n]
                nxt = []
                for beta, bmod, rset in frontier:
                    if beta_fixed is None:
                        M = lcm(bmod, lv.Q)
                        lifts = np.arange(beta, M, bmod, dtype=np.int64)
                    else:
                        M = bmod
                        lifts = np.array([beta], dtype=np.int64)
                    if evaluations + len(lifts) > beta_budget:
                        exhausted = True
                        break
                    evaluations += len(lifts)
                    ok = lv.admissible(lifts, k, rset)
                    for i in np.flatnonzero(ok.any(axis=1)):
                        r_ok = rset & ResidueSet.from_mask(ok[i])
                        if r_ok.residues:
                            nxt.append((int(lifts[i]), M, r_ok))
                frontier = nxt
                if exhausted or not frontier:
                    break
            if exhausted:
                break
            if frontier:
                beta, bmod, rset = frontier[0]
                witnesses.append((k, N, rset.residues[0], beta, bmod))
        if exhausted:
            break
    budget = {"k_max": k_max, "N_max": N_max, "n_max": n_max,
              "beta_budget": beta_budget, "beta_evaluations": evaluations,
              "beta_fixed": beta_fixed}
    if witnesses:
        verdict = VIOLATED
    elif exhausted:
        verdict = INCONCLUSIVE
    else:
        verdict = HOLDS
    return ConditionVerdict("DSeh'", verdict, witnesses, budget)


# ----- condition (*) ---------------------------------------------------------

def check_condition_star(hole_levels, n_max: int = None) -> ConditionVerdict:
    """For each n < n_max and block [s p_n, (s+1) p_n) inside [0, p_{n+1}):
    the block's level-n holes all stay holes at level n+1, or the block has
    no level-(n+1) holes.  Witnesses are (n, s).
    """
    sets = _sets_by_level(hole_levels, "holes")
    n_max = max(sets) if n_max is None else n_max
    ns = sorted(n for n in sets if n <= n_max)
    witnesses, skipped = [], []
    for n, n1 in zip(ns, ns[1:]):
        p, H = sets[n]
        p1, H1 = sets[n1]
        if p1 > RESIDUE_CAP:
            skipped.append(n)
            continue
        a, b = H.mask(p1).reshape(p1 // p, p), H1.mask(p1).reshape(p1 // p, p)
        kept = ~(a & ~b).any(axis=1)
        empty = ~b.any(axis=1)
        bad = np.flatnonzero(~(kept | empty))
        if len(bad):
            witnesses.append((n, int(bad[0])))
    verdict = VIOLATED if witnesses else (INCONCLUSIVE if skipped else HOLDS)
    return ConditionVerdict("*", verdict, witnesses, {"levels": ns},
                            {"skipped_levels": skipped} if skipped else {})


# ----- (TI), totient sums, Heilbronn-Rohrbach ----------------------------------

def _A_sets(levels, A=None):
    if A is not None:
        return {n: intset(v) for n, v in A.items()}
    return {lv.n: lv.A_inf_p for lv in levels}


def check_TI(levels, n_max: int = None, A: dict = None, ess_hole_levels=None) -> ConditionVerdict:
    """Trivial intersection of the subgroups gcd(A_n) Z.

    Holds at budget when gcd(A_n) strictly increases along a divisibility
    chain; violated when it stays put over the last two levels and the
    essential holes lie in M_{A_n} there.
    """
    As = _A_sets(levels, A)
    ns = sorted(n for n in As if n_max is None or n <= n_max)
    gs = [gcd_of(As[n]) for n in ns]
    chain = all(g2 % g1 == 0 and g2 > g1 for g1, g2 in zip(gs, gs[1:]))
    details = {"gcds": {str(n): g for n, g in zip(ns, gs)}}
    budget = {"levels": ns}
    if len(ns) >= 2 and chain and gs[0] > 0:
        return ConditionVerdict("TI", HOLDS, [], budget, details)
    if len(ns) >= 2 and gs[-1] == gs[-2]:
        n = ns[-1]
        if ess_hole_levels is not None:
            E = next(h.essential for h in ess_hole_levels if h.n == n)
            from .holes import multiples_difference
            inside = E.issubset(multiples_difference(As[n], ()) if As[n] else ResidueSet(1, ()))
            details["essential_inside_M_A"] = inside
            if inside:
                return ConditionVerdict("TI", VIOLATED, [(n, gs[-1])], budget, details)
            return ConditionVerdict("TI", INCONCLUSIVE, [], budget, details)
        return ConditionVerdict("TI", VIOLATED, [(n, gs[-1])], budget, details)
    return ConditionVerdict("TI", INCONCLUSIVE, [], budget, details)


def totient_sums(levels, n: int, A: dict = None):
    """(sum of 1/phi(a') over A_n, [(a, sum of 1/phi(a'^{/a}) over a' != a)])."""
    An = _A_sets(levels, A)[n]
    full = sum((Fraction(1, totient(a)) for a in An), Fraction(0))
    per = []
    for a in An:
        s = sum((Fraction(1, totient(b // gcd(b, a))) for b in An if b != a), Fraction(0))
        per.append((a, s))
    return full, per


def totient_trend(levels, A: dict = None) -> list:
    """Per level: (n, full sum, largest per-a sum)."""
    rows = []
    for n in sorted(_A_sets(levels, A)):
        full, per = totient_sums(levels, n, A)
        rows.append((n, full, max((s for _, s in per), default=Fraction(0))))
    return rows


def heilbronn_rohrbach_bound(level) -> Fraction:
    """1 - prod(1 - 1/a) over A^{inf,p}; an upper bound for the Haar measure of the boundary."""
    prod = Fraction(1)
    for a in level.A_inf_p:
        prod *= Fraction(a - 1, a)
    return 1 - prod


# ----- centralizer ---------------------------------------------------------------

def gcd_graph_components(A, radius: int) -> list:
    """Connected components of the graph on A with edges gcd(a, a') > 2 * radius."""
    A = list(intset(A))
    parent = list(range(len(A)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(A)):
        for j in range(i + 1, len(A)):
            if gcd(A[i], A[j]) > 2 * radius:
                parent[find(i)] = find(j)
    groups = {}
    for i, a in enumerate(A):
        groups.setdefault(find(i), []).append(a)
    return sorted(groups.values())


def _component_periods_merge(level, comps, radius) -> bool:
    # Components whose essential-hole pieces share a period factor above 2m
    # cannot be told apart by a radius-m block code; treat them as merged.
    if len(comps) < 2:
        return True
    periods = []
    for comp in comps:
        P = 1
        for a in comp:
            P = lcm(P, period_formula_singleton(a, level.S))
        periods.append(P)
    return gcd_of(periods) > 2 * radius


def centralizer_report(levels, ess_hole_levels, radius: int = 1) -> dict:
    """Finite-level evidence on the centralizer.

    Reports p_n / tau~_n, its minimum M (a proxy for the liminf), the (TI)
    verdict, the gcd-graph connectivity with block-code radius `radius`
    and the essential-hole density against 1 / sqrt(p_n).
    """
    rows = []
    for h in ess_hole_levels:
        tt = h.tau_tilde
        dens = Fraction(len(h.essential), h.essential.modulus)
        rows.append({"n": h.n, "p": h.p, "tau_tilde": tt, "ratio": h.p // tt,
                     "density": str(dens),
                     "density_times_sqrt_p": float(dens) * (h.p ** 0.5)})
    ratios = [r["ratio"] for r in rows]
    M = min(ratios) if ratios else None
    bfree = all(hasattr(lv, "S") for lv in levels)
    paths = {}
    caveats = ["holds-verdicts are finite-level evidence only",
               "M is the minimum over computed levels, a proxy for the liminf"]
    if bfree:
        ti = check_TI(levels, max(h.n for h in ess_hole_levels), ess_hole_levels=ess_hole_levels)
        paths["TI"] = ti.holds
        graph = {}
        for lv in levels:
            if lv.n > max(h.n for h in ess_hole_levels):
                continue
            comps = gcd_graph_components(lv.A_inf_p, radius)
            graph[lv.n] = {"components": comps,
                           "merged": len(comps) == 1 or _component_periods_merge(lv, comps, radius)}
        paths["gcd_graph_connected"] = all(len(g["components"]) == 1 for g in graph.values())
        paths["component_period_merge"] = all(g["merged"] for g in graph.values())
        caveats.append("A^inf classification is a horizon heuristic")
        extra = {"TI": ti.to_dict(),
                 "gcd_graph": {str(n): g for n, g in graph.items()},
                 "totient_trend": [[n, str(f), str(m)] for n, f, m in totient_trend(levels)]}
    else:
        extra = {}
    d = [r["density_times_sqrt_p"] for r in rows]
    paths["density"] = len(d) >= 2 and all(y < x for x, y in zip(d, d[1:])) and d[-1] < 1
    growing = len(ratios) >= 3 and all(y > x for x, y in zip(ratios, ratios[1:]))
    any_path = any(paths.values())
    if growing:
        conclusion = "no bound deducible (p_n / tau~_n grows over computed levels)"
    elif any_path and M == 1:
        conclusion = "trivial (conditional on classification)"
    elif any_path:
        conclusion = f"torsion cyclic, order divides {M}"
    else:
        conclusion = "inconclusive"
    report = {"levels": rows, "M_hat": M, "radius": radius, "paths": paths,
              "conclusion": conclusion, "caveats": caveats}
    report.update(extra)
    return report


# ----- witness replay -------------------------------------------------------------

def replay_witness(verdict: ConditionVerdict, hole_levels) -> bool:
    """Re-check every witness of a verdict by direct membership tests."""
    by_n = {h.n: h for h in hole_levels}
    for w in verdict.witnesses:
        if verdict.condition in ("Sh", "Seh"):
            k, n, x = w
            X = by_n[n].holes if verdict.condition == "Sh" else by_n[n].essential
            if not (x in X and x + k in X):
                return False
        elif verdict.condition == "*":
            n, s = w
            ns = sorted(by_n)
            n1 = ns[ns.index(n) + 1]
            p = by_n[n].p
            block = range(s * p, (s + 1) * p)
            H, H1 = by_n[n].holes, by_n[n1].holes
            lost = any(x in H and x not in H1 for x in block)
            present = any(x in H1 for x in block)
            if not (lost and present):
                return False
        elif verdict.condition in ("Seh'", "DSeh'"):
            if verdict.condition == "Seh'":
                k, N, r = w
                beta = 0
            else:
                k, N, r, beta, _ = w
            pN = by_n[N].p
            for n in sorted(by_n):
                if n < N or n > verdict.budget["n_max"]:
                    continue
                X = by_n[n].essential
                span = lcm(pN, X.modulus) // pN
                hits = [x for x in (r + j * pN for j in range(span)) if x in X]
                if not hits:
                    return False
                if any(x + beta not in X or x + 2 * beta + k not in X for x in hits):
                    return False
        elif verdict.condition == "TI":
            continue
    return True

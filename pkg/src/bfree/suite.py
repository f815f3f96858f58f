"""The bundled example suite: closed-form checks on each bundled family.

Each runner returns an ExampleResult whose checks compare computed values
with the closed forms known for that family.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from math import gcd

from . import conditions as cond
from .automorphism import (FEll, verify_commutation, verify_order, verify_rotation,
                           verify_window_shift)
from .complexity import crt_witnesses, first_n_with_j, replay_certificate, rho_profile
from .essential import essential_holes_arithmetic
from .filtration import default_filtration
from .holes import (ResidueSet, essential_holes_iterative, holes_level, minimal_period,
                    multiples_difference, period_formula_union)
from .oracle import naive_holes
from .specfile import load_spec
from .toeplitz import direct_levels, gh_r


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: object = None

    def to_dict(self):
        return {"check": self.name, "ok": bool(self.ok), "detail": self.detail}


@dataclass
class ExampleResult:
    example: str
    checks: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks)

    def add(self, name, ok, detail=None):
        self.checks.append(CheckResult(name, bool(ok), detail))

    def to_dict(self):
        return {"example": self.example, "ok": self.ok, "seconds": round(self.seconds, 3),
                "checks": [c.to_dict() for c in self.checks]}


def tau(rs: ResidueSet) -> int:
    return minimal_period(rs.reduced()).tau


# ----- runners ---------------------------------------------------------------

def run_b1(res: ExampleResult):
    spec = load_spec("b1")
    levels = default_filtration(spec, 6)
    for n in range(1, 5):
        lv = levels[n - 1]
        H = holes_level(lv)
        E, _ = essential_holes_iterative(levels, n)
        A = essential_holes_arithmetic(levels, n)
        res.add(f"level {n}: holes = oracle = iterative = arithmetic",
                H == naive_holes(spec, lv) == E == A)
        res.add(f"level {n}: tau~ = p_n", tau(E) == lv.ell, {"tau_tilde": tau(E), "p": lv.ell})
    profile = cond.hole_profile(levels, 4)
    report = cond.centralizer_report(levels[:4], profile)
    res.add("centralizer trivial (conditional)", report["conclusion"].startswith("trivial"),
            report["conclusion"])


def run_gh(res: ExampleResult):
    spec = load_spec("gh")
    levels = direct_levels(spec, 7)
    profile = {h.n: h for h in cond.hole_profile(levels, 4)}
    for N in range(1, 5):
        p = spec.period(N)
        expected = ResidueSet(p, [(4**N * (2 * j + 1) - gh_r(N)) % p for j in range(p // 4**N // 2 + 1)])
        E = profile[N].essential
        res.add(f"N={N}: essential holes = 2^(2N)(2Z+1) - r_N", E == expected,
                {"residues": list(E.residues), "modulus": E.modulus})
        res.add(f"N={N}: tau~ = p_N = 2 tau", tau(E) == p == 2 * tau(profile[N].holes),
                {"tau_tilde": tau(E), "tau": tau(profile[N].holes), "p": p})
    star = cond.check_condition_star(list(profile.values()))
    res.add("condition (*) violated with replayable witness",
            star.verdict == cond.VIOLATED and cond.replay_witness(star, list(profile.values())),
            star.witnesses[:3])


def run_b2(res: ExampleResult):
    spec = load_spec("b2")
    levels = default_filtration(spec, 5)
    profile = cond.hole_profile(levels, 3)
    for n in range(1, 4):
        lv = levels[n - 1]
        res.add(f"level {n}: A^inf,p = {{2^n, 3^n}}", lv.A_inf_p == (2**n, 3**n), list(lv.A_inf_p))
        # On 2^n Z and 3^n Z the generators 2^i c_i, 3^i c_i cut out the same
        # multiples as the bare c_i, and C = {c_1..c_n} meets the formula's hypothesis.
        cs = spec.params(n)["c"][:n]
        same = multiples_difference(lv.A_inf_p, lv.S) == multiples_difference(lv.A_inf_p, cs)
        formula = period_formula_union(lv.A_inf_p, cs)
        res.add(f"level {n}: tau~ = lcm(S_n) via the union formula",
                same and tau(profile[n - 1].essential) == formula == lv.ell, formula)
    sh = cond.check_Sh(profile, 1)
    levels_hit = sorted({w[1] for w in sh.witnesses if w[0] == 1})
    res.add("(Sh) violated at k = 1 on every level",
            sh.verdict == cond.VIOLATED and levels_hit == [1, 2, 3] and cond.replay_witness(sh, profile),
            sh.witnesses)
    trend = cond.totient_trend(levels[:3])
    per_a = [row[2] for row in trend]
    res.add("per-a totient sums decrease", all(y < x for x, y in zip(per_a, per_a[1:])),
            [str(v) for v in per_a])


def run_b1n(res: ExampleResult):
    spec = load_spec("b1n")
    levels = default_filtration(spec, 6)
    for n in range(1, 5):
        E, _ = essential_holes_iterative(levels, n)
        res.add(f"level {n}: tau~ = lcm(S_n) / 3", tau(E) * 3 == levels[n - 1].ell,
                {"tau_tilde": tau(E), "ell": levels[n - 1].ell})
    F = FEll(spec, 1)
    res.add("F_1 commutes with the shift", verify_commutation(F, spec, range(-20, 21), 200).ok)
    res.add("F_1 has order 3", verify_order(F, spec, 3).ok)
    res.add("orders 1 and 2 refuted",
            not verify_order(F, spec, 1).ok and not verify_order(F, spec, 2).ok)
    res.add("F_1(eta) = phi(y_F) on [-50, 50]", verify_rotation(F, spec, 50).ok)
    ws = verify_window_shift(F, spec, 7, 3)
    res.add("window shift n=7, t=3 with z = 1680", ws.ok and ws.details["z"] == 1680, ws.details)


def run_b1inf(res: ExampleResult):
    spec = load_spec("b1inf")
    for ell, order in ((1, 3), (2, 5), (3, 7)):
        v = verify_order(FEll(spec, ell), spec, order)
        res.add(f"F_{ell} has order {order}", v.ok, v.details.get("window"))


def not_all_holes_witness(spec, levels, N: int) -> int:
    """k = gcd(b_(m+1), p_N) with m the largest i such that q_1 ... q_i divides p_N."""
    pN = levels[N - 1].ell
    q = spec.params(N + 2)["q"]
    m, prod = 0, 1
    while pN % (prod * q[m]) == 0:
        prod *= q[m]
        m += 1
    b_next = [g.value for g in spec.generators_of_rank(m + 1)][0]
    return gcd(b_next, pN)


def run_not_all_holes(res: ExampleResult):
    spec = load_spec("not-all-holes")
    levels = default_filtration(spec, 5)
    for N in (1, 2):
        k = not_all_holes_witness(spec, levels, N)
        H = holes_level(levels[N - 1])
        E, _ = essential_holes_iterative(levels, N)
        res.add(f"k = {k} lies in H_N minus H~_N at N = {N}", k in H and k not in E, {"k": k})
    for n in range(1, 4):
        lv = levels[n - 1]
        Hn = holes_level(lv)
        En, _ = essential_holes_iterative(levels, n)
        res.add(f"level {n}: tau = tau~ = p_n and H~ != H",
                tau(Hn) == tau(En) == lv.ell and Hn != En,
                {"tau": tau(Hn), "tau_tilde": tau(En), "p": lv.ell})


def run_two_filtrations(res: ExampleResult):
    spec = load_spec("two-filtrations")
    levels = default_filtration(spec, 4)
    for N in (1, 2):
        E, _ = essential_holes_iterative(levels, N)
        res.add(f"default filtration N={N}: H~ = H", E == holes_level(levels[N - 1]))
    primed = load_spec("two-filtrations-primed")
    plevels = default_filtration(primed, 4)
    c = primed.params(4)["c"]
    for N in (1, 2):
        H = holes_level(plevels[N - 1])
        E, _ = essential_holes_iterative(plevels, N)
        t, tt = tau(H), tau(E)
        res.add(f"primed N={N}: H~' strictly inside H' and tau~' = tau' / c_(N+1)",
                E.issubset(H) and E != H and t == tt * c[N],
                {"tau": t, "tau_tilde": tt, "c_next": c[N]})


def run_complexity(res: ExampleResult):
    small = load_spec("b2-small")
    n = first_n_with_j(small, 1)
    cert = crt_witnesses(small, n)
    res.add(f"CRT witnesses certify rho({n}) >= c_1", cert.ok and cert.bound == small.c[0],
            {"n": n, "distinct": cert.distinct, "bound": cert.bound})
    res.add("CRT congruences and block distinctness replay", replay_certificate(cert))
    spec = load_spec("b2-complexity")
    L = 10**5
    rho = rho_profile(spec, range(1, 13), L)
    rho_small = rho_profile(spec, range(1, 13), L // 10)
    res.add("rho nondecreasing in n and in L",
            all(rho[i] <= rho[i + 1] for i in range(1, 12))
            and all(rho_small[i] <= rho[i] for i in rho), rho)
    res.add("rho(n + m) <= rho(n) rho(m) and rho(n + 1) <= 2 rho(n)",
            all(rho[a + b] <= rho[a] * rho[b] for a in rho for b in rho if a + b in rho)
            and all(rho[i + 1] <= 2 * rho[i] for i in range(1, 12)))


RUNNERS = {
    "b1": run_b1,
    "b1n": run_b1n,
    "b1inf": run_b1inf,
    "b2": run_b2,
    "gh": run_gh,
    "not-all-holes": run_not_all_holes,
    "two-filtrations": run_two_filtrations,
    "complexity": run_complexity,
}


def run_example(name: str) -> ExampleResult:
    if name not in RUNNERS:
        raise KeyError(f"unknown example {name!r}; choose from {', '.join(RUNNERS)}")
    res = ExampleResult(name)
    t0 = time.perf_counter()
    try:
        RUNNERS[name](res)
    except Exception as exc:  # a crash is a failed check, reported with its message
        res.add("runs without error", False, f"{type(exc).__name__}: {exc}")
    res.seconds = time.perf_counter() - t0
    return res


def run_all(names=None) -> list:
    return [run_example(n) for n in (names or RUNNERS)]

"""One-call analysis of a spec: levels, holes, essential holes, conditions, centralizer."""

from __future__ import annotations

from dataclasses import dataclass, field

from . import conditions as cond
from .essential import NotApplicable, NotComputed, essential_holes_arithmetic
from .filtration import LevelCapExceeded, default_filtration, level_cap
from .holes import ModulusTooLarge, ResidueSet, minimal_period
from .oracle import OracleTooLarge, naive_holes
from .toeplitz import direct_levels

ALL_CONDITIONS = ("Sh", "Seh", "Seh'", "DSeh'", "*", "TI")
RESIDUE_LISTING_CAP = 64


@dataclass
class RunConfig:
    n_max: int = 3
    k_max: int = 3
    N_max: int = 2
    depth: int = None
    beta_budget: int = cond.DEFAULT_BETA_BUDGET
    stab_window: int = 2
    extra_levels: int = 2
    probe_horizon: int = None
    stab_threshold: int = 3
    conditions: tuple = ALL_CONDITIONS
    oracle: bool = False
    radius: int = 1

    def validate(self):
        for key in ("n_max", "k_max", "N_max", "beta_budget", "stab_window", "stab_threshold", "radius"):
            if getattr(self, key) < 1:
                raise ValueError(f"{key} must be positive")
        if self.n_max > level_cap():
            raise LevelCapExceeded(f"n_max = {self.n_max} exceeds the level cap {level_cap()}")
        unknown = set(self.conditions) - set(ALL_CONDITIONS)
        if unknown:
            raise ValueError(f"unknown conditions {sorted(unknown)}; choose from {ALL_CONDITIONS}")


def residue_summary(rs: ResidueSet) -> dict:
    out = {"modulus": rs.modulus, "count": len(rs), "density": str(rs.density())}
    if len(rs) <= RESIDUE_LISTING_CAP:
        out["residues"] = list(rs.residues)
    return out


def _levels(spec, cfg: RunConfig):
    """Levels 1..top with a few extra levels for the essential-hole intersection."""
    direct = hasattr(spec, "bit")
    top = cfg.n_max + cfg.extra_levels
    if direct and hasattr(spec, "levels"):
        top = min(top, len(spec.levels))
    if not direct and spec.max_rank is not None:
        top = min(top, spec.max_rank - (1 if spec.filtration == "primed" else 0))
    top = min(top, level_cap())
    if top < cfg.n_max:
        raise LevelCapExceeded(f"this spec file only defines {top} levels, n_max = {cfg.n_max}")
    if direct:
        return direct_levels(spec, top), True
    return default_filtration(spec, top, stab_threshold=cfg.stab_threshold,
                              probe_horizon=cfg.probe_horizon), False


@dataclass
class Report:
    data: dict
    verdicts: list = field(default_factory=list)
    oracle_ok: bool = True

    @property
    def exit_code(self) -> int:
        if not self.oracle_ok:
            return 1
        states = {v.verdict for v in self.verdicts}
        if cond.VIOLATED in states:
            return 2
        if cond.INCONCLUSIVE in states:
            return 3
        return 0


def analyze(spec, cfg: RunConfig = None) -> Report:
    cfg = cfg or RunConfig()
    cfg.validate()
    levels, direct = _levels(spec, cfg)
    profile = cond.hole_profile(levels, cfg.n_max, cfg.stab_window)
    rows = []
    for h in profile:
        row = {"n": h.n, "p": h.p,
               "holes": residue_summary(h.holes), "tau": h.tau,
               "essential": residue_summary(h.essential), "tau_tilde": h.tau_tilde,
               "essential_certificate": h.certificate.to_dict(),
               "all_holes_essential": h.holes == h.essential}
        if not direct:
            lv = levels[h.n - 1]
            row["level"] = lv.to_dict()
            try:
                arith = essential_holes_arithmetic(levels, h.n, cfg.depth)
                row["essential_arithmetic_agrees"] = arith == h.essential
            except (NotApplicable, NotComputed, ModulusTooLarge, ArithmeticError) as exc:
                row["essential_arithmetic_agrees"] = None
                row["essential_arithmetic_error"] = str(exc)
        rows.append(row)

    verdicts = []
    want = set(cfg.conditions)
    if "Sh" in want:
        verdicts.append(cond.check_Sh(profile, cfg.k_max))
    if "Seh" in want:
        verdicts.append(cond.check_Seh(profile, cfg.k_max))
    if "Seh'" in want:
        verdicts.append(cond.check_Seh_prime(profile, cfg.k_max, cfg.N_max))
    if "DSeh'" in want:
        verdicts.append(cond.check_DSeh_prime(profile, cfg.k_max, cfg.N_max,
                                              beta_budget=cfg.beta_budget))
    if "*" in want:
        verdicts.append(cond.check_condition_star(profile))
    if "TI" in want and not direct:
        verdicts.append(cond.check_TI(levels, cfg.n_max, ess_hole_levels=profile))

    by_name = {v.condition: v for v in verdicts}
    data = {
        "spec": spec.to_dict(),
        "config": {"n_max": cfg.n_max, "k_max": cfg.k_max, "N_max": cfg.N_max,
                   "beta_budget": cfg.beta_budget, "stab_window": cfg.stab_window,
                   "levels_computed": len(levels)},
        "levels": rows,
        "conditions": [v.to_dict() for v in verdicts],
        "replayed": all(cond.replay_witness(v, profile) for v in verdicts),
        "centralizer": cond.centralizer_report([lv for lv in levels if lv.n <= cfg.n_max],
                                               profile, cfg.radius),
    }
    if "Sh" in by_name and "Seh" in by_name:
        # both are checked independently; their agreement is recorded, not assumed
        data["sh_seh_agree"] = by_name["Sh"].verdict == by_name["Seh"].verdict
    oracle_ok = True
    if cfg.oracle and not direct:
        audit = {}
        for h in profile:
            try:
                agree = naive_holes(spec, levels[h.n - 1]) == h.holes
                audit[str(h.n)] = agree
                oracle_ok &= agree
            except OracleTooLarge:
                audit[str(h.n)] = "skipped: period above the oracle cap"
        data["oracle_audit"] = audit
    return Report(data, verdicts, oracle_ok)


def level_rows(report: Report) -> list:
    """Flat per-level rows for CSV output."""
    out = []
    for r in report.data["levels"]:
        out.append({"n": r["n"], "p": r["p"], "holes": r["holes"]["count"],
                    "holes_modulus": r["holes"]["modulus"], "tau": r["tau"],
                    "essential": r["essential"]["count"],
                    "essential_modulus": r["essential"]["modulus"],
                    "tau_tilde": r["tau_tilde"],
                    "all_holes_essential": r["all_holes_essential"],
                    "arithmetic_agrees": r.get("essential_arithmetic_agrees", "")})
    return out


def tau_from(rs: ResidueSet) -> int:
    return minimal_period(rs.reduced()).tau

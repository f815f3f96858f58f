"""Command-line front end.

Exit codes: 0 holds or confirmed, 1 internal disagreement with the oracle,
2 violation or refutation found, 3 inconclusive or budget exhausted,
4 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .analyze import ALL_CONDITIONS, RunConfig, analyze, level_rows
from .automorphism import (FEll, PreconditionError, WindowTooShort, verify_commutation,
                           verify_order, verify_rotation, verify_window_shift)
from .bset import InsufficientHorizon, SpecError, eta_window
from .complexity import (AssumptionViolated, CapExceeded, complexity_params, crt_witnesses,
                         first_n_with_j, replay_certificate, superpoly_report)
from .filtration import LevelCapExceeded
from .holes import ModulusTooLarge
from .specfile import bundled_names, is_direct, load_spec
from .suite import RUNNERS, run_all
from .toeplitz import direct_eta_segment

EXIT_OK, EXIT_INTERNAL, EXIT_VIOLATION, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 3, 4

RANGE_FLAGS = ("--range", "--n", "--k-range")


class InputError(ValueError):
    pass


def parse_range(text: str) -> tuple:
    """'a..b' or a single integer, as an inclusive pair."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"bad range {text!r}; use a..b") from None
    if hi < lo:
        raise InputError(f"empty range {text!r}")
    return lo, hi


def _glue_ranges(argv):
    # '--range -20..20' would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        if argv[i] in RANGE_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    if hasattr(obj, "to_dict"):
        return obj.to_dict()
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dump_json(data) -> str:
    return json.dumps(data, indent=2, default=_json_default)


def dump_csv(rows, extra_tables=()) -> str:
    buf = io.StringIO()
    for i, table in enumerate([rows, *extra_tables]):
        if not table:
            continue
        if i:
            buf.write("\n")
        writer = csv.DictWriter(buf, fieldnames=list(table[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(table)
    return buf.getvalue()


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ----- verbs -----------------------------------------------------------------

def cmd_analyze(args) -> int:
    spec = load_spec(args.spec)
    conds = tuple(c.strip() for c in args.conditions.split(",")) if args.conditions else ALL_CONDITIONS
    cfg = RunConfig(n_max=args.n_max, k_max=args.k_max, N_max=args.N_max, depth=args.depth,
                    beta_budget=args.beta_budget, stab_window=args.stab_window,
                    probe_horizon=args.probe_horizon, stab_threshold=args.stab_threshold,
                    conditions=conds, oracle=args.oracle, radius=args.radius)
    report = analyze(spec, cfg)
    if args.format == "json":
        _emit(dump_json(report.data))
    elif args.format == "csv":
        cond_rows = [{"condition": c["condition"], "verdict": c["verdict"],
                      "witnesses": json.dumps(c["witnesses"], default=_json_default)}
                     for c in report.data["conditions"]]
        _emit(dump_csv(level_rows(report), [cond_rows]))
    else:
        _emit(_analyze_text(report.data))
    return report.exit_code


def _analyze_text(d) -> str:
    lines = [f"spec: {d['spec'].get('name') or d['spec'].get('family')}"]
    for r in d["levels"]:
        lines.append(f"level {r['n']}: p = {r['p']}, holes {r['holes']['count']} mod "
                     f"{r['holes']['modulus']} (tau = {r['tau']}), essential "
                     f"{r['essential']['count']} mod {r['essential']['modulus']} "
                     f"(tau~ = {r['tau_tilde']}), all essential: {r['all_holes_essential']}")
    for c in d["conditions"]:
        w = f", witness {c['witnesses'][0]}" if c["witnesses"] else ""
        lines.append(f"({c['condition']}) {c['verdict']}{w}")
    lines.append(f"centralizer: {d['centralizer']['conclusion']}")
    if "oracle_audit" in d:
        lines.append(f"oracle audit: {d['oracle_audit']}")
    return "\n".join(lines)


def cmd_examples(args) -> int:
    if args.action == "list":
        _emit("\n".join(RUNNERS))
        return EXIT_OK
    names = None if args.name in (None, "all") else [args.name]
    if names and names[0] not in RUNNERS:
        raise InputError(f"unknown example {args.name!r}; choose from {', '.join(RUNNERS)}")
    results = run_all(names)
    if args.format == "json":
        _emit(dump_json([r.to_dict() for r in results]))
    elif args.format == "csv":
        _emit(dump_csv([{"example": r.example, "check": c.name, "ok": c.ok}
                        for r in results for c in r.checks]))
    else:
        lines = []
        for r in results:
            lines.append(f"{'PASS' if r.ok else 'FAIL'} {r.example} ({r.seconds:.2f} s)")
            lines += [f"    {'ok  ' if c.ok else 'FAIL'} {c.name}" for c in r.checks]
        _emit("\n".join(lines))
    return EXIT_OK if all(r.ok for r in results) else EXIT_VIOLATION


def cmd_eta(args) -> int:
    spec = load_spec(args.spec)
    lo, hi = parse_range(args.range)
    unresolved = []
    if is_direct(spec):
        w, unresolved = direct_eta_segment(spec, lo, hi, args.levels)
    else:
        w = eta_window(spec, lo, hi)
    if args.format == "json":
        _emit(dump_json({"start": lo, "end": hi, "bits": w.text(),
                         "certified": w.certified, "unresolved": unresolved}))
    elif args.format == "csv":
        _emit(dump_csv([{"position": lo + i, "bit": b} for i, b in enumerate(w.bits)]))
    else:
        _emit(w.text())
    return EXIT_INCONCLUSIVE if unresolved else EXIT_OK


def cmd_complexity(args) -> int:
    spec = load_spec(args.spec)
    lo, hi = parse_range(args.n)
    report = superpoly_report(spec, range(lo, hi + 1), args.L)
    out = {"trend": report}
    code = EXIT_OK
    if args.crt is not None:
        n = first_n_with_j(spec, 1) if args.crt == "first" else int(args.crt)
        cert = crt_witnesses(spec, n)
        out["crt"] = cert.to_dict()
        out["crt"]["params"] = complexity_params(spec, n).to_dict()
        out["crt"]["replayed"] = replay_certificate(cert)
        if not (cert.ok and out["crt"]["replayed"]):
            code = EXIT_VIOLATION
    if args.format == "json":
        _emit(dump_json(out))
    elif args.format == "csv":
        _emit(dump_csv(report["rows"]))
    else:
        lines = [f"# {report['label']}, L = {report['L']}"]
        lines += [f"n = {r['n']}: rho >= {r['rho']}, log rho / log n = {r['log_exponent']}"
                  for r in report["rows"]]
        if "crt" in out:
            c = out["crt"]
            lines.append(f"CRT certificate at n = {c['n']}: {c['distinct_blocks']} distinct blocks, "
                         f"bound {c['bound']}, replayed {c['replayed']}")
        _emit("\n".join(lines))
    return code


def cmd_automorphism(args) -> int:
    spec = load_spec(args.spec)
    F = FEll(spec, args.ell, q=args.q, phase_blind=args.phase_blind)
    if args.check == "verify-order":
        v = verify_order(F, spec, args.order, args.window)
    elif args.check == "verify-commutation":
        lo, hi = parse_range(args.k_range)
        v = verify_commutation(F, spec, range(lo, hi + 1), args.window or 200)
    elif args.check == "verify-rotation":
        v = verify_rotation(F, spec, args.window or 50)
    else:
        v = verify_window_shift(F, spec, args.n, args.t)
    data = {"check": args.check, **v.to_dict()}
    if args.format == "text":
        _emit(f"{args.check}: {v.status}" + (f", witness {v.witness}" if v.witness is not None else "")
              + "".join(f", {k} = {val}" for k, val in v.details.items() if k in ("z", "window", "order")))
    elif args.format == "csv":
        _emit(dump_csv([{"check": args.check, "ok": v.ok, "status": v.status,
                         "witness": json.dumps(v.witness, default=_json_default)}]))
    else:
        _emit(dump_json(data))
    return EXIT_OK if v.ok else EXIT_VIOLATION


# ----- parser -----------------------------------------------------------------

def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bfree", description="Holes, essential holes and "
                                "centralizer evidence for B-free and Toeplitz subshifts.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)
    spec_help = f"spec file, or a bundled name ({', '.join(bundled_names())})"

    def fmt(sp, default):
        sp.add_argument("--format", choices=("json", "csv", "text"), default=default)

    a = sub.add_parser("analyze", help="per-level report with condition verdicts")
    a.add_argument("spec", help=spec_help)
    a.add_argument("--n-max", type=_positive, default=3)
    a.add_argument("--k-max", type=_positive, default=3)
    a.add_argument("--N-max", type=_positive, default=2)
    a.add_argument("--depth", type=_positive, default=None)
    a.add_argument("--beta-budget", type=_positive, default=10**6)
    a.add_argument("--stab-window", type=_positive, default=2)
    a.add_argument("--probe-horizon", type=_positive, default=None)
    a.add_argument("--stab-threshold", type=_positive, default=3)
    a.add_argument("--radius", type=_positive, default=1, help="block-code radius for the gcd graph")
    a.add_argument("--conditions", default=None,
                   help=f"comma-separated subset of {','.join(ALL_CONDITIONS)}")
    a.add_argument("--oracle", action="store_true", help="audit holes against the brute-force oracle")
    fmt(a, "json")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("examples", help="closed-form checks on the bundled examples")
    e.add_argument("action", choices=("run", "list"))
    e.add_argument("name", nargs="?", default="all")
    fmt(e, "text")
    e.set_defaults(func=cmd_examples)

    t = sub.add_parser("eta", help="print eta on a range of positions")
    t.add_argument("spec", help=spec_help)
    t.add_argument("--range", required=True, help="a..b")
    t.add_argument("--levels", type=_positive, default=32,
                   help="level budget for directly specified sequences")
    fmt(t, "text")
    t.set_defaults(func=cmd_eta)

    c = sub.add_parser("complexity", help="subword complexity trend and CRT certificate")
    c.add_argument("spec", help=spec_help)
    c.add_argument("--n", default="1..12", help="a..b")
    c.add_argument("--L", type=_positive, default=10**5)
    c.add_argument("--crt", default=None, help="'first' or an n: certify rho(n) >= c_1 ... c_jn")
    fmt(c, "csv")
    c.set_defaults(func=cmd_complexity)

    m = sub.add_parser("automorphism", help="verify F_l on eta windows")
    m.add_argument("check", choices=("verify-order", "verify-commutation",
                                     "verify-rotation", "verify-window-shift"))
    m.add_argument("spec", help=spec_help)
    m.add_argument("--ell", type=_positive, default=1)
    m.add_argument("--order", type=_positive, default=None)
    m.add_argument("--window", type=_positive, default=None)
    m.add_argument("--k-range", default="-20..20")
    m.add_argument("--n", type=_positive, default=None)
    m.add_argument("--t", type=_positive, default=None)
    m.add_argument("--q", type=_positive, default=None, help=argparse.SUPPRESS)
    m.add_argument("--phase-blind", action="store_true", help=argparse.SUPPRESS)
    fmt(m, "json")
    m.set_defaults(func=cmd_automorphism)
    return p


def _check_automorphism_args(args):
    if args.verb != "automorphism":
        return
    if args.check == "verify-order" and args.order is None:
        raise InputError("verify-order needs --order")
    if args.check == "verify-window-shift" and (args.n is None or args.t is None):
        raise InputError("verify-window-shift needs --n and --t")


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_glue_ranges(argv))
    try:
        _check_automorphism_args(args)
        return args.func(args)
    except (CapExceeded, ModulusTooLarge, InsufficientHorizon) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (InputError, SpecError, LevelCapExceeded, AssumptionViolated, PreconditionError,
            WindowTooShort, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

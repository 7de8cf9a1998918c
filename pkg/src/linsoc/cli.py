"""Command line interface: ``linsoc run|axioms|enumerate|fixture|gen``.

Exit codes: 0 success (all checks pass), 1 an axiom violation or failed
expectation was found, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import axioms as ax
from .feasibility import EnumerationCapError, ParameterVector, enumerate_feasible_rankings, is_feasible
from .fixtures import CATALOG, fixture
from .io import format_rational, gen_profile, read_profile, serialize_profile
from .losses import MAJORITY, STANDARD, get_loss
from .model import ModelError, Ranking
from .rules_c1 import RULES as C1_RULES
from .rules_c1 import copeland_ranking
from .rules_opt import GroupOrder, linear_kemeny, linear_kemeny_po, loss_rule

EXIT_OK, EXIT_FOUND, EXIT_USAGE = 0, 1, 2
RULE_NAMES = ["copeland", "leximax-copeland", "lcpo", "leximax-plurality", "kemeny", "kemeny-po",
              "loss:<kind>", "majority-loss:<kind>"]


class UsageError(Exception):
    pass


def fmt_float(x: float) -> str:
    return format(x, ".12g")


def fmt_number(x) -> str:
    if isinstance(x, (int, Fraction)):
        return format_rational(x)
    return fmt_float(float(x))


def fmt_theta(theta) -> list[str]:
    return [fmt_number(v) for v in theta] if theta is not None else []


def load_profile(ref: str):
    """A profile file path, or a fixture name (optionally with a ``:part`` suffix)."""
    if os.path.exists(ref):
        return read_profile(ref)
    name, _, part = ref.partition(":")
    base = name.split("(")[0]
    if base in CATALOG:
        fx = fixture(name)
        if part:
            if part not in fx.profiles:
                raise UsageError(f"fixture {name!r} has no part {part!r}; parts: {sorted(fx.profiles)}")
            return fx.profiles[part]
        return fx.profile
    raise UsageError(f"no such file or fixture: {ref!r}")


def parse_groups(text: str | None):
    if not text:
        return None
    return GroupOrder([g.split(",") for g in text.split(";")])


def make_rule(name: str, groups=None):
    """Callable profile -> Ranking, RuleReport or OptResult."""
    if name == "copeland":
        return copeland_ranking
    if name in C1_RULES:
        return C1_RULES[name]
    if name == "kemeny":
        return lambda p: linear_kemeny(p, groups)
    if name == "kemeny-po":
        return lambda p: linear_kemeny_po(p, groups)
    for prefix, mode in (("loss:", STANDARD), ("majority-loss:", MAJORITY)):
        if name.startswith(prefix):
            spec = get_loss(name[len(prefix):])
            return lambda p: loss_rule(p, spec, mode)
    raise UsageError(f"unknown rule {name!r}; choose from {', '.join(RULE_NAMES)}")


def rule_record(name: str, profile, result) -> dict:
    rec = {"rule": name}
    if isinstance(result, Ranking):
        rec["ranking"] = list(result)
        ok, theta = is_feasible(profile.instance, result)
        rec["feasible"] = ok
        rec["witness"] = fmt_theta(theta)
        return rec
    if hasattr(result, "output"):
        rec["ranking"] = list(result.output)
        rec["witness"] = fmt_theta(result.witness)
        rec["trace"] = [
            {"position": s.position + 1, "candidate": s.candidate, "score": s.score, "feasible": s.feasible}
            for s in result.trace
        ]
        return rec
    rec["ranking"] = list(result.ranking)
    rec["value"] = fmt_float(result.value)
    rec["theta"] = fmt_theta(result.theta)
    if result.infima:
        rec["infima"] = [{"ranking": list(r), "value": fmt_float(v)} for r, v in sorted(result.infima.items())]
    return rec


def _emit_kv(lines, key, value):
    if isinstance(value, list) and value and isinstance(value[0], dict):
        for i, item in enumerate(value):
            _emit_kv(lines, f"{key}[{i}]", item)
    elif isinstance(value, dict):
        for k, v in value.items():
            _emit_kv(lines, f"{key}.{k}" if key else k, v)
    elif isinstance(value, list):
        if value and all(isinstance(v, str) for v in value) and key.endswith(("ranking", "output", "combined", "pmc")):
            lines.append(f"{key}={' > '.join(value)}")
        else:
            lines.append(f"{key}=" + " ".join(str(v) for v in value))
    elif isinstance(value, bool):
        lines.append(f"{key}={'true' if value else 'false'}")
    else:
        lines.append(f"{key}={value}")


def emit(record, as_json: bool, out=None):
    out = out or sys.stdout
    if as_json:
        out.write(json.dumps(record, indent=2, sort_keys=True) + "\n")
        return
    lines = []
    _emit_kv(lines, "", record)
    out.write("\n".join(lines) + "\n")


def _plain(x):
    """Witness objects to JSON-friendly values."""
    if isinstance(x, Ranking):
        return list(x)
    if isinstance(x, (tuple, list)):
        return [_plain(v) for v in x]
    if isinstance(x, ParameterVector):
        return fmt_theta(x)
    if isinstance(x, (Fraction, float)):
        return fmt_number(x)
    return x


def fmt_witness(w) -> str:
    """A pair prints as ``a>b``; longer witnesses as space-separated fields."""
    if len(w) == 2 and all(isinstance(v, str) for v in w):
        return f"{w[0]}>{w[1]}"
    return " ".join(" > ".join(v) if isinstance(v, tuple) else str(v) for v in w)


def report_record(rep: ax.AxiomReport) -> dict:
    rec = {"axiom": rep.axiom, "verdict": rep.verdict, "witnesses": [fmt_witness(w) for w in rep.witnesses]}
    for k, v in rep.details.items():
        rec[k] = _plain(v)
    return rec


def cmd_run(args) -> int:
    profile = load_profile(args.profile)
    rule = make_rule(args.rule, parse_groups(args.groups))
    emit(rule_record(args.rule, profile, rule(profile)), args.json)
    return EXIT_OK


def cmd_axioms(args) -> int:
    profile = load_profile(args.profile)
    rule = make_rule(args.rule, parse_groups(args.groups))
    output = ax.rule_output(rule(profile))
    reports = [
        ax.check_pareto(profile, output),
        ax.check_pmc(rule, profile),
        ax.check_majority_consistency(rule, profile),
    ]
    if args.monotonicity_probe:
        reports.append(ax.check_winner_monotonicity(rule, profile))
    if args.separability:
        reports.append(ax.check_separability(rule, profile, load_profile(args.separability)))
    record = {"rule": args.rule, "ranking": list(output), "reports": [report_record(r) for r in reports]}
    emit(record, args.json)
    return EXIT_FOUND if any(r.verdict == ax.VIOLATION for r in reports) else EXIT_OK


def cmd_enumerate(args) -> int:
    profile = load_profile(args.profile)
    found = enumerate_feasible_rankings(profile.instance, cap=args.cap)
    record = {"count": len(found), "rankings": [{"ranking": list(r), "witness": fmt_theta(t)} for r, t in found.items()]}
    emit(record, args.json)
    return EXIT_OK


def cmd_fixture(args) -> int:
    fx = fixture(args.name)
    record = {"fixture": fx.name, "candidates": len(fx.instance.ids), "dimension": fx.instance.dimension}
    for k, v in fx.params.items():
        record[f"param.{k}"] = _plain(v) if not isinstance(v, list) else json.dumps(v)
    record["profiles"] = {k: p.n for k, p in fx.profiles.items()}
    status = EXIT_OK
    if args.emit:
        if fx.profile is None:
            raise UsageError(f"fixture {fx.name!r} has no profile to emit")
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(serialize_profile(fx.profile))
        record["emitted"] = args.emit
    if args.verify:
        checks = []
        for e, ok, detail in fx.verify():
            checks.append({"operation": e.operation, "expected": e.expected, "result": "pass" if ok else "fail",
                           "detail": detail})
            if not ok:
                status = EXIT_FOUND
        record["checks"] = checks
    emit(record, args.json)
    return status


def cmd_gen(args) -> int:
    profile = gen_profile(args.seed, args.m, args.d, args.n)
    text = serialize_profile(profile)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="linsoc", description="Linear social choice rules and axiom checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_rule=True):
        if with_rule:
            p.add_argument("--rule", required=True, help=", ".join(RULE_NAMES))
            p.add_argument("--groups", help="forced group order for kemeny rules, e.g. '1,2;3,4,5'")
        p.add_argument("--json", action="store_true", help="structured JSON output")

    p = sub.add_parser("run", help="run a rule on a profile")
    common(p)
    p.add_argument("profile", help="profile file or fixture name")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("axioms", help="check axioms for a rule on a profile")
    common(p)
    p.add_argument("profile")
    p.add_argument("--monotonicity-probe", action="store_true")
    p.add_argument("--separability", metavar="PROFILE2")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("enumerate", help="list all feasible rankings with witnesses")
    common(p, with_rule=False)
    p.add_argument("profile")
    p.add_argument("--cap", type=int, default=10)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("fixture", help="build a catalog fixture")
    common(p, with_rule=False)
    p.add_argument("name", help=", ".join(CATALOG) + " (loss-ctrex takes '(p,eps,delta)')")
    p.add_argument("--emit", metavar="PATH")
    p.add_argument("--verify", action="store_true")
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("gen", help="generate a seeded random profile")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-d", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ModelError, EnumerationCapError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

"""Command-line front end.

Exit status: 0 on success, 1 on domain errors (bad input files, failed
checks), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
import warnings
from pathlib import Path

from . import __version__
from ._kernels import BACKEND
from .betti import graded_betti, hilbert_numerator, lcm_lattice_betti, multigraded_betti, numerator_from_table
from .complexes import DEFAULT_CHARACTERISTIC, FieldConfig
from .errors import BettiStabError
from .ideal import power
from .io import (
    BOUND_SCHEMA,
    CONJECTURE_SCHEMA,
    dumps,
    load_ideal,
    load_rees,
    render_table,
    report_to_json,
    table_to_csv,
    table_to_json,
    write_atomic,
)
from .powerlab import (
    conjecture_stab_compare,
    random_monomial_ideal,
    rees_bound_check,
    stabilization_scan,
)

log = logging.getLogger("bettistab")


def _field(args) -> FieldConfig:
    try:
        return FieldConfig(args.char)
    except ValueError as exc:
        raise BettiStabError(str(exc)) from exc


def cmd_betti(args, out) -> int:
    ideal = load_ideal(args.ideal)
    target = power(ideal, args.power) if args.power > 1 else ideal
    table = graded_betti(target, _field(args), workers=args.workers)
    if args.format == "json":
        out.write(dumps(table_to_json(table, ideal=str(ideal), power=args.power)))
    elif args.format == "csv":
        out.write(table_to_csv(table))
    else:
        out.write(render_table(table, unit=not args.trim, module_convention=args.module_convention))
    return 0


def _scan_summary(report) -> str:
    lines = [f"ideal: {report.ideal_id}", f"r = {report.r}, horizon = {report.horizon}, "
             f"completed = {report.completed}, char = {report.characteristic}"]
    if report.partial:
        lines.append(f"PARTIAL: {report.partial_reason}")
    for d, table in report.tables.items():
        totals = " ".join(str(v) for v in table.totals().values())
        lines.append(f"d={d}: totals {totals}; reg {report.regularity[d]}; shape {sorted(report.shapes[d].positions)}")
    stab = report.empirical_stab if report.empirical_stab is not None else "not stabilized within horizon"
    lines.append(f"empirical Stab: {stab} ({report.certainty})")
    lines.append(f"shape changes at d = {report.shape_changes or 'none'}")
    lines.append(f"regularity linear form: {report.linear_form or 'none detected'}"
                 + (f" from d={report.linear_form.onset}" if report.linear_form else ""))
    bad = [f for f in report.unimodality if f.violation]
    lines.append(f"unimodality: {len(report.unimodality)} positions, {len(bad)} violations")
    for f in bad:
        lines.append(f"  position {f.position}: powers {list(f.powers)}, gap at d={f.gap}")
    return "\n".join(lines) + "\n"


def cmd_scan(args, out) -> int:
    ideal = load_ideal(args.ideal)
    report = stabilization_scan(
        ideal, args.max_power, _field(args), workers=args.workers,
        time_budget=args.time_budget, ideal_id=Path(args.ideal).stem + ": " + str(ideal),
    )
    if args.out:
        outdir = Path(args.out)
        for d, table in report.tables.items():
            write_atomic(outdir / f"power-{d}.txt", render_table(table))
            write_atomic(outdir / f"power-{d}.json", dumps(table_to_json(table, ideal=str(ideal), power=d)))
        write_atomic(outdir / "report.json", dumps(report_to_json(report)))
    out.write(_scan_summary(report))
    return 0


def cmd_conjecture(args, out) -> int:
    ideal = load_ideal(args.ideal)
    result = conjecture_stab_compare(ideal, args.max_power, _field(args), n_max=args.n_max)
    if args.format == "json":
        out.write(dumps({
            "schema": CONJECTURE_SCHEMA,
            "ideal": str(ideal),
            "square_cover_index": result.square_cover_index,
            "empirical_stab": result.empirical_stab,
            "horizon": result.horizon,
            "shape_changes": list(result.shape_changes),
            "verdict": result.verdict,
            "certainty": result.certainty,
        }))
    else:
        cover = result.square_cover_index if result.square_cover_index is not None else "none <= n_max"
        out.write(
            f"square-cover index: {cover}\n"
            f"empirical Stab: {result.empirical_stab} ({result.certainty}, horizon {result.horizon})\n"
            f"shape changes at d = {list(result.shape_changes) or 'none'}\n"
            f"verdict: {result.verdict}\n"
        )
    return 0


def cmd_rees_bound(args, out) -> int:
    ideal = load_ideal(args.ideal)
    data = load_rees(args.rees)
    result = rees_bound_check(ideal, args.power, data, _field(args))
    if args.format == "json":
        out.write(dumps({
            "schema": BOUND_SCHEMA,
            "ideal": str(ideal),
            "power": args.power,
            "entries": [{"i": e.i, "j": e.j, "actual": e.actual, "bound": e.bound, "slack": e.slack}
                        for e in result.entries],
            "violations": [[e.i, e.j] for e in result.violations],
        }))
    else:
        out.write(f"power d={args.power}; positions (i, j) normalized by r*d\n")
        out.write(f"{'i':>3} {'j':>3} {'actual':>10} {'bound':>10} {'slack':>10}\n")
        for e in result.entries:
            out.write(f"{e.i:>3} {e.j:>3} {e.actual:>10} {e.bound:>10} {e.slack:>10}\n")
        out.write(f"violations: {len(result.violations)}\n")
    return 0 if result.ok else 1


def cmd_selftest(args, out) -> int:
    field = _field(args)
    failures = 0
    for t in range(args.trials):
        ideal = random_monomial_ideal(args.seed * 1_000_003 + t)
        koszul = multigraded_betti(ideal, field)
        lattice = lcm_lattice_betti(ideal, field)
        conserved = numerator_from_table(koszul.graded()) == dict(hilbert_numerator(ideal).coefficients)
        ok = koszul == lattice and conserved
        if not ok:
            failures += 1
            out.write(f"FAIL trial {t}: {ideal} (equivalence {koszul == lattice}, conservation {conserved})\n")
    out.write(f"selftest: {args.trials - failures}/{args.trials} passed equivalence and conservation checks "
              f"(seed {args.seed}, char {field.p}, kernels {BACKEND})\n")
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bettistab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({BACKEND} kernels)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--char", type=int, default=DEFAULT_CHARACTERISTIC, help="field characteristic (prime)")

    p = sub.add_parser("betti", help="graded Betti table of an ideal or one of its powers")
    p.add_argument("ideal")
    p.add_argument("--power", type=int, default=1)
    p.add_argument("--format", choices=["pretty", "json", "csv"], default="pretty")
    p.add_argument("--module-convention", action="store_true", help="index by the ideal, not R/I")
    p.add_argument("--trim", action="store_true", help="omit the unit column and leading empty rows")
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("scan", help="Betti tables of I^1..I^D and empirical stabilization")
    p.add_argument("ideal")
    p.add_argument("--max-power", type=int, required=True)
    p.add_argument("--out", help="directory for per-power tables and report.json")
    p.add_argument("--time-budget", type=float, default=None, help="seconds; report is partial if exceeded")
    p.add_argument("--workers", type=int, default=1)
    common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("conjecture", help="square-cover index against the empirical stabilization index")
    p.add_argument("ideal")
    p.add_argument("--max-power", type=int, default=6)
    p.add_argument("--n-max", type=int, default=None)
    p.add_argument("--format", choices=["text", "json"], default="text")
    common(p)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("rees-bound", help="check Betti numbers of I^d against the Rees-algebra bound")
    p.add_argument("ideal")
    p.add_argument("--rees", required=True)
    p.add_argument("--power", type=int, required=True)
    p.add_argument("--format", choices=["text", "json"], default="text")
    common(p)
    p.set_defaults(func=cmd_rees_bound)

    p = sub.add_parser("selftest", help="dual-method and conservation checks on random ideals")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    for name in ("power", "max_power", "trials", "workers"):
        if getattr(args, name, 1) is not None and getattr(args, name, 1) < 1:
            parser.error(f"--{name.replace('_', '-')} must be positive")
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            status = args.func(args, out)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return status
    except (BettiStabError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

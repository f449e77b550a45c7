"""Command-line front end.

Three subcommands:

* ``analyze`` prints a human-readable per-layer table plus totals,
* ``report`` emits the full report as JSON or CSV (stdout or --out),
* ``verify`` replays every layer on random integer data and checks the
  decomposed schedules against the direct computation.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

from .network import ConfigError, analyze, load_config
from .pe import ArrayConfig
from .report import render_csv, render_json
from .verification import VerificationError, verify_network


def _load(args):
    config = load_config(args.config)
    if args.blocks is not None or args.rows is not None:
        array = ArrayConfig(
            blocks=args.blocks if args.blocks is not None else config.array.blocks,
            rows=args.rows if args.rows is not None else config.array.rows,
        )
        config = replace(config, array=array)
    return config


def _summary(report) -> str:
    a = report.array
    lines = [
        f"{report.name}: {a.blocks} blocks x {a.rows} rows "
        f"({a.macs_per_cycle} MACs/cycle)"
    ]
    lines.append(
        f"{'label':<16} {'kind':<11} {'cycles':>12} {'ideal-dense':>12} "
        f"{'util%':>7} {'speedup':>9}"
    )
    for row in report.rows:
        r = row.report
        flag = " *" if r.flags else ""
        lines.append(
            f"{row.label:<16} {r.layer.kind:<11} {r.cycles:>12} "
            f"{r.ideal_dense_cycles:>12} {100 * r.utilization:>6.2f}% "
            f"{r.speedup:>8.2f}x{flag}"
        )
    t = report.total
    lines.append(
        f"total: {t.cycles} cycles vs {t.ideal_dense_cycles} dense-engine; "
        f"{t.operations_skipped_pct:.2f}% skipped; speedup {t.speedup:.3f}x; "
        f"utilization {100 * t.utilization:.2f}%"
    )
    for c in report.classes:
        lines.append(
            f"  {c.kind}: {c.layer_count} layers, {c.cycles} cycles, "
            f"speedup {c.speedup:.2f}x, cycles saved {c.cycles_saved_pct:.1f}%"
        )
    return "\n".join(lines)


def _cmd_analyze(args) -> int:
    print(_summary(analyze(_load(args))))
    return 0


def _cmd_report(args) -> int:
    report = analyze(_load(args))
    text = render_json(report) if args.format == "json" else render_csv(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    config = load_config(args.config)
    results = verify_network(config, seed=args.seed)
    for r in results:
        checks = ", ".join(r.checks)
        print(f"{r.label}: ok ({r.kind} {r.ci}->{r.co} {r.h}x{r.w}, {checks})")
    print(f"{len(results)} layers verified, seed {args.seed}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sparsefold",
        description=(
            "Cycle analysis of dilated and transposed convolutions scheduled "
            "on a block-parallel MAC array."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="print a per-layer summary table")
    pr = sub.add_parser("report", help="emit the full report as JSON or CSV")
    pv = sub.add_parser("verify", help="check decomposed against direct results")

    for sp in (pa, pr, pv):
        sp.add_argument("--config", required=True, help="network config JSON file")
    for sp in (pa, pr):
        sp.add_argument("--blocks", type=int, help="override array block count")
        sp.add_argument("--rows", type=int, help="override array row count")
    pr.add_argument("--format", choices=("json", "csv"), default="json")
    pr.add_argument("--out", help="write to a file instead of stdout")
    pv.add_argument("--seed", type=int, default=0, help="rng seed (default 0)")

    pa.set_defaults(func=_cmd_analyze)
    pr.set_defaults(func=_cmd_report)
    pv.set_defaults(func=_cmd_verify)
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, VerificationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()

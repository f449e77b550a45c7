#!/usr/bin/env python
"""Analyze the 512x512 workload and print the headline numbers.

Prints the aggregate cycle savings, the per-kind speedups, and the
utilization of each dilated layer; optionally dumps the full JSON
report for further processing.
"""

import argparse
from pathlib import Path

from sparsefold import DILATED, analyze, load_config, render_json

DEFAULT_CONFIG = Path(__file__).resolve().parent.parent / "configs" / "enet512.json"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", type=Path, default=DEFAULT_CONFIG)
    parser.add_argument("--json", type=Path, help="also write the full JSON report here")
    args = parser.parse_args()

    report = analyze(load_config(args.config))
    t = report.total
    a = report.array
    print(
        f"{report.name}: {len(report.rows)} layers on a {a.blocks}x{a.rows} array "
        f"({a.macs_per_cycle} MACs/cycle)"
    )
    print(f"  scheduled cycles      {t.cycles:>12,}")
    print(f"  dense-engine cycles   {t.ideal_dense_cycles:>12,}")
    print(f"  cycles skipped        {t.operations_skipped_pct:>11.2f}%")
    print(f"  overall speedup       {t.speedup:>11.3f}x")
    print(f"  structurally zero taps{t.mac_operations_skipped_pct:>11.2f}%")
    for c in report.classes:
        print(
            f"  {c.kind:<10} {c.layer_count:>2} layers: speedup {c.speedup:6.2f}x, "
            f"cycles saved {c.cycles_saved_pct:5.1f}%"
        )
    print("dilated layer utilization:")
    for row in report.rows:
        r = row.report
        if r.layer.kind == DILATED:
            print(f"  {row.label:<12} d={r.layer.d:<3} {100 * r.utilization:6.2f}%")
    if args.json:
        args.json.write_text(render_json(report))
        print(f"wrote {args.json}")


if __name__ == "__main__":
    main()

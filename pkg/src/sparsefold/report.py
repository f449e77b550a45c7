"""Serialize run reports to JSON or CSV.

Output is deterministic: key order is fixed by construction and floats
are rounded, so identical configs produce byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json

from .layers import DENSE, DILATED
from .network import RunReport


def _shape_fields(spec) -> dict:
    out = {"ci": spec.ci, "co": spec.co, "h": spec.h, "w": spec.w}
    if spec.kind == DILATED:
        out["d"] = spec.d
    elif spec.kind == DENSE:
        out["stride"] = spec.stride
    else:
        out["even_output"] = spec.even_output
    return out


def report_dict(report: RunReport) -> dict:
    layers = []
    for row in report.rows:
        r = row.report
        entry = {
            "label": row.label,
            "kind": r.layer.kind,
            **_shape_fields(r.layer),
            "cycles": r.cycles,
            "ideal_dense_cycles": r.ideal_dense_cycles,
            "ideal_sparse_cycles": r.ideal_sparse_cycles,
            "macs_total": r.macs.total,
            "macs_nonzero": r.macs.nonzero,
            "utilization": round(r.utilization, 6),
            "speedup": round(r.speedup, 6),
            "sparse_efficiency": round(r.sparse_efficiency, 6),
        }
        if r.flags:
            entry["flags"] = list(r.flags)
        if row.note:
            entry["note"] = row.note
        layers.append(entry)
    total = report.total
    return {
        "name": report.name,
        "array": {
            "blocks": report.array.blocks,
            "rows": report.array.rows,
            "macs_per_cycle": report.array.macs_per_cycle,
        },
        "layers": layers,
        "classes": [
            {
                "kind": c.kind,
                "layers": c.layer_count,
                "cycles": c.cycles,
                "ideal_dense_cycles": c.ideal_dense_cycles,
                "ideal_sparse_cycles": c.ideal_sparse_cycles,
                "speedup": round(c.speedup, 6),
                "cycles_saved_pct": round(c.cycles_saved_pct, 6),
            }
            for c in report.classes
        ],
        "total": {
            "cycles": total.cycles,
            "ideal_dense_cycles": total.ideal_dense_cycles,
            "ideal_sparse_cycles": total.ideal_sparse_cycles,
            "macs_total": total.macs.total,
            "macs_nonzero": total.macs.nonzero,
            "speedup": round(total.speedup, 6),
            "operations_skipped_pct": round(total.operations_skipped_pct, 6),
            "mac_operations_skipped_pct": round(total.mac_operations_skipped_pct, 6),
            "utilization": round(total.utilization, 6),
            "sparse_efficiency": round(total.sparse_efficiency, 6),
        },
    }


def render_json(report: RunReport) -> str:
    return json.dumps(report_dict(report), indent=2) + "\n"


CSV_COLUMNS = (
    "label",
    "kind",
    "cycles",
    "ideal_dense_cycles",
    "ideal_sparse_cycles",
    "utilization",
    "speedup",
)


def render_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in report.rows:
        r = row.report
        writer.writerow(
            [
                row.label,
                r.layer.kind,
                r.cycles,
                r.ideal_dense_cycles,
                r.ideal_sparse_cycles,
                f"{r.utilization:.6f}",
                f"{r.speedup:.6f}",
            ]
        )
    t = report.total
    writer.writerow(
        [
            "AGGREGATE",
            "all",
            t.cycles,
            t.ideal_dense_cycles,
            t.ideal_sparse_cycles,
            f"{t.utilization:.6f}",
            f"{t.speedup:.6f}",
        ]
    )
    return buf.getvalue()

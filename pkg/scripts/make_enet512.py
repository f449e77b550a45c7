#!/usr/bin/env python
"""Regenerate configs/enet512.json.

The layer list transcribes the spatial convolutions of an ENet-style
encoder/decoder at 512x512 input, each at the internal bottleneck width
where it actually runs. Only work with 3x3 structure is listed:
pointwise 1x1 projections give the array nothing to exploit and are
left out, 2x2 stride-2 downsamplers are folded as stride-2 3x3 passes,
and each asymmetric 5x1/1x5 pair is carried as two 3x3 passes.
"""

import argparse
import json
from pathlib import Path

DEFAULT_OUT = Path(__file__).resolve().parent.parent / "configs" / "enet512.json"


def dense(label, ci, co, h, w, stride=None, note=""):
    entry = {"label": label, "kind": "dense", "ci": ci, "co": co, "h": h, "w": w}
    if stride is not None:
        entry["stride"] = stride
    if note:
        entry["note"] = note
    return entry


def dilated(label, ci, co, h, w, d, note=""):
    entry = {"label": label, "kind": "dilated", "ci": ci, "co": co, "h": h, "w": w, "d": d}
    if note:
        entry["note"] = note
    return entry


def transposed(label, ci, co, h, w, note=""):
    entry = {
        "label": label,
        "kind": "transposed",
        "ci": ci,
        "co": co,
        "h": h,
        "w": w,
        "even_output": True,
        "note": note,
    }
    return entry


def build() -> dict:
    layers = [
        dense("initial", 3, 13, 512, 512, stride=2,
              note="stem 3x3; a pooled branch concatenates to width 16"),
        dense("b1.0-down", 16, 16, 256, 256, stride=2,
              note="stage-1 downsampler, 2x2 stride-2 folded as 3x3"),
    ]
    for label in ("b1.0-conv", "b1.1", "b1.2", "b1.3", "b1.4"):
        layers.append(dense(label, 16, 16, 128, 128,
                            note="stage-1 bottleneck main 3x3"))
    layers.append(dense("b2.0-down", 64, 32, 128, 128, stride=2,
                        note="stage-2 downsampler, 2x2 stride-2 folded as 3x3"))
    for stage in (2, 3):
        if stage == 2:
            layers.append(dense("b2.0-conv", 32, 32, 64, 64,
                                note="stage-2 bottleneck main 3x3"))
        for suffix, d in (
            ("1", None), ("2", 1), ("3a", None), ("3b", None), ("4", 3),
            ("5", None), ("6", 7), ("7a", None), ("7b", None), ("8", 15),
        ):
            if d is None:
                note = "bottleneck main 3x3"
                if suffix.endswith(("a", "b")):
                    note = "asymmetric 5x1/1x5 half, carried as one 3x3 pass"
                layers.append(dense(f"b{stage}.{suffix}", 32, 32, 64, 64, note=note))
            else:
                layers.append(dilated(f"b{stage}.{suffix}-d{d}", 32, 32, 64, 64, d,
                                      note=f"dilated bottleneck main 3x3, spacing {d}"))
    layers += [
        transposed("b4.0", 16, 16, 64, 64,
                   note="decoder upsampler, stride-2 transposed 3x3 to 128x128"),
        dense("b4.1", 16, 16, 128, 128, note="decoder bottleneck main 3x3"),
        dense("b4.2", 16, 16, 128, 128, note="decoder bottleneck main 3x3"),
        transposed("b5.0", 4, 4, 128, 128,
                   note="decoder upsampler, stride-2 transposed 3x3 to 256x256"),
        dense("b5.1", 4, 4, 256, 256, note="decoder bottleneck main 3x3"),
        transposed("fullconv", 16, 19, 256, 256,
                   note="final upsampler to the full-resolution class map"),
    ]
    return {
        "name": "enet512",
        "array": {"blocks": 16, "rows": 4},
        "layers": layers,
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args()
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(build(), indent=2) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()

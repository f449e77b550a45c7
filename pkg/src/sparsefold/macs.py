"""Multiply-accumulate counting for the three layer kinds.

Two numbers per layer:

* ``total``   taps a dense engine would execute, sliding the full
  (possibly zero-expanded) kernel over the input,
* ``nonzero`` taps whose weight is structurally nonzero and whose input
  cell really exists (inserted zeros and appended zeros excluded).

Both exclude taps that fall on boundary padding: a window hanging off
the edge applies fewer multiplies, and that shows up identically in the
dense baseline and in the decomposed schedules, so counting padded taps
would only inflate both sides of every ratio. ``interior=True`` instead
pretends every output window lies fully inside the input, which is the
right lens for per-window density ratios like (2D+3)^2 / 9.

Everything separates per axis: the taps at one output position are the
product of a row count and a column count, so grid totals are products
of per-axis sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .layers import DENSE, DILATED, LayerSpec


@dataclass(frozen=True)
class MacCount:
    total: int
    nonzero: int

    @property
    def density(self) -> float:
        return self.nonzero / self.total if self.total else 0.0


def _axis_taps(size: int, ksize: int, stride: int, pad: int) -> int:
    """Sum over output positions of kernel taps landing inside [0, size)."""
    out = (size + 2 * pad - ksize) // stride + 1
    start = np.arange(out) * stride - pad
    lo = np.maximum(0, -start)
    hi = np.minimum(ksize - 1, size - 1 - start)
    return int(np.maximum(0, hi - lo + 1).sum())


def _axis_block_lengths(size: int, d: int) -> list:
    """Phase-block extents along one axis for spacing d."""
    return [(size - r + d) // (d + 1) if r < size else 0 for r in range(d + 1)]


def _axis_same3(length: int) -> int:
    """Taps of a same-padded dense 3-kernel over a length-L axis."""
    if length <= 0:
        return 0
    return 3 * length - 2 if length >= 2 else 1


def count_macs(layer: LayerSpec, *, interior: bool = False) -> MacCount:
    cc = layer.ci * layer.co
    if layer.kind == DENSE:
        _, out_h, out_w = layer.output_shape()
        if interior:
            taps = 9 * out_h * out_w
        else:
            taps = _axis_taps(layer.h, 3, layer.stride, 1) * _axis_taps(
                layer.w, 3, layer.stride, 1
            )
        return MacCount(total=taps * cc, nonzero=taps * cc)

    if layer.kind == DILATED:
        k = 2 * layer.d + 3
        if interior:
            total = layer.h * layer.w * k * k
            nonzero = layer.h * layer.w * 9
        else:
            total = _axis_taps(layer.h, k, 1, layer.d + 1) * _axis_taps(
                layer.w, k, 1, layer.d + 1
            )
            nonzero = sum(map(_axis_same3, _axis_block_lengths(layer.h, layer.d))) * sum(
                map(_axis_same3, _axis_block_lengths(layer.w, layer.d))
            )
        return MacCount(total=total * cc, nonzero=nonzero * cc)

    # transposed: the dense engine convolves the zero-inserted grid
    even = layer.even_output
    if interior:
        _, out_h, out_w = layer.output_shape()
        total = 9 * out_h * out_w
        ny = 3 * layer.h if even else 3 * layer.h - 2
        nx = 3 * layer.w if even else 3 * layer.w - 2
    else:
        gy = 2 * layer.h if even else 2 * layer.h - 1
        gx = 2 * layer.w if even else 2 * layer.w - 1
        total = _axis_taps(gy, 3, 1, 1) * _axis_taps(gx, 3, 1, 1)
        ny = 3 * layer.h - 1 if even else 3 * layer.h - 2
        nx = 3 * layer.w - 1 if even else 3 * layer.w - 2
    return MacCount(total=total * cc, nonzero=ny * nx * cc)

"""Cycle model of the block-parallel MAC array.

The array is a grid of ``blocks`` output-channel blocks, each holding
``rows`` PE rows of 3 weight slots. One cycle broadcasts one kernel
column (up to 3 vertical taps) to one output column, for all rows and
blocks at once; horizontal tap validity therefore gates cycles, while
vertical validity only gates how many of the 3 slots do useful work.

Dense layers stream the kernel columns directly. Dilated layers run the
phase-block decomposition, so the zero-expanded kernel never costs a
cycle. Transposed layers pack the three kernel columns onto three
adjacent blocks (one input column per cycle); arrays narrower than 3
blocks fall back to running the four parity sub-convolutions back to
back, which still skips the inserted zeros but loses the packing.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil
from typing import ClassVar, Tuple

from .dilated import block_shape
from .layers import DENSE, DILATED, LayerSpec
from .macs import MacCount, _axis_taps, count_macs

FALLBACK_FLAG = "transposed-fallback"


@dataclass(frozen=True)
class ArrayConfig:
    """Array geometry: blocks x rows PEs, 3 weight slots per row."""

    blocks: int = 16
    rows: int = 4

    WEIGHT_COLS: ClassVar[int] = 3

    def __post_init__(self):
        for name in ("blocks", "rows"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive int, got {v!r}")

    @property
    def macs_per_cycle(self) -> int:
        return self.blocks * self.rows * self.WEIGHT_COLS

    @property
    def transposed_groups(self) -> int:
        """Kernel-column triples that fit side by side."""
        return self.blocks // 3


def weight_vector_count(col: int, width: int) -> int:
    """Valid kernel columns at output column ``col`` of a same-padded
    stride-1 3x3 pass over a width-``width`` map."""
    if not 0 <= col < width:
        raise ValueError(f"col {col} outside width {width}")
    return min(2, width - col) - max(0, 1 - col) + 1


def cycles_dense(layer: LayerSpec, cfg: ArrayConfig) -> int:
    _, out_h, _ = layer.output_shape()
    per_row_group = _axis_taps(layer.w, 3, layer.stride, 1)
    return layer.ci * ceil(layer.co / cfg.blocks) * ceil(out_h / cfg.rows) * per_row_group


def cycles_dilated(layer: LayerSpec, cfg: ArrayConfig) -> int:
    span = 0
    for r in range(layer.d + 1):
        for c in range(layer.d + 1):
            bh, bw = block_shape(layer.h, layer.w, layer.d, r, c)
            if bh == 0 or bw == 0:
                continue
            span += ceil(bh / cfg.rows) * _axis_taps(bw, 3, 1, 1)
    return layer.ci * ceil(layer.co / cfg.blocks) * span


def _fallback_passes(layer: LayerSpec):
    """(out_h, out_w, kh, kw) of the four parity sub-convolutions."""
    h, w = layer.h, layer.w
    if layer.even_output:
        return [(h, w, 1, 1), (h, w, 1, 2), (h, w, 2, 1), (h, w, 2, 2)]
    return [(h, w, 1, 1), (h, w - 1, 1, 2), (h - 1, w, 2, 1), (h - 1, w - 1, 2, 2)]


def cycles_transposed(layer: LayerSpec, cfg: ArrayConfig) -> int:
    groups = cfg.transposed_groups
    if groups >= 1:
        return layer.ci * ceil(layer.co / groups) * ceil(layer.h / cfg.rows) * layer.w
    total = 0
    for out_h, out_w, _, kw in _fallback_passes(layer):
        if out_h <= 0 or out_w <= 0:
            continue
        total += ceil(out_h / cfg.rows) * kw * out_w
    return layer.ci * ceil(layer.co / cfg.blocks) * total


def layer_cycles(layer: LayerSpec, cfg: ArrayConfig) -> Tuple[int, Tuple[str, ...]]:
    if layer.kind == DENSE:
        return cycles_dense(layer, cfg), ()
    if layer.kind == DILATED:
        return cycles_dilated(layer, cfg), ()
    flags = () if cfg.transposed_groups >= 1 else (FALLBACK_FLAG,)
    return cycles_transposed(layer, cfg), flags


def ideal_cycles(
    layer: LayerSpec, cfg: ArrayConfig, mode: str = "dense", *, interior: bool = False
) -> int:
    """Cycle floor for a perfectly utilized array.

    ``mode="dense"`` charges every tap of the zero-expanded kernel (the
    cost a structure-blind engine pays); ``mode="sparse"`` charges only
    the structurally nonzero taps.
    """
    macs = count_macs(layer, interior=interior)
    if mode == "dense":
        work = macs.total
    elif mode == "sparse":
        work = macs.nonzero
    else:
        raise ValueError(f"mode must be 'dense' or 'sparse', got {mode!r}")
    return ceil(work / cfg.macs_per_cycle)


@dataclass(frozen=True)
class CycleReport:
    layer: LayerSpec
    cycles: int
    ideal_dense_cycles: int
    ideal_sparse_cycles: int
    macs: MacCount
    utilization: float
    flags: Tuple[str, ...] = ()

    @property
    def speedup(self) -> float:
        """Dense-engine cycles over scheduled cycles."""
        return self.ideal_dense_cycles / self.cycles

    @property
    def sparse_efficiency(self) -> float:
        """How close the schedule comes to the nonzero-work floor."""
        return self.ideal_sparse_cycles / self.cycles


def analyze_layer(layer: LayerSpec, cfg: ArrayConfig) -> CycleReport:
    cycles, flags = layer_cycles(layer, cfg)
    macs = count_macs(layer)
    return CycleReport(
        layer=layer,
        cycles=cycles,
        ideal_dense_cycles=ideal_cycles(layer, cfg, "dense"),
        ideal_sparse_cycles=ideal_cycles(layer, cfg, "sparse"),
        macs=macs,
        utilization=macs.nonzero / (cycles * cfg.macs_per_cycle),
        flags=flags,
    )

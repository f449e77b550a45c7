"""Slot-level schedule enumeration for the MAC array.

The closed-form cycle counts in ``pe`` are loop counts of the schedules
spelled out here; enumerating the individual slots makes the accounting
auditable. A trace shows that every structurally nonzero tap is issued
exactly once, that no (block, row, slot) position is claimed twice in a
cycle, and that idle positions are exactly the boundary and overhang
effects the utilization figures charge for.

Traces grow as fast as the tap counts they audit, so enumeration is
budgeted: a layer whose nonzero tap count exceeds the budget raises
BudgetError instead of allocating. Override the default per call or via
the SPARSEFOLD_BUDGET environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import ceil
from typing import List, NamedTuple, Optional, Tuple

from .dilated import block_shape
from .layers import DENSE, DILATED, LayerSpec
from .macs import count_macs
from .pe import ArrayConfig, _fallback_passes

DEFAULT_BUDGET = 1_000_000
BUDGET_ENV = "SPARSEFOLD_BUDGET"


class BudgetError(RuntimeError):
    """Raised when a trace would exceed the slot budget."""


class Slot(NamedTuple):
    cycle: int
    block: int
    row: int
    wcol: int
    out: Tuple[int, int, int]  # (co, oy, ox)
    tap: Tuple[int, int, int]  # (ci, ky, kx) in the 3x3 kernel frame


@dataclass(frozen=True)
class ScheduleTrace:
    layer: LayerSpec
    config: ArrayConfig
    cycles: int
    slots: Tuple[Slot, ...]

    @property
    def active(self) -> int:
        return len(self.slots)

    def occupancy(self) -> List[int]:
        """Active slot count per cycle."""
        counts = [0] * self.cycles
        for s in self.slots:
            counts[s.cycle] += 1
        return counts


def _resolve_budget(budget: Optional[int]) -> int:
    if budget is None:
        raw = os.environ.get(BUDGET_ENV)
        if raw is None:
            return DEFAULT_BUDGET
        try:
            budget = int(raw)
        except ValueError:
            raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if budget < 1:
        raise ValueError(f"budget must be positive, got {budget}")
    return budget


def _dense_slots(layer: LayerSpec, cfg: ArrayConfig):
    s = layer.stride
    _, out_h, out_w = layer.output_shape()
    cycle = 0
    slots: List[Slot] = []
    for ci in range(layer.ci):
        for cog in range(ceil(layer.co / cfg.blocks)):
            for rowg in range(ceil(out_h / cfg.rows)):
                for ox in range(out_w):
                    for kx in range(3):
                        if not 0 <= ox * s - 1 + kx < layer.w:
                            continue
                        for b in range(cfg.blocks):
                            co = cog * cfg.blocks + b
                            if co >= layer.co:
                                break
                            for r in range(cfg.rows):
                                oy = rowg * cfg.rows + r
                                if oy >= out_h:
                                    break
                                for ky in range(3):
                                    if 0 <= oy * s - 1 + ky < layer.h:
                                        slots.append(
                                            Slot(cycle, b, r, ky, (co, oy, ox), (ci, ky, kx))
                                        )
                        cycle += 1
    return cycle, slots


def _dilated_slots(layer: LayerSpec, cfg: ArrayConfig):
    d = layer.d
    cycle = 0
    slots: List[Slot] = []
    for ci in range(layer.ci):
        for cog in range(ceil(layer.co / cfg.blocks)):
            for rp in range(d + 1):
                for cp in range(d + 1):
                    bh, bw = block_shape(layer.h, layer.w, d, rp, cp)
                    if bh == 0 or bw == 0:
                        continue
                    for rowg in range(ceil(bh / cfg.rows)):
                        for obx in range(bw):
                            for kx in range(3):
                                if not 0 <= obx - 1 + kx < bw:
                                    continue
                                for b in range(cfg.blocks):
                                    co = cog * cfg.blocks + b
                                    if co >= layer.co:
                                        break
                                    for r in range(cfg.rows):
                                        oby = rowg * cfg.rows + r
                                        if oby >= bh:
                                            break
                                        for ky in range(3):
                                            if 0 <= oby - 1 + ky < bh:
                                                out = (
                                                    co,
                                                    oby * (d + 1) + rp,
                                                    obx * (d + 1) + cp,
                                                )
                                                slots.append(
                                                    Slot(cycle, b, r, ky, out, (ci, ky, kx))
                                                )
                                cycle += 1
    return cycle, slots


def _transposed_packed_slots(layer: LayerSpec, cfg: ArrayConfig):
    groups = cfg.transposed_groups
    _, out_h, out_w = layer.output_shape()
    cycle = 0
    slots: List[Slot] = []
    for ci in range(layer.ci):
        for cog in range(ceil(layer.co / groups)):
            for rowg in range(ceil(layer.h / cfg.rows)):
                for j in range(layer.w):
                    for g in range(groups):
                        co = cog * groups + g
                        if co >= layer.co:
                            break
                        for kx in range(3):
                            ox = 2 * j + 1 - kx
                            if not 0 <= ox < out_w:
                                continue
                            for r in range(cfg.rows):
                                y = rowg * cfg.rows + r
                                if y >= layer.h:
                                    break
                                for ky in range(3):
                                    oy = 2 * y + 1 - ky
                                    if 0 <= oy < out_h:
                                        slots.append(
                                            Slot(
                                                cycle,
                                                g * 3 + kx,
                                                r,
                                                ky,
                                                (co, oy, ox),
                                                (ci, ky, kx),
                                            )
                                        )
                    cycle += 1
    return cycle, slots


# parity class -> (py, px, source rows, source cols) of its sub-kernel
_SUB_TAPS = (
    (0, 0, (1,), (1,)),
    (0, 1, (1,), (0, 2)),
    (1, 0, (0, 2), (1,)),
    (1, 1, (0, 2), (0, 2)),
)


def _transposed_fallback_slots(layer: LayerSpec, cfg: ArrayConfig):
    cycle = 0
    slots: List[Slot] = []
    for (py, px, ky_map, kx_map), (sh, sw, kh, kw) in zip(
        _SUB_TAPS, _fallback_passes(layer)
    ):
        if sh <= 0 or sw <= 0:
            continue
        for ci in range(layer.ci):
            for cog in range(ceil(layer.co / cfg.blocks)):
                for rowg in range(ceil(sh / cfg.rows)):
                    for o in range(sw):
                        for ki in range(kw):
                            # taps on the appended zero row/col of the
                            # even variant do no work but keep their slot
                            if o + ki < layer.w:
                                for b in range(cfg.blocks):
                                    co = cog * cfg.blocks + b
                                    if co >= layer.co:
                                        break
                                    for r in range(cfg.rows):
                                        sy = rowg * cfg.rows + r
                                        if sy >= sh:
                                            break
                                        for kj in range(kh):
                                            if sy + kj < layer.h:
                                                out = (co, 2 * sy + py, 2 * o + px)
                                                tap = (ci, ky_map[kj], kx_map[ki])
                                                slots.append(
                                                    Slot(cycle, b, r, kj, out, tap)
                                                )
                            cycle += 1
    return cycle, slots


def enumerate_schedule(
    layer: LayerSpec, cfg: ArrayConfig, budget: Optional[int] = None
) -> ScheduleTrace:
    limit = _resolve_budget(budget)
    expected = count_macs(layer).nonzero
    if expected > limit:
        raise BudgetError(
            f"trace needs {expected} slots but the budget is {limit}; "
            f"pass budget= or set {BUDGET_ENV}"
        )
    if layer.kind == DENSE:
        cycles, slots = _dense_slots(layer, cfg)
    elif layer.kind == DILATED:
        cycles, slots = _dilated_slots(layer, cfg)
    elif cfg.transposed_groups >= 1:
        cycles, slots = _transposed_packed_slots(layer, cfg)
    else:
        cycles, slots = _transposed_fallback_slots(layer, cfg)
    return ScheduleTrace(layer=layer, config=cfg, cycles=cycles, slots=tuple(slots))

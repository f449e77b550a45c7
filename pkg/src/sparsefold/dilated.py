"""Input-side decomposition of dilated 3x3 convolutions.

A 3x3 kernel dilated by d inserted zeros only ever combines input cells
whose coordinates agree modulo (d+1). Splitting the input into the
(d+1)^2 phase-shifted subsampled blocks therefore turns one dilated
convolution into (d+1)^2 dense 3x3 convolutions, one per block, whose
outputs stitch back at the same strided addresses. The identity is
exact, not approximate.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .convolve import conv2d
from .tensors import ConvGeometry, KernelStack, ShapeError, Tensor3

_SAME_3X3 = ConvGeometry(stride=1, pad=1)


@dataclass(frozen=True)
class BlockIndex:
    """Phase of a subsampled block: (row, col) in [0, d] x [0, d]."""

    row: int
    col: int


@dataclass(frozen=True, eq=False)
class InputBlock:
    """One subsampled block; ``tensor`` is None when the block has no cells."""

    index: BlockIndex
    tensor: Optional[Tensor3]

    @property
    def is_empty(self) -> bool:
        return self.tensor is None


def block_shape(height: int, width: int, d: int, row: int, col: int) -> tuple[int, int]:
    """Dims of the block holding cells (row + i*(d+1), col + j*(d+1))."""
    step = d + 1
    hb = (height - row + d) // step if row < height else 0
    wb = (width - col + d) // step if col < width else 0
    return hb, wb


def decompose_input(x: Tensor3, d: int) -> list[InputBlock]:
    """Split ``x`` into its (d+1)^2 phase blocks, row-major over phases.

    Blocks whose height or width would be zero (possible when d+1 exceeds
    an input dim) are emitted explicitly empty so callers can keep the
    block <-> phase correspondence without special-casing.
    """
    if d < 0:
        raise ValueError(f"dilation zero count must be >= 0, got {d}")
    step = d + 1
    blocks: list[InputBlock] = []
    for r in range(step):
        for c in range(step):
            hb, wb = block_shape(x.height, x.width, d, r, c)
            if hb == 0 or wb == 0:
                blocks.append(InputBlock(BlockIndex(r, c), None))
            else:
                blocks.append(InputBlock(BlockIndex(r, c), Tensor3(x.data[:, r::step, c::step])))
    return blocks


def stitch_outputs(
    blocks: Sequence[tuple[BlockIndex, Tensor3]], d: int, height: int, width: int
) -> Tensor3:
    """Write per-block conv outputs back to their strided addresses.

    Every output cell must be covered exactly once; anything else means
    the block set does not partition the output and is an error.
    """
    if not blocks:
        raise ShapeError("no blocks to stitch")
    step = d + 1
    channels = blocks[0][1].channels
    dtype = blocks[0][1].data.dtype
    out = np.zeros((channels, height, width), dtype=dtype)
    cover = np.zeros((height, width), dtype=np.int32)
    for idx, t in blocks:
        if t.channels != channels:
            raise ShapeError(
                f"block {(idx.row, idx.col)} has {t.channels} channels, expected {channels}"
            )
        hb, wb = block_shape(height, width, d, idx.row, idx.col)
        if (t.height, t.width) != (hb, wb):
            raise ShapeError(
                f"block {(idx.row, idx.col)} is {t.height}x{t.width}, "
                f"expected {hb}x{wb} for a {height}x{width} output"
            )
        out[:, idx.row :: step, idx.col :: step] = t.data
        cover[idx.row :: step, idx.col :: step] += 1
    bad = np.argwhere(cover != 1)
    if bad.size:
        y, x = bad[0]
        kind = "uncovered" if cover[y, x] == 0 else "doubly covered"
        raise ShapeError(f"output cell ({y}, {x}) {kind} by block set")
    return Tensor3(out)


def conv_dilated_decomposed(x: Tensor3, w: KernelStack, d: int) -> Tensor3:
    """Dilated conv computed as (d+1)^2 dense 3x3 convs over phase blocks."""
    if (w.kh, w.kw) != (3, 3):
        raise ShapeError(f"dilation source kernels must be 3x3, got {w.kh}x{w.kw}")
    outs = []
    for blk in decompose_input(x, d):
        if blk.is_empty:
            continue
        outs.append((blk.index, conv2d(blk.tensor, w, _SAME_3X3)))
    return stitch_outputs(outs, d, x.height, x.width)

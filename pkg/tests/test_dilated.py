"""Phase-block decomposition of dilated convolutions."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sparsefold import (
    BlockIndex,
    KernelStack,
    ShapeError,
    Tensor3,
    block_shape,
    conv_dilated_decomposed,
    conv_dilated_direct,
    decompose_input,
    stitch_outputs,
)


def test_block_dims_d1_7x7():
    # 7x7 split two ways per axis: even phase gets 4 samples, odd gets 3
    dims = [block_shape(7, 7, 1, r, c) for r in range(2) for c in range(2)]
    assert dims == [(4, 4), (4, 3), (3, 4), (3, 3)]


def test_block_dims_d2_8x8():
    dims = [block_shape(8, 8, 2, r, c) for r in range(3) for c in range(3)]
    assert dims == [
        (3, 3), (3, 3), (3, 2),
        (3, 3), (3, 3), (3, 2),
        (2, 3), (2, 3), (2, 2),
    ]


@settings(max_examples=80, deadline=None)
@given(h=st.integers(1, 20), w=st.integers(1, 20), d=st.integers(0, 6))
def test_block_dims_partition_the_grid(h, w, d):
    cells = sum(
        hb * wb
        for r in range(d + 1)
        for c in range(d + 1)
        for hb, wb in [block_shape(h, w, d, r, c)]
    )
    assert cells == h * w


def test_decompose_landing_addresses():
    x = Tensor3(np.arange(49, dtype=np.int64).reshape(1, 7, 7))
    blocks = dict()
    for blk in decompose_input(x, 1):
        blocks[(blk.index.row, blk.index.col)] = blk.tensor
    # block (0,0) cell (1,2) comes from input (1*2+0, 2*2+0) = (2,4)
    assert blocks[(0, 0)].at(0, 1, 2) == x.at(0, 2, 4)
    assert blocks[(1, 0)].at(0, 0, 3) == x.at(0, 1, 6)


def test_decompose_landing_addresses_d2():
    x = Tensor3(np.arange(64, dtype=np.int64).reshape(1, 8, 8))
    blocks = {(b.index.row, b.index.col): b.tensor for b in decompose_input(x, 2)}
    # block (2,1) cell (0,0) comes from input (2, 1)
    assert blocks[(2, 1)].at(0, 0, 0) == x.at(0, 2, 1)
    assert blocks[(2, 1)].at(0, 1, 1) == x.at(0, 5, 4)


def test_decompose_emits_empty_blocks():
    x = Tensor3(np.ones((1, 2, 5), dtype=np.int64))
    blocks = decompose_input(x, 2)
    assert len(blocks) == 9
    empties = [(b.index.row, b.index.col) for b in blocks if b.is_empty]
    assert empties == [(2, 0), (2, 1), (2, 2)]  # third row phase has no samples


def test_decompose_ordering_is_row_major():
    x = Tensor3(np.zeros((1, 6, 6)))
    idx = [(b.index.row, b.index.col) for b in decompose_input(x, 1)]
    assert idx == [(0, 0), (0, 1), (1, 0), (1, 1)]


@settings(max_examples=60, deadline=None)
@given(
    h=st.integers(1, 12),
    w=st.integers(1, 12),
    d=st.integers(0, 4),
    seed=st.integers(0, 2**32 - 1),
)
def test_decompose_stitch_roundtrip(h, w, d, seed):
    rng = np.random.default_rng(seed)
    x = Tensor3(rng.integers(-9, 10, size=(2, h, w), dtype=np.int64))
    parts = [(b.index, b.tensor) for b in decompose_input(x, d) if not b.is_empty]
    back = stitch_outputs(parts, d, h, w)
    np.testing.assert_array_equal(back.data, x.data)


def test_stitch_rejects_uncovered_cells():
    x = Tensor3(np.ones((1, 4, 4), dtype=np.int64))
    parts = [(b.index, b.tensor) for b in decompose_input(x, 1) if not b.is_empty]
    with pytest.raises(ShapeError, match="uncovered"):
        stitch_outputs(parts[:-1], 1, 4, 4)


def test_stitch_rejects_double_coverage():
    x = Tensor3(np.ones((1, 4, 4), dtype=np.int64))
    parts = [(b.index, b.tensor) for b in decompose_input(x, 1) if not b.is_empty]
    with pytest.raises(ShapeError, match="doubly covered"):
        stitch_outputs(parts + [parts[0]], 1, 4, 4)


def test_stitch_rejects_wrong_block_dims():
    good = Tensor3(np.ones((1, 2, 2), dtype=np.int64))
    bad = Tensor3(np.ones((1, 3, 2), dtype=np.int64))
    parts = [
        (BlockIndex(0, 0), good),
        (BlockIndex(0, 1), good),
        (BlockIndex(1, 0), good),
        (BlockIndex(1, 1), bad),
    ]
    with pytest.raises(ShapeError, match="expected 2x2"):
        stitch_outputs(parts, 1, 4, 4)


def test_decomposed_matches_direct_golden():
    rng = np.random.default_rng(0)
    x = Tensor3(rng.integers(-9, 10, size=(2, 9, 9), dtype=np.int64))
    w = KernelStack(rng.integers(-9, 10, size=(3, 2, 3, 3), dtype=np.int64))
    for d in (0, 1, 2, 3):
        got = conv_dilated_decomposed(x, w, d)
        want = conv_dilated_direct(x, w, d)
        np.testing.assert_array_equal(got.data, want.data)


@settings(max_examples=120, deadline=None)
@given(
    h=st.integers(1, 14),
    w=st.integers(1, 14),
    d=st.integers(0, 7),
    ci=st.integers(1, 3),
    co=st.integers(1, 3),
    seed=st.integers(0, 2**32 - 1),
)
def test_decomposed_matches_direct(h, w, d, ci, co, seed):
    """Bit-exact agreement, including blocks that vanish when d+1 > dim."""
    rng = np.random.default_rng(seed)
    x = Tensor3(rng.integers(-9, 10, size=(ci, h, w), dtype=np.int64))
    k = KernelStack(rng.integers(-9, 10, size=(co, ci, 3, 3), dtype=np.int64))
    got = conv_dilated_decomposed(x, k, d)
    want = conv_dilated_direct(x, k, d)
    assert got.shape == (co, h, w)
    np.testing.assert_array_equal(got.data, want.data)


def test_decomposed_rejects_non_3x3():
    x = Tensor3(np.ones((1, 4, 4)))
    w = KernelStack(np.ones((1, 1, 5, 5)))
    with pytest.raises(ShapeError):
        conv_dilated_decomposed(x, w, 1)

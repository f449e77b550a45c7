"""Reference convolution paths: plain, dilated, and stride-2 transposed.

These are the "direct" implementations the decomposed paths are checked
against. Cross-correlation convention throughout (no kernel flip). All
routines are exact in integer arithmetic; float inputs run through the
same code and inherit float64 semantics.
"""

from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .tensors import ConvGeometry, KernelStack, ShapeError, Tensor3


def conv2d(x: Tensor3, w: KernelStack, geom: ConvGeometry) -> Tensor3:
    """Cross-correlate ``x`` with ``w`` under ``geom``.

    Output dims follow the usual floor formula; a geometry that would
    produce an empty output is an error rather than a zero-size result.
    """
    if w.in_channels != x.channels:
        raise ShapeError(
            f"kernel expects {w.in_channels} input channels, tensor has {x.channels}"
        )
    p, s = geom.pad, geom.stride
    xp = np.pad(x.data, ((0, 0), (p, p), (p, p)))
    if xp.shape[1] < w.kh or xp.shape[2] < w.kw:
        raise ShapeError(
            f"non-positive output dims: input {x.height}x{x.width} pad {p} "
            f"cannot fit a {w.kh}x{w.kw} kernel"
        )
    win = sliding_window_view(xp, (w.kh, w.kw), axis=(1, 2))[:, ::s, ::s]
    out = np.einsum("chwuv,ocuv->ohw", win, w.data)
    return Tensor3(out)


def dilate_kernel(w: KernelStack, d: int) -> KernelStack:
    """Insert ``d`` zeros between adjacent taps of a 3x3 kernel stack.

    The result is (2d+3)x(2d+3) with the original taps at positions
    0, d+1, 2d+2 along each axis; raster order of the taps is preserved.
    """
    if (w.kh, w.kw) != (3, 3):
        raise ShapeError(f"dilation source kernels must be 3x3, got {w.kh}x{w.kw}")
    if d < 0:
        raise ValueError(f"dilation zero count must be >= 0, got {d}")
    k = 2 * d + 3
    out = np.zeros((w.out_channels, w.in_channels, k, k), dtype=w.data.dtype)
    out[:, :, :: d + 1, :: d + 1] = w.data
    return KernelStack(out)


def conv_dilated_direct(x: Tensor3, w: KernelStack, d: int) -> Tensor3:
    """Dilated 3x3 convolution via the expanded kernel, output same HxW.

    Padding is d+1 on each side so the effective (2d+3)x(2d+3) kernel
    keeps the output size equal to the input size.
    """
    return conv2d(x, dilate_kernel(w, d), ConvGeometry(stride=1, pad=d + 1))


def zero_insert(x: Tensor3) -> Tensor3:
    """Spread ``x`` onto a (2H-1)x(2W-1) grid, originals at even coords."""
    c, h, wd = x.shape
    out = np.zeros((c, 2 * h - 1, 2 * wd - 1), dtype=x.data.dtype)
    out[:, ::2, ::2] = x.data
    return Tensor3(out)


def conv_transposed_direct(x: Tensor3, w: KernelStack, even_output: bool = False) -> Tensor3:
    """Stride-2 transposed 3x3 convolution via zero insertion.

    Odd geometry: output (2H-1)x(2W-1). The even variant appends one zero
    row/column to the enlarged grid first, giving 2Hx2W (the usual
    output-padding convention when the consumer wants exact doubling).
    """
    if (w.kh, w.kw) != (3, 3):
        raise ShapeError(f"transposed source kernels must be 3x3, got {w.kh}x{w.kw}")
    z = zero_insert(x).data
    if even_output:
        z = np.pad(z, ((0, 0), (0, 1), (0, 1)))
    return conv2d(Tensor3(z), w, ConvGeometry(stride=1, pad=1))

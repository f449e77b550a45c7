"""Weight-side decomposition of stride-2 transposed 3x3 convolutions.

On the zero-inserted grid the real input cells sit at even coordinates,
so each output parity class (even/odd row x even/odd col) can only ever
meet a fixed subset of the 3x3 taps. Those four subsets, applied to the
original input as small dense valid convolutions, reproduce the
transposed convolution exactly:

    output row even, col even  <- center tap          (1x1)
    output row even, col odd   <- middle-row ends     (1x2)
    output row odd,  col even  <- middle-column ends  (2x1)
    output row odd,  col odd   <- four corners        (2x2)

Tap orientation below is fixed by bit-exact agreement with the
zero-insertion path and frozen by golden tests; don't reorder.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .convolve import conv2d
from .tensors import ConvGeometry, KernelStack, ShapeError, Tensor3

_VALID = ConvGeometry(stride=1, pad=0)


@dataclass(frozen=True, eq=False)
class SubKernelSet:
    """The four parity sub-kernels of one 3x3 transposed kernel stack."""

    corner: KernelStack  # 2x2: taps (0,0) (0,2) / (2,0) (2,2)
    hpair: KernelStack   # 1x2: taps (1,0) (1,2)
    vpair: KernelStack   # 2x1: taps (0,1) / (2,1)
    center: KernelStack  # 1x1: tap (1,1)


def decompose_weight(w: KernelStack) -> SubKernelSet:
    if (w.kh, w.kw) != (3, 3):
        raise ShapeError(f"transposed source kernels must be 3x3, got {w.kh}x{w.kw}")
    k = w.data
    return SubKernelSet(
        corner=KernelStack(k[:, :, 0::2, 0::2]),
        hpair=KernelStack(k[:, :, 1:2, 0::2]),
        vpair=KernelStack(k[:, :, 0::2, 1:2]),
        center=KernelStack(k[:, :, 1:2, 1:2]),
    )


def _expect(name: str, t: Optional[Tensor3], h: int, wd: int, channels: int):
    if h == 0 or wd == 0:
        if t is not None:
            raise ShapeError(f"{name} must be empty (None) here, got {t.height}x{t.width}")
        return
    if t is None:
        raise ShapeError(f"{name} missing: expected {h}x{wd}")
    if (t.height, t.width) != (h, wd):
        raise ShapeError(f"{name} is {t.height}x{t.width}, expected {h}x{wd}")
    if t.channels != channels:
        raise ShapeError(f"{name} has {t.channels} channels, expected {channels}")


def interleave_outputs(
    ee: Tensor3,
    eo: Optional[Tensor3],
    oe: Optional[Tensor3],
    oo: Optional[Tensor3],
    even_output: bool = False,
) -> Tensor3:
    """Merge the four parity-class outputs into the full upsampled map.

    ``ee`` fixes the logical input dims HxW. Odd geometry expects class
    dims HxW, Hx(W-1), (H-1)xW, (H-1)x(W-1) and yields (2H-1)x(2W-1);
    the even variant expects HxW for all four and yields 2Hx2W. Classes
    whose dims vanish (W=1 or H=1, odd geometry) are passed as None.
    """
    h, wd, c = ee.height, ee.width, ee.channels
    if even_output:
        dims = {"eo": (h, wd), "oe": (h, wd), "oo": (h, wd)}
        out_h, out_w = 2 * h, 2 * wd
    else:
        dims = {"eo": (h, wd - 1), "oe": (h - 1, wd), "oo": (h - 1, wd - 1)}
        out_h, out_w = 2 * h - 1, 2 * wd - 1
    _expect("eo", eo, *dims["eo"], c)
    _expect("oe", oe, *dims["oe"], c)
    _expect("oo", oo, *dims["oo"], c)
    out = np.zeros((c, out_h, out_w), dtype=ee.data.dtype)
    out[:, 0::2, 0::2] = ee.data
    if eo is not None:
        out[:, 0::2, 1::2] = eo.data
    if oe is not None:
        out[:, 1::2, 0::2] = oe.data
    if oo is not None:
        out[:, 1::2, 1::2] = oo.data
    return Tensor3(out)


def conv_transposed_decomposed(
    x: Tensor3, w: KernelStack, even_output: bool = False
) -> Tensor3:
    """Transposed conv as four small valid convs over the original input.

    The even variant widens the input by one zero row/column on the
    bottom/right for the classes whose last output row/col reads past
    the original extent; that mirrors the appended zero of the direct
    even-output construction.
    """
    sk = decompose_weight(w)
    ee = conv2d(x, sk.center, _VALID)
    if even_output:
        pad_r = Tensor3(np.pad(x.data, ((0, 0), (0, 0), (0, 1))))
        pad_b = Tensor3(np.pad(x.data, ((0, 0), (0, 1), (0, 0))))
        pad_br = Tensor3(np.pad(x.data, ((0, 0), (0, 1), (0, 1))))
        eo = conv2d(pad_r, sk.hpair, _VALID)
        oe = conv2d(pad_b, sk.vpair, _VALID)
        oo = conv2d(pad_br, sk.corner, _VALID)
    else:
        eo = conv2d(x, sk.hpair, _VALID) if x.width >= 2 else None
        oe = conv2d(x, sk.vpair, _VALID) if x.height >= 2 else None
        oo = conv2d(x, sk.corner, _VALID) if (x.height >= 2 and x.width >= 2) else None
    return interleave_outputs(ee, eo, oe, oo, even_output=even_output)

"""Shape-checked containers for feature maps and kernel stacks.

Everything downstream assumes (channels, height, width) layout for
activations and (out_channels, in_channels, kh, kw) for weights. The
wrappers exist to make dimension mix-ups loud; numerical work happens
on the underlying numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class ShapeError(ValueError):
    """Dimensions do not line up, or a tensor would be empty."""


def _validated(data, ndim: int, what: str) -> np.ndarray:
    arr = np.asarray(data)
    if arr.ndim != ndim:
        raise ShapeError(f"{what} must have {ndim} axes, got shape {arr.shape}")
    if arr.size == 0:
        raise ShapeError(f"{what} must be non-empty, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class Tensor3:
    """One activation stack laid out (channels, height, width)."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _validated(self.data, 3, "Tensor3"))

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def height(self) -> int:
        return self.data.shape[1]

    @property
    def width(self) -> int:
        return self.data.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.data.shape

    def at(self, c: int, y: int, x: int):
        """Bounds-checked element access; negative indices are errors, not wraparound."""
        if not (0 <= c < self.channels and 0 <= y < self.height and 0 <= x < self.width):
            raise IndexError(f"index {(c, y, x)} outside tensor of shape {self.shape}")
        return self.data[c, y, x].item()

    @classmethod
    def zeros(cls, channels: int, height: int, width: int, dtype=np.int64) -> "Tensor3":
        return cls(np.zeros((channels, height, width), dtype=dtype))


@dataclass(frozen=True, eq=False)
class KernelStack:
    """Convolution weights laid out (out_channels, in_channels, kh, kw)."""

    data: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "data", _validated(self.data, 4, "KernelStack"))

    @property
    def out_channels(self) -> int:
        return self.data.shape[0]

    @property
    def in_channels(self) -> int:
        return self.data.shape[1]

    @property
    def kh(self) -> int:
        return self.data.shape[2]

    @property
    def kw(self) -> int:
        return self.data.shape[3]

    def at(self, o: int, c: int, ky: int, kx: int):
        shape = self.data.shape
        if not all(0 <= i < s for i, s in zip((o, c, ky, kx), shape)):
            raise IndexError(f"index {(o, c, ky, kx)} outside kernel stack of shape {shape}")
        return self.data[o, c, ky, kx].item()


@dataclass(frozen=True)
class ConvGeometry:
    """Stride and symmetric zero padding for a plain convolution."""

    stride: int = 1
    pad: int = 0

    def __post_init__(self):
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.pad < 0:
            raise ValueError(f"pad must be >= 0, got {self.pad}")

"""Layer descriptions shared by the analysis and scheduling code.

A LayerSpec pins down just enough of a convolution layer to cost it:
kind, channel counts, input spatial dims, and the kind-specific knob
(dilation spacing, stride, or even/odd output parity). Kernels are
3x3 throughout; that is the only shape the machinery handles.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

DENSE = "dense"
DILATED = "dilated"
TRANSPOSED = "transposed"

KINDS = (DENSE, DILATED, TRANSPOSED)


@dataclass(frozen=True)
class LayerSpec:
    kind: str
    ci: int
    co: int
    h: int
    w: int
    d: Optional[int] = None            # dilated only: inserted zeros per gap
    stride: Optional[int] = None       # dense only
    even_output: Optional[bool] = None  # transposed only

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown layer kind {self.kind!r}")
        for name in ("ci", "co", "h", "w"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"{name} must be a positive int, got {v!r}")
        if self.kind == DENSE:
            self._reject(d=self.d, even_output=self.even_output)
            if self.stride is None:
                object.__setattr__(self, "stride", 1)
            elif not isinstance(self.stride, int) or self.stride < 1:
                raise ValueError(f"stride must be a positive int, got {self.stride!r}")
        elif self.kind == DILATED:
            self._reject(stride=self.stride, even_output=self.even_output)
            if not isinstance(self.d, int) or self.d < 0:
                raise ValueError(f"dilated layer needs integer d >= 0, got {self.d!r}")
        else:
            self._reject(d=self.d, stride=self.stride)
            if self.even_output is None:
                object.__setattr__(self, "even_output", False)
            elif not isinstance(self.even_output, bool):
                raise ValueError(f"even_output must be a bool, got {self.even_output!r}")

    def _reject(self, **fields):
        for name, v in fields.items():
            if v is not None:
                raise ValueError(f"{name} does not apply to {self.kind} layers")

    def output_shape(self) -> Tuple[int, int, int]:
        """(co, out_h, out_w) produced by this layer."""
        if self.kind == DENSE:
            # same-padded: pad 1 for the 3x3, then stride subsampling
            s = self.stride
            return (self.co, (self.h - 1) // s + 1, (self.w - 1) // s + 1)
        if self.kind == DILATED:
            return (self.co, self.h, self.w)
        if self.even_output:
            return (self.co, 2 * self.h, 2 * self.w)
        return (self.co, 2 * self.h - 1, 2 * self.w - 1)

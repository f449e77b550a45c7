"""Randomized equivalence checks between direct and decomposed paths.

Every layer in a config gets a shrunken twin (sides capped at 32,
channels at 4) so the check stays fast while exercising the same code
path, including partial edge blocks and parity classes. Inputs are
integers, so direct and decomposed results must match bit for bit; the
first differing cell is reported when they don't.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Tuple

import numpy as np

from .convolve import conv2d, conv_dilated_direct, conv_transposed_direct
from .dilated import conv_dilated_decomposed
from .layers import DENSE, DILATED, LayerSpec
from .network import NetworkConfig
from .tensors import ConvGeometry, KernelStack, Tensor3
from .transposed import conv_transposed_decomposed

_MAX_SIDE = 32
_MAX_CHANNELS = 4
_LO, _HI = -128, 128  # exclusive upper bound


class VerificationError(RuntimeError):
    """Direct and decomposed results disagreed."""


@dataclass(frozen=True)
class VerifiedLayer:
    label: str
    kind: str
    ci: int
    co: int
    h: int
    w: int
    checks: Tuple[str, ...]


def _shrink(spec: LayerSpec) -> LayerSpec:
    return replace(
        spec,
        ci=min(spec.ci, _MAX_CHANNELS),
        co=min(spec.co, _MAX_CHANNELS),
        h=min(spec.h, _MAX_SIDE),
        w=min(spec.w, _MAX_SIDE),
    )


def _compare(label: str, check: str, seed: int, got: Tensor3, want: Tensor3):
    if got.shape != want.shape:
        raise VerificationError(
            f"{label} [{check}, seed {seed}]: shape {got.shape} != {want.shape}"
        )
    if not np.array_equal(got.data, want.data):
        c, y, x = (int(v) for v in np.argwhere(got.data != want.data)[0])
        raise VerificationError(
            f"{label} [{check}, seed {seed}]: first mismatch at (c={c}, y={y}, x={x}): "
            f"got {got.data[c, y, x]}, want {want.data[c, y, x]}"
        )


def _verify_spec(label: str, spec: LayerSpec, rng, seed: int) -> Tuple[str, ...]:
    x = Tensor3(rng.integers(_LO, _HI, size=(spec.ci, spec.h, spec.w), dtype=np.int64))
    w = KernelStack(rng.integers(_LO, _HI, size=(spec.co, spec.ci, 3, 3), dtype=np.int64))
    if spec.kind == DENSE:
        direct = conv2d(x, w, ConvGeometry(stride=spec.stride, pad=1))
        if spec.stride == 1:
            _compare(label, "block-decomposition", seed, conv_dilated_decomposed(x, w, 0), direct)
            return ("block-decomposition",)
        full = conv2d(x, w, ConvGeometry(stride=1, pad=1))
        want = Tensor3(full.data[:, :: spec.stride, :: spec.stride])
        _compare(label, "stride-subsample", seed, direct, want)
        return ("stride-subsample",)
    if spec.kind == DILATED:
        direct = conv_dilated_direct(x, w, spec.d)
        dec = conv_dilated_decomposed(x, w, spec.d)
        _compare(label, "block-decomposition", seed, dec, direct)
        return ("block-decomposition",)
    direct = conv_transposed_direct(x, w, even_output=spec.even_output)
    dec = conv_transposed_decomposed(x, w, even_output=spec.even_output)
    _compare(label, "weight-decomposition", seed, dec, direct)
    return ("weight-decomposition",)


def verify_network(config: NetworkConfig, seed: int = 0) -> Tuple[VerifiedLayer, ...]:
    """Check every layer of ``config`` on random integer data.

    Raises VerificationError on the first disagreement; otherwise
    returns one record per layer describing what was checked.
    """
    results = []
    for index, entry in enumerate(config.layers):
        spec = _shrink(entry.spec)
        rng = np.random.default_rng([seed, index])
        checks = _verify_spec(entry.label, spec, rng, seed)
        results.append(
            VerifiedLayer(
                label=entry.label,
                kind=spec.kind,
                ci=spec.ci,
                co=spec.co,
                h=spec.h,
                w=spec.w,
                checks=checks,
            )
        )
    return tuple(results)

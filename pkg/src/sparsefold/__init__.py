"""Structured-sparsity scheduling for dilated and transposed convolutions.

Dilated and stride-2 transposed 3x3 convolutions are mostly zeros once
expanded for a dense engine. This package decomposes both into small
dense pieces (input phase blocks for dilation, weight parity classes
for transposition), proves the decompositions bit-exact against direct
computation, and costs the resulting schedules on a block-parallel MAC
array.
"""

from .convolve import (
    conv2d,
    conv_dilated_direct,
    conv_transposed_direct,
    dilate_kernel,
    zero_insert,
)
from .dilated import (
    BlockIndex,
    InputBlock,
    block_shape,
    conv_dilated_decomposed,
    decompose_input,
    stitch_outputs,
)
from .layers import DENSE, DILATED, KINDS, TRANSPOSED, LayerSpec
from .macs import MacCount, count_macs
from .network import (
    Aggregate,
    ClassSummary,
    ConfigError,
    LayerEntry,
    NetworkConfig,
    RowReport,
    RunReport,
    analyze,
    from_mapping,
    load_config,
)
from .pe import (
    ArrayConfig,
    CycleReport,
    analyze_layer,
    cycles_dense,
    cycles_dilated,
    cycles_transposed,
    ideal_cycles,
    layer_cycles,
    weight_vector_count,
)
from .report import render_csv, render_json, report_dict
from .schedule import (
    BudgetError,
    ScheduleTrace,
    Slot,
    enumerate_schedule,
)
from .tensors import ConvGeometry, KernelStack, ShapeError, Tensor3
from .transposed import (
    SubKernelSet,
    conv_transposed_decomposed,
    decompose_weight,
    interleave_outputs,
)
from .verification import VerificationError, VerifiedLayer, verify_network

__version__ = "0.1.0"

__all__ = [
    "ArrayConfig",
    "Aggregate",
    "BlockIndex",
    "BudgetError",
    "ClassSummary",
    "ConfigError",
    "ConvGeometry",
    "CycleReport",
    "DENSE",
    "DILATED",
    "InputBlock",
    "KINDS",
    "KernelStack",
    "LayerEntry",
    "LayerSpec",
    "MacCount",
    "NetworkConfig",
    "RowReport",
    "RunReport",
    "ScheduleTrace",
    "ShapeError",
    "Slot",
    "SubKernelSet",
    "TRANSPOSED",
    "Tensor3",
    "VerificationError",
    "VerifiedLayer",
    "analyze",
    "analyze_layer",
    "block_shape",
    "conv2d",
    "conv_dilated_decomposed",
    "conv_dilated_direct",
    "conv_transposed_decomposed",
    "conv_transposed_direct",
    "count_macs",
    "cycles_dense",
    "cycles_dilated",
    "cycles_transposed",
    "decompose_input",
    "decompose_weight",
    "dilate_kernel",
    "enumerate_schedule",
    "from_mapping",
    "ideal_cycles",
    "interleave_outputs",
    "layer_cycles",
    "load_config",
    "render_csv",
    "render_json",
    "report_dict",
    "stitch_outputs",
    "verify_network",
    "weight_vector_count",
    "zero_insert",
]

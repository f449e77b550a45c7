"""Whole-network configs and the analysis that runs over them.

Configs are plain JSON: a name, an optional array geometry, and an
ordered layer list. The loader is strict about fields so a typo'd knob
fails loudly with its location instead of silently falling back to a
default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Tuple, Union

from .layers import DENSE, DILATED, KINDS, TRANSPOSED, LayerSpec
from .macs import MacCount
from .pe import ArrayConfig, CycleReport, analyze_layer


class ConfigError(ValueError):
    """A config file failed validation; the message carries the location."""


@dataclass(frozen=True)
class LayerEntry:
    label: str
    spec: LayerSpec
    note: str = ""


@dataclass(frozen=True)
class NetworkConfig:
    name: str
    array: ArrayConfig
    layers: Tuple[LayerEntry, ...]


_COMMON_FIELDS = {"label", "kind", "ci", "co", "h", "w", "note"}
_KIND_FIELDS = {DENSE: {"stride"}, DILATED: {"d"}, TRANSPOSED: {"even_output"}}


def _require_int(item: Mapping, name: str, where: str, minimum: int = 1) -> int:
    if name not in item:
        raise ConfigError(f"{where}: missing '{name}'")
    v = item[name]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise ConfigError(f"{where}: '{name}' must be an integer >= {minimum}, got {v!r}")
    return v


def _layer_entry(item, where: str) -> LayerEntry:
    if not isinstance(item, dict):
        raise ConfigError(f"{where}: expected an object, got {type(item).__name__}")
    label = item.get("label")
    if not isinstance(label, str) or not label:
        raise ConfigError(f"{where}: 'label' must be a non-empty string")
    where = f"{where} ({label})"
    kind = item.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"{where}: 'kind' must be one of {sorted(KINDS)}, got {kind!r}")
    unknown = set(item) - _COMMON_FIELDS - _KIND_FIELDS[kind]
    if unknown:
        raise ConfigError(f"{where}: unknown field(s) {sorted(unknown)}")
    kwargs = {name: _require_int(item, name, where) for name in ("ci", "co", "h", "w")}
    if kind == DILATED:
        # spacing 0 is just a dense layer; keep configs honest about that
        kwargs["d"] = _require_int(item, "d", where, minimum=1)
    elif kind == DENSE and "stride" in item:
        kwargs["stride"] = _require_int(item, "stride", where)
    elif kind == TRANSPOSED and "even_output" in item:
        if not isinstance(item["even_output"], bool):
            raise ConfigError(f"{where}: 'even_output' must be a boolean")
        kwargs["even_output"] = item["even_output"]
    note = item.get("note", "")
    if not isinstance(note, str):
        raise ConfigError(f"{where}: 'note' must be a string")
    try:
        spec = LayerSpec(kind=kind, **kwargs)
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
    return LayerEntry(label=label, spec=spec, note=note)


def from_mapping(data, source: str = "<config>") -> NetworkConfig:
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: top level must be an object")
    unknown = set(data) - {"name", "array", "layers"}
    if unknown:
        raise ConfigError(f"{source}: unknown field(s) {sorted(unknown)}")
    name = data.get("name")
    if not isinstance(name, str) or not name:
        raise ConfigError(f"{source}: 'name' must be a non-empty string")
    array_data = data.get("array", {})
    if not isinstance(array_data, dict):
        raise ConfigError(f"{source}: 'array' must be an object")
    bad = set(array_data) - {"blocks", "rows"}
    if bad:
        raise ConfigError(f"{source}: array: unknown field(s) {sorted(bad)}")
    array_kwargs = {
        k: _require_int(array_data, k, f"{source}: array") for k in array_data
    }
    array = ArrayConfig(**array_kwargs)
    raw_layers = data.get("layers")
    if not isinstance(raw_layers, list) or not raw_layers:
        raise ConfigError(f"{source}: 'layers' must be a non-empty list")
    entries = tuple(
        _layer_entry(item, f"layers[{i}]") for i, item in enumerate(raw_layers)
    )
    seen = {}
    for i, e in enumerate(entries):
        if e.label in seen:
            raise ConfigError(
                f"layers[{i}] ({e.label}): duplicate label, first used at layers[{seen[e.label]}]"
            )
        seen[e.label] = i
    return NetworkConfig(name=name, array=array, layers=entries)


def load_config(path: Union[str, Path]) -> NetworkConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    return from_mapping(data, source=str(path))


@dataclass(frozen=True)
class RowReport:
    label: str
    report: CycleReport
    note: str = ""


@dataclass(frozen=True)
class ClassSummary:
    """Per-layer-kind rollup of a run."""

    kind: str
    layer_count: int
    cycles: int
    ideal_dense_cycles: int
    ideal_sparse_cycles: int

    @property
    def speedup(self) -> float:
        return self.ideal_dense_cycles / self.cycles

    @property
    def cycles_saved_pct(self) -> float:
        return 100.0 * (1.0 - self.cycles / self.ideal_dense_cycles)


@dataclass(frozen=True)
class Aggregate:
    cycles: int
    ideal_dense_cycles: int
    ideal_sparse_cycles: int
    macs: MacCount
    macs_per_cycle: int

    @property
    def speedup(self) -> float:
        return self.ideal_dense_cycles / self.cycles

    @property
    def operations_skipped_pct(self) -> float:
        """Share of dense-engine cycles the schedules eliminate."""
        return 100.0 * (1.0 - self.cycles / self.ideal_dense_cycles)

    @property
    def mac_operations_skipped_pct(self) -> float:
        """Share of dense-engine taps that are structurally zero."""
        return 100.0 * (1.0 - self.macs.nonzero / self.macs.total)

    @property
    def utilization(self) -> float:
        return self.macs.nonzero / (self.cycles * self.macs_per_cycle)

    @property
    def sparse_efficiency(self) -> float:
        return self.ideal_sparse_cycles / self.cycles


@dataclass(frozen=True)
class RunReport:
    name: str
    array: ArrayConfig
    rows: Tuple[RowReport, ...]
    total: Aggregate
    classes: Tuple[ClassSummary, ...]


def analyze(config: NetworkConfig) -> RunReport:
    rows = tuple(
        RowReport(label=e.label, report=analyze_layer(e.spec, config.array), note=e.note)
        for e in config.layers
    )
    total = Aggregate(
        cycles=sum(r.report.cycles for r in rows),
        ideal_dense_cycles=sum(r.report.ideal_dense_cycles for r in rows),
        ideal_sparse_cycles=sum(r.report.ideal_sparse_cycles for r in rows),
        macs=MacCount(
            total=sum(r.report.macs.total for r in rows),
            nonzero=sum(r.report.macs.nonzero for r in rows),
        ),
        macs_per_cycle=config.array.macs_per_cycle,
    )
    classes = []
    for kind in (DENSE, DILATED, TRANSPOSED):
        member = [r.report for r in rows if r.report.layer.kind == kind]
        if not member:
            continue
        classes.append(
            ClassSummary(
                kind=kind,
                layer_count=len(member),
                cycles=sum(m.cycles for m in member),
                ideal_dense_cycles=sum(m.ideal_dense_cycles for m in member),
                ideal_sparse_cycles=sum(m.ideal_sparse_cycles for m in member),
            )
        )
    return RunReport(
        name=config.name, array=config.array, rows=rows, total=total, classes=tuple(classes)
    )

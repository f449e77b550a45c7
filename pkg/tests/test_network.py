"""Config loading, whole-network analysis, rendering, and verification."""

import importlib.util
import json
from pathlib import Path

import numpy as np
import pytest

from sparsefold import (
    ConfigError,
    KernelStack,
    SubKernelSet,
    VerificationError,
    analyze,
    from_mapping,
    load_config,
    render_csv,
    render_json,
    report_dict,
    verify_network,
)
from sparsefold import transposed as transposed_mod

ROOT = Path(__file__).resolve().parent.parent
TOY = ROOT / "configs" / "toy.json"
ENET = ROOT / "configs" / "enet512.json"


def _toy():
    return load_config(TOY)


def test_toy_config_loads():
    cfg = _toy()
    assert cfg.name == "toy"
    assert (cfg.array.blocks, cfg.array.rows) == (3, 2)
    assert [e.label for e in cfg.layers] == ["front", "middle-d1", "up"]


def test_enet_config_loads_35_layers():
    cfg = load_config(ENET)
    assert cfg.name == "enet512"
    assert len(cfg.layers) == 35
    assert (cfg.array.blocks, cfg.array.rows) == (16, 4)
    kinds = [e.spec.kind for e in cfg.layers]
    assert kinds.count("dilated") == 8
    assert kinds.count("transposed") == 3
    assert kinds.count("dense") == 24


def test_enet_config_matches_generator():
    """configs/enet512.json is generated; regenerating must be a no-op."""
    path = ROOT / "scripts" / "make_enet512.py"
    spec = importlib.util.spec_from_file_location("make_enet512", path)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    assert json.loads(ENET.read_text()) == mod.build()


def _base():
    return {
        "name": "x",
        "layers": [
            {"label": "a", "kind": "dense", "ci": 1, "co": 1, "h": 4, "w": 4}
        ],
    }


def test_defaults_when_array_omitted():
    cfg = from_mapping(_base())
    assert (cfg.array.blocks, cfg.array.rows) == (16, 4)


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda d: d.update(extra=1), "unknown field"),
        (lambda d: d.pop("name"), "'name'"),
        (lambda d: d.update(layers=[]), "'layers'"),
        (lambda d: d["layers"][0].pop("label"), "'label'"),
        (lambda d: d["layers"][0].update(kind="pointwise"), "'kind'"),
        (lambda d: d["layers"][0].update(depth=3), "unknown field"),
        (lambda d: d["layers"][0].pop("ci"), "missing 'ci'"),
        (lambda d: d["layers"][0].update(h=0), "'h'"),
        (lambda d: d["layers"][0].update(h=True), "'h'"),
        (lambda d: d.update(array={"blocks": 2, "cols": 2}), "unknown field"),
        (lambda d: d.update(array={"blocks": "two"}), "'blocks'"),
    ],
)
def test_schema_errors_carry_location(mutate, fragment):
    data = _base()
    mutate(data)
    with pytest.raises(ConfigError, match=fragment):
        from_mapping(data)


def test_kind_specific_fields_rejected_elsewhere():
    data = _base()
    data["layers"][0]["d"] = 2  # a dense layer has no spacing knob
    with pytest.raises(ConfigError, match=r"layers\[0\] \(a\)"):
        from_mapping(data)


def test_dilated_spacing_zero_rejected_in_configs():
    data = _base()
    data["layers"][0] = {"label": "a", "kind": "dilated", "ci": 1, "co": 1,
                         "h": 4, "w": 4, "d": 0}
    with pytest.raises(ConfigError, match="d"):
        from_mapping(data)


def test_duplicate_labels_rejected():
    data = _base()
    data["layers"].append(dict(data["layers"][0]))
    with pytest.raises(ConfigError, match="duplicate label"):
        from_mapping(data)


def test_invalid_json_reported_with_path(tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(p)


def test_toy_report_golden_values():
    report = analyze(_toy())
    by_label = {r.label: r.report for r in report.rows}
    assert by_label["front"].cycles == 176
    assert by_label["middle-d1"].cycles == 160
    assert by_label["up"].cycles == 32
    assert by_label["front"].ideal_dense_cycles == 108
    assert by_label["middle-d1"].ideal_dense_cycles == 257
    assert by_label["up"].ideal_dense_cycles == 81
    assert by_label["middle-d1"].ideal_sparse_cycles == 89
    assert by_label["up"].ideal_sparse_cycles == 23
    t = report.total
    assert t.cycles == 368
    assert t.ideal_dense_cycles == 446
    assert t.ideal_sparse_cycles == 220
    assert t.operations_skipped_pct == pytest.approx(17.4888, abs=1e-3)
    assert t.speedup == pytest.approx(1.21196, abs=1e-4)
    assert t.mac_operations_skipped_pct == pytest.approx(50.8246, abs=1e-3)


def test_aggregate_is_sum_of_rows():
    report = analyze(load_config(ENET))
    assert report.total.cycles == sum(r.report.cycles for r in report.rows)
    assert report.total.macs.nonzero == sum(r.report.macs.nonzero for r in report.rows)
    for c in report.classes:
        members = [r.report for r in report.rows if r.report.layer.kind == c.kind]
        assert c.layer_count == len(members)
        assert c.cycles == sum(m.cycles for m in members)


def test_toy_csv_golden():
    got = render_csv(analyze(_toy()))
    want = (
        "label,kind,cycles,ideal_dense_cycles,ideal_sparse_cycles,utilization,speedup\n"
        "front,dense,176,108,108,0.611111,0.613636\n"
        "middle-d1,dilated,160,257,89,0.555556,1.606250\n"
        "up,transposed,32,81,23,0.694444,2.531250\n"
        "AGGREGATE,all,368,446,220,0.594203,1.211957\n"
    )
    assert got == want


def test_json_report_round_trips():
    report = analyze(_toy())
    data = json.loads(render_json(report))
    assert data["name"] == "toy"
    assert [l["label"] for l in data["layers"]] == ["front", "middle-d1", "up"]
    assert data["layers"][1]["d"] == 1
    assert data["layers"][2]["even_output"] is False
    assert data["total"]["cycles"] == 368
    assert data["array"]["macs_per_cycle"] == 18
    assert {c["kind"] for c in data["classes"]} == {"dense", "dilated", "transposed"}


def test_rendering_is_deterministic():
    a = analyze(_toy())
    b = analyze(load_config(TOY))
    assert render_json(a) == render_json(b)
    assert render_csv(a) == render_csv(b)
    assert report_dict(a) == report_dict(b)


def test_verify_network_passes_on_shipped_configs():
    for path in (TOY, ENET):
        results = verify_network(load_config(path), seed=1)
        assert len(results) == len(load_config(path).layers)
        assert all(r.checks for r in results)


def test_verify_checks_named_by_path():
    results = {r.label: r for r in verify_network(_toy(), seed=0)}
    assert results["front"].checks == ("block-decomposition",)
    assert results["middle-d1"].checks == ("block-decomposition",)
    assert results["up"].checks == ("weight-decomposition",)


def test_verify_shrinks_large_layers():
    results = {r.label: r for r in verify_network(load_config(ENET), seed=0)}
    assert results["initial"].h == 32 and results["initial"].w == 32
    assert results["fullconv"].co == 4


def test_verify_catches_a_wrong_subkernel(monkeypatch):
    """Negative control: corrupt one sub-kernel and the checker must
    point at the transposed layer."""
    real = transposed_mod.decompose_weight

    def crooked(w):
        sk = real(w)
        return SubKernelSet(
            corner=sk.corner,
            hpair=sk.hpair,
            vpair=sk.vpair,
            center=KernelStack(-sk.center.data),
        )

    monkeypatch.setattr(transposed_mod, "decompose_weight", crooked)
    with pytest.raises(VerificationError, match="up"):
        verify_network(_toy(), seed=0)


def test_verify_catches_stride_mistake(monkeypatch):
    """Second control: break the dense stride identity."""
    import sparsefold.verification as vf

    cfg = from_mapping(
        {"name": "s", "layers": [{"label": "down", "kind": "dense", "ci": 2,
                                  "co": 2, "h": 8, "w": 8, "stride": 2}]}
    )
    assert verify_network(cfg, seed=3)  # sanity: passes untouched
    real = vf.conv2d

    def skewed(x, w, geom):
        out = real(x, w, geom)
        if geom.stride > 1:
            bad = np.array(out.data)
            bad[..., 0, 0] += 1
            return type(out)(bad)
        return out

    monkeypatch.setattr(vf, "conv2d", skewed)
    with pytest.raises(VerificationError, match="down"):
        verify_network(cfg, seed=3)

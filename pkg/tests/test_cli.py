import json

import pytest

from altproj.cli import ConfigError, load_config, main


def write_config(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return path


def read_csv_rows(path):
    lines = [l for l in path.read_text().strip().split("\n") if not l.startswith("#")]
    header = lines[0].split(",")
    return header, [dict(zip(header, l.split(","))) for l in lines[1:]]


def test_run_example44(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "kind": "example44", "seed": 5, "record_stride": 1,
        "params": {"n_blocks": 6, "max_block_len": 10000, "start": [0.0, 0.0]},
    })
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 0
    header, rows = read_csv_rows(tmp_path / "out" / "trace.csv")
    assert header == ["n", "block", "res_a", "norm_a", "norm_b", "gap_ab", "dist_target"]
    assert len({r["block"] for r in rows}) >= 6
    out = capsys.readouterr().out
    assert "blocks_completed=6" in out


def test_run_example51(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "example51", "seed": 0, "record_stride": 1,
        "params": {"n_blocks": 4},
    })
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out"), "--quiet"])
    assert code == 0
    _, rows = read_csv_rows(tmp_path / "out" / "trace.csv")
    assert float(rows[-1]["norm_a"]) > 2.0


def test_run_classical_from_set_descriptors(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "classical", "seed": 0, "max_iter": 30,
        "params": {
            "A": {"kind": "ortho_subspace", "basis": [[1.0, 0.0]]},
            "B": {"kind": "ortho_subspace",
                  "basis": [[0.7071067811865476, 0.7071067811865476]]},
            "start": [1.0, 0.0],
            "target": [0.0, 0.0],
        },
    })
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out"), "--quiet"])
    assert code == 0
    _, rows = read_csv_rows(tmp_path / "out" / "trace.csv")
    assert float(rows[-1]["norm_a"]) < 1e-8
    assert rows[-1]["dist_target"] != ""


def test_run_perturbed_blocks(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "perturbed", "seed": 0,
        "params": {
            "blocks": [
                {"A": {"kind": "ortho_subspace", "basis": [[1.0, 0.0]]},
                 "B": {"kind": "halfspace", "a": [0.0, 1.0], "b": 0.5},
                 "len": 3},
                {"A": {"kind": "ortho_subspace", "basis": [[1.0, 0.0]]},
                 "B": {"kind": "halfspace", "a": [0.0, 1.0], "b": 0.1},
                 "len": 2},
            ],
            "start": [2.0, 3.0],
        },
    })
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out"), "--quiet"])
    assert code == 0
    _, rows = read_csv_rows(tmp_path / "out" / "trace.csv")
    assert rows[-1]["block"] == "2"


def test_run_stable_scenario(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "stable-scenario", "seed": 0, "max_iter": 2000,
        "record_stride": 100,
        "params": {"scenario": "transversal_planes", "delta_law": "inv_n_sq"},
    })
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out"), "--quiet"])
    assert code == 0
    _, rows = read_csv_rows(tmp_path / "out" / "trace.csv")
    assert float(rows[-1]["norm_a"]) < 1e-4


def test_run_ell2_small(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "kind": "ell2", "seed": 0,
        "params": {"d": 5, "H": 2, "ratio": 0.5},
    })
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 0
    out = capsys.readouterr().out
    assert "block 1:" in out and "block 2:" in out
    doc = json.loads((tmp_path / "out" / "construction.json").read_text())
    assert doc["d"] == 5 and len(doc["blocks"]) == 2


def test_run_ell2_budget_skips_engine(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "kind": "ell2", "seed": 0,
        "params": {"d": 5, "H": 2, "ratio": 0.5, "engine_step_budget": 10},
    })
    code = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert code == 0
    assert "engine run skipped" in capsys.readouterr().out
    doc = json.loads((tmp_path / "out" / "report.json").read_text())
    assert doc["engine_run"] is False
    assert all(sq > 2.0 ** (h + 1) for h, sq in enumerate(doc["block_end_norm_sq"]))


def test_malformed_json_exits_one(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["run", "--config", str(path)]) == 1
    assert "not valid JSON" in capsys.readouterr().err


def test_unknown_field_named_in_diagnostic(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "example44",
                                  "params": {"n_blocks": 4, "bogus": 1}})
    assert main(["run", "--config", str(cfg)]) == 1
    assert "bogus" in capsys.readouterr().err


def test_missing_config_exits_one(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 1
    assert "cannot read config" in capsys.readouterr().err


def test_budget_exhaustion_exits_two(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "example44", "seed": 0,
        "params": {"n_blocks": 4, "max_block_len": 1},
    })
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")]) == 2


def test_seed_override_changes_header(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "example44", "seed": 5, "record_stride": 1,
        "params": {"n_blocks": 2},
    })
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "a"), "--quiet"])
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "b"),
          "--seed", "9", "--quiet"])
    a = (tmp_path / "a" / "trace.csv").read_text()
    b = (tmp_path / "b" / "trace.csv").read_text()
    assert "# seed=5" in a and "# seed=9" in b


def test_determinism_byte_identical(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "example44", "seed": 3, "record_stride": 1,
        "params": {"n_blocks": 5},
    })
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "r1"), "--quiet"])
    main(["run", "--config", str(cfg), "--out", str(tmp_path / "r2"), "--quiet"])
    b1 = (tmp_path / "r1" / "trace.csv").read_bytes()
    b2 = (tmp_path / "r2" / "trace.csv").read_bytes()
    assert b1 == b2


def test_probe_omega(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "probe", "seed": 1,
        "params": {"probe": "omega",
                   "U": [[1.0, 0.0, 0.0]], "V": [[0.0, 1.0, 0.0]]},
    })
    assert main(["probe", "--config", str(cfg), "--out", str(tmp_path / "o"),
                 "--quiet"]) == 0
    doc = json.loads((tmp_path / "o" / "report.json").read_text())
    assert doc["result"]["omega"] == pytest.approx(0.0, abs=1e-12)
    assert "principal_cosines" in doc["result"]


def test_probe_exposure_disc(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "probe", "seed": 2,
        "params": {"probe": "exposure",
                   "set": {"kind": "ball", "center": [0.0, 1.0], "radius": 1.0},
                   "f": [0.0, -1.0], "alphas": [0.2, 0.1, 0.05],
                   "n_samples": 200},
    })
    assert main(["probe", "--config", str(cfg), "--out", str(tmp_path / "o"),
                 "--quiet"]) == 0
    doc = json.loads((tmp_path / "o" / "report.json").read_text())
    ratios = doc["result"]["ratios"]
    assert ratios == sorted(ratios, reverse=True)


def test_probe_aw_family(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "probe", "seed": 0,
        "params": {"probe": "aw", "family": "unstable_bodies", "count": 5,
                   "N": 2, "n_samples": 500},
    })
    assert main(["probe", "--config", str(cfg), "--out", str(tmp_path / "o"),
                 "--quiet"]) == 0
    doc = json.loads((tmp_path / "o" / "report.json").read_text())
    hs = [row["h_N"] for row in doc["result"]]
    # within each parity class the distances shrink
    assert hs[2] < hs[0] + 1e-9 and hs[4] < hs[2] + 1e-9
    assert hs[3] < hs[1] + 1e-9


def test_probe_separation(tmp_path):
    cfg = write_config(tmp_path, {
        "kind": "probe", "seed": 0,
        "params": {"probe": "separation", "M": 0.5, "omega": 0.3},
    })
    assert main(["probe", "--config", str(cfg), "--out", str(tmp_path / "o"),
                 "--quiet"]) == 0
    doc = json.loads((tmp_path / "o" / "report.json").read_text())
    assert 0 < doc["result"]["eps"] < 0.5
    assert doc["result"]["eta"] == pytest.approx(0.65, abs=1e-12)


def test_validate_example44(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "example44",
                                  "params": {"n_blocks": 4}})
    assert main(["validate", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "[ok]" in out and "validated" in out


def test_validate_ell2_prints_inequalities(tmp_path, capsys):
    cfg = write_config(tmp_path, {"kind": "ell2",
                                  "params": {"d": 5, "H": 2, "ratio": 0.5}})
    assert main(["validate", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "growth window" in out
    assert "block lengths" in out


def test_validate_infeasible_scenario_exits_one(tmp_path, capsys):
    cfg = write_config(tmp_path, {
        "kind": "stable-scenario",
        "params": {"scenario": "orthant_polar",
                   "scenario_params": {"d": 2, "a": [1.0, -1.0]}},
    })
    assert main(["validate", "--config", str(cfg)]) == 1
    assert "error" in capsys.readouterr().err


def test_load_config_rejects_bad_kind(tmp_path):
    cfg = write_config(tmp_path, {"kind": "nope", "params": {}})
    with pytest.raises(ConfigError):
        load_config(cfg)


def test_load_config_rejects_unknown_root_key(tmp_path):
    cfg = write_config(tmp_path, {"kind": "example44", "params": {"n_blocks": 2},
                                  "extra": 1})
    with pytest.raises(ConfigError):
        load_config(cfg)

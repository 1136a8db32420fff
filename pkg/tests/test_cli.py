import csv
import json
from pathlib import Path

import pytest
import yaml

from parray import scenarios as sc
from parray.cli import dumps_json, fmt, main, summary_path
from parray.config import geometry_to_config, load_config, parse_config
from parray.errors import ConfigError

HERE = Path(__file__).parent
DATA, GOLDEN = HERE / "data", HERE / "golden"

CASES = [
    ("pattern", "pattern_small.yaml", "pattern_small.json"),
    ("groundsweep", "sweep_small.yaml", "sweep_small.csv"),
    ("montecarlo", "mc_small.yaml", "mc_small.csv"),
    ("optimize", "optimize_small.yaml", "optimize_small.json"),
]


def run(cmd, config, out, *extra):
    return main([cmd, "--config", str(config), "--out", str(out), *extra])


@pytest.mark.parametrize("cmd,config,golden", CASES)
def test_matches_golden_file(tmp_path, cmd, config, golden):
    out = tmp_path / golden
    assert run(cmd, DATA / config, out) == 0
    assert out.read_bytes() == (GOLDEN / golden).read_bytes()
    if cmd == "montecarlo":
        assert summary_path(out).read_bytes() == (GOLDEN / (golden + ".summary.json")).read_bytes()


@pytest.mark.parametrize("cmd,config,golden", CASES)
def test_rerun_is_byte_identical(tmp_path, cmd, config, golden):
    a, b = tmp_path / ("a_" + golden), tmp_path / ("b_" + golden)
    assert run(cmd, DATA / config, a) == 0
    assert run(cmd, DATA / config, b, "--threads", "3") == 0
    assert a.read_bytes() == b.read_bytes()


def test_pattern_schema(tmp_path):
    out = tmp_path / "p.json"
    assert run("pattern", DATA / "pattern_small.yaml", out) == 0
    d = json.loads(out.read_text())
    assert d["schema_version"] == 1
    assert len(d["power_db"]) == len(d["theta_deg"]) == 37
    assert all(len(row) == len(d["phi_deg"]) == 73 for row in d["power_db"])
    assert max(max(r) for r in d["power_db"]) == 0.0
    assert set(d["metrics"]) == {"directivity_db", "beam_azimuth_deg", "beam_elevation_deg",
                                 "beamwidth_az_deg", "side_lobe_level_db"}
    assert abs(d["metrics"]["beam_azimuth_deg"]) < 2


def test_montecarlo_zero_error_rows_identical(tmp_path):
    cfg = yaml.safe_load((DATA / "mc_small.yaml").read_text())
    cfg["montecarlo"].update(position_error_max_m=0.0, orientation_error_max_deg=0.0, trials=3)
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(cfg))
    out = tmp_path / "mc.csv"
    assert run("montecarlo", path, out) == 0
    rows = list(csv.DictReader(line for line in out.read_text().splitlines() if not line.startswith("#")))
    assert len(rows) == 3
    assert len({(r["directivity_db"], r["beam_error_deg"]) for r in rows}) == 1
    summary = json.loads(summary_path(out).read_text())
    assert summary["trials"] == 3 and summary["failed"] == 0


def test_groundsweep_header(tmp_path):
    out = tmp_path / "s.csv"
    assert run("groundsweep", DATA / "sweep_small.yaml", out) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# schema_version=1"
    assert lines[1] == "epsilon_r,sigma_s_per_m,directivity_db,beam_error_deg"


def test_missing_frequency_exit_2(tmp_path, capsys):
    cfg = yaml.safe_load((DATA / "pattern_small.yaml").read_text())
    del cfg["frequency_hz"]
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(cfg))
    assert run("pattern", path, tmp_path / "o.json") == 2
    assert "frequency_hz" in capsys.readouterr().err


def test_unknown_key_exit_2(tmp_path, capsys):
    cfg = yaml.safe_load((DATA / "pattern_small.yaml").read_text())
    cfg["elements"][1]["colour"] = "red"
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(cfg))
    assert run("pattern", path, tmp_path / "o.json") == 2
    assert "elements[1].colour" in capsys.readouterr().err


def test_missing_block_exit_2(tmp_path):
    assert run("groundsweep", DATA / "pattern_small.yaml", tmp_path / "o.csv") == 2
    assert run("montecarlo", DATA / "pattern_small.yaml", tmp_path / "o.csv") == 2
    assert run("optimize", DATA / "pattern_small.yaml", tmp_path / "o.json") == 2


def test_unwritable_output_exit_3(tmp_path):
    assert run("montecarlo", DATA / "mc_small.yaml", tmp_path / "missing" / "o.csv") == 3


def test_missing_config_exit_3(tmp_path):
    assert run("pattern", tmp_path / "nope.yaml", tmp_path / "o.json") == 3


def test_solver_failure_exit_4(tmp_path):
    cfg = yaml.safe_load((DATA / "pattern_small.yaml").read_text())
    cfg["elements"][0]["length_wl"] = 0.9      # outside the sinusoidal-current band
    path = tmp_path / "c.yaml"
    path.write_text(yaml.safe_dump(cfg))
    assert run("pattern", path, tmp_path / "o.json") == 4


def test_grid_override(tmp_path):
    out = tmp_path / "p.json"
    assert run("pattern", DATA / "pattern_small.yaml", out, "--grid-deg", "2") == 0
    assert len(json.loads(out.read_text())["theta_deg"]) == 91
    assert run("pattern", DATA / "pattern_small.yaml", out, "--grid-deg", "7") == 2


def test_json_config_accepted(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps(geometry_to_config(sc.three_element(), grid_deg=5.0)))
    assert run("pattern", path, tmp_path / "o.json") == 0


def test_config_roundtrip():
    g = sc.baseline_yagi(sc.CONCRETE)
    assert parse_config(geometry_to_config(g)).geometry == g


def test_metres_and_wavelengths_exclusive():
    cfg = geometry_to_config(sc.three_element())
    cfg["elements"][0]["length_wl"] = 0.5
    with pytest.raises(ConfigError, match="elements\\[0\\].length"):
        parse_config(cfg)


@pytest.mark.parametrize("path,value,field", [
    (("frequency_hz",), "forty", "frequency_hz"),
    (("ground", "kind"), "swamp", "ground.kind"),
    (("elements", 1, "role"), "boss", "elements[1].role"),
    (("elements", 0, "radius_m"), 2.0, "elements[0]"),
])
def test_field_addressed_errors(path, value, field):
    cfg = geometry_to_config(sc.three_element(sc.DRY_GROUND))
    node = cfg
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    with pytest.raises(ConfigError, match=field.replace("[", "\\[").replace("]", "\\]")):
        parse_config(cfg)


def test_float_format():
    assert fmt(1 / 3) == "0.333333333"
    assert dumps_json({"x": float("nan"), "y": [1e-20 / 3]}) == '{\n "x": null,\n "y": [\n  3.33333333e-21\n ]\n}\n'


def test_log_env_does_not_break(tmp_path, monkeypatch):
    monkeypatch.setenv("PARRAY_LOG", "nonsense")
    assert run("pattern", DATA / "pattern_small.yaml", tmp_path / "o.json") == 0


def test_shipped_configs_parse():
    for path in sorted((HERE.parent / "configs").glob("*.yaml")):
        load_config(path)

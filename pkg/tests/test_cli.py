import json
import math

import numpy as np
import pytest

from entpow import __version__
from entpow.cli import ConfigError, ExperimentConfig, main, parse_tau
from entpow.floquet import FieldConfig


def read_csv(path):
    lines = path.read_text().splitlines()
    header = lines[1].split(",")
    rows = [[float(x) if x else np.nan for x in line.split(",")] for line in lines[2:]]
    return lines[0], header, np.array(rows)


@pytest.mark.parametrize("text,value", [
    ("pi/4", math.pi / 4), ("3pi/8", 3 * math.pi / 8), ("2*pi/3", 2 * math.pi / 3),
    ("pi", math.pi), ("0.7", 0.7), (0.25, 0.25), (" PI / 4 ", math.pi / 4),
])
def test_parse_tau(text, value):
    assert parse_tau(text) == value


def test_parse_tau_rejects_garbage():
    with pytest.raises(ConfigError):
        parse_tau("quarter")


def test_config_hash_ignores_output_dir(tmp_path):
    fc = FieldConfig.from_preset("set-i", 4, math.pi / 4)
    a = ExperimentConfig("oracle-check", fc, output_dir=tmp_path / "a")
    b = ExperimentConfig("oracle-check", fc, output_dir=tmp_path / "b")
    c = ExperimentConfig("oracle-check", fc, seed=1)
    assert a.config_hash() == b.config_hash() != c.config_hash()
    assert a.n_max == 16


def test_oracle_check_exit_zero(tmp_path, capsys):
    out = tmp_path / "oracle"
    assert main(["oracle-check", "--preset", "set-i", "--tau", "pi/4", "-L", "6", "-o", str(out)]) == 0
    assert "PASS" in capsys.readouterr().out
    report = json.loads((out / "report.json").read_text())
    assert report["oracle_pass"] is True
    assert max(report["max_abs_error"].values()) < 1e-8
    assert report["seed"] == 0 and "wall_time_s" in report
    assert report["config"]["field_config"]["preset"] == "set-i"
    first, header, rows = read_csv(out / "series.csv")
    assert first.startswith(f"# entpow {__version__}") and "config_hash=" in first and "seed=0" in first
    np.testing.assert_allclose(rows[:, header.index("E_vN")],
                               rows[:, header.index("exact_E_vN")], atol=1e-8)


def test_oracle_check_wrong_preset(tmp_path, capsys):
    status = main(["oracle-check", "--preset", "set-ni", "--tau", "pi/4", "-L", "6", "-o", str(tmp_path)])
    assert status == 2
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "invalid_config"


@pytest.mark.parametrize("argv", [
    ["entanglement-series", "--preset", "set-i", "--tau", "pi/4", "-L", "5"],
    ["entanglement-series", "--preset", "set-i", "--tau", "-1", "-L", "4"],
    ["entanglement-series", "--preset", "set-i", "--tau", "abc", "-L", "4"],
    ["entanglement-series", "--tau", "0.5", "-L", "4"],
    ["entanglement-series", "--preset", "set-i", "-L", "4"],
])
def test_invalid_config_json_error(tmp_path, capsys, argv):
    assert main(argv + ["-o", str(tmp_path)]) == 2
    err = json.loads(capsys.readouterr().err.strip())
    assert err["error"] == "invalid_config" and err["message"]


def test_numerical_precondition_exit(tmp_path, capsys):
    status = main(["entangling-power", "--preset", "set-i", "--tau", "pi/4", "-L", "4",
                   "--n-max", "1", "--samples", "10", "-o", str(tmp_path)])
    assert status == 3
    assert json.loads(capsys.readouterr().err)["error"] == "numerical_precondition"


def test_byte_identical_reruns(tmp_path):
    args = ["entangling-power", "--preset", "set-ni", "--tau", "pi/4", "-L", "4",
            "--n-max", "5", "--samples", "150", "--seed", "3"]
    assert main(args + ["-o", str(tmp_path / "a")]) == 0
    assert main(args + ["-o", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "series.csv").read_bytes()
    assert a == (tmp_path / "b" / "series.csv").read_bytes()
    assert main(args[:-1] + ["4", "-o", str(tmp_path / "c")]) == 0
    assert a != (tmp_path / "c" / "series.csv").read_bytes()


def test_series_values_round_trip(tmp_path):
    out = tmp_path / "s"
    assert main(["entanglement-series", "--preset", "set-i", "--tau", "pi/4", "-L", "6",
                 "--n-max", "4", "-o", str(out)]) == 0
    _, header, rows = read_csv(out / "series.csv")
    assert header[:4] == ["n", "E_l", "E_vN", "E_l_US"]
    np.testing.assert_array_equal(rows[:, 0], np.arange(5))
    np.testing.assert_allclose(rows[1:, 1], 1 - 2.0 ** -np.arange(1, 5), atol=1e-10)


def test_config_file_ingestion(tmp_path):
    cfg = {"field_config": {"L": 4, "tau": "pi/4", "preset": "set-i"}, "n_max": 3, "seed": 5}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    out = tmp_path / "o"
    assert main(["entanglement-series", "--config", str(path), "-o", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["config"]["n_max"] == 3 and report["seed"] == 5
    assert report["config"]["field_config"]["tau"] == math.pi / 4
    # flags override the file
    assert main(["entanglement-series", "--config", str(path), "--n-max", "2", "-o", str(out)]) == 0
    assert json.loads((out / "report.json").read_text())["config"]["n_max"] == 2


def test_bad_config_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    assert main(["entanglement-series", "--config", str(path)]) == 2
    assert json.loads(capsys.readouterr().err)["error"] == "invalid_config"


def test_symmetry_check(tmp_path, capsys):
    out = tmp_path / "sym"
    assert main(["symmetry-check", "--preset", "set-ni", "--tau", "pi/4", "-L", "6", "-o", str(out)]) == 0
    res = json.loads((out / "report.json").read_text())["trs_residual"]
    assert res["full"] < 1e-10 and res["identity"] > 0.1


def test_spectral_outputs(tmp_path):
    out = tmp_path / "spec"
    assert main(["spectral", "--preset", "set-ni", "--tau", "pi/3", "-L", "8",
                 "--r-max", "10", "-o", str(out)]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["sector_dim"] == (256 + 16) // 2
    for name in ("spacings", "ratios", "sigma2"):
        first, _, rows = read_csv(out / "spectral" / f"{name}.csv")
        assert "config_hash=" in first and "seed=" in first
    _, header, sig = read_csv(out / "spectral" / "sigma2.csv")
    assert header == ["r", "sigma2"] and sig[-1, 0] == 10.0
    _, _, sp = read_csv(out / "spectral" / "spacings.csv")
    assert sp.mean() == pytest.approx(1.0, abs=1e-6)


def test_rmt_compare_small(tmp_path):
    out = tmp_path / "rmt"
    assert main(["rmt-compare", "--tau", "pi/4", "-L", "4", "--preset", "set-ni", "--n-max", "4",
                 "--realizations", "5", "--mode", "shared", "-o", str(out)]) == 0
    _, header, _ = read_csv(out / "series.csv")
    assert "pred_ep_l" in header
    assert json.loads((out / "report.json").read_text())["config"]["mode"] == "shared"


def test_thread_env(tmp_path, monkeypatch):
    monkeypatch.setenv("ENTPOW_THREADS", "1")
    assert main(["entanglement-series", "--preset", "set-x", "--tau", "0.6", "-L", "4",
                 "--n-max", "2", "-o", str(tmp_path)]) == 0

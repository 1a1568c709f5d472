import json
from pathlib import Path

import numpy as np
import pytest

from cqed_circuits import InvalidParameterError, TimeSeries, integrate, PROBE_SEED
from cqed_circuits.cli import run
from cqed_circuits.config import config_from_mapping, default_config, load_config
from cqed_circuits.core import TWO_PI
from cqed_circuits.spectra import periodogram
from cqed_circuits.spectrum import Spectrum

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "transmon.toml"

SHORT = """\
[physical]
f_r_ghz = 6.44
delta_mhz = 150
g_mhz = 266
gamma_mhz = 1.6
t2_us = 1
z0_ohm = 50

[simulation]
dt_ps = 1
t_final_us = 0.05
window = "hann"
pad_factor = 4

[output]
dir = "{out}"
"""


@pytest.fixture
def short_config(tmp_path):
    path = tmp_path / "short.toml"
    path.write_text(SHORT.format(out=tmp_path.as_posix()))
    return path


def test_shipped_config_matches_device():
    p = load_config(CONFIG).physical_params()
    assert p.omega_r == pytest.approx(TWO_PI * 6.44e9)
    assert p.g == pytest.approx(TWO_PI * 266e6)
    assert p.t2 == pytest.approx(1e-6) and p.t1 is None
    assert p.delta == pytest.approx(0.0, abs=1e-3)


def test_default_config_valid():
    assert default_config().physical_params().t2 == 1e-6


def test_params_command(capsys):
    assert run(["params", "--config", str(CONFIG)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["c_r"] == pytest.approx(4.943e-13, rel=1e-3)
    assert payload["electric"]["coupling"] > 0 and payload["magnetic"]["coupling"] > 0


def test_oracle_command(capsys):
    assert run(["oracle", "--config", str(CONFIG), "--delta", "0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    np.testing.assert_allclose(payload["peaks_hz"], [6.3056e9, 6.5716e9], rtol=2e-5)
    assert payload["splitting_hz"] == pytest.approx(2.66e8, rel=1e-3)
    assert "pull_hz" not in payload


def test_oracle_pull(capsys):
    assert run(["oracle", "--delta", "1000"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pull_hz"] == pytest.approx(37.9486e6, rel=1e-5)


def test_oracle_to_file(tmp_path):
    out = tmp_path / "o.json"
    assert run(["oracle", "--delta", "50", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["delta_hz"] == pytest.approx(50e6)


def test_rbe_spectrum_round_trip_bit_exact(short_config, tmp_path):
    ts_path, spec_path = tmp_path / "ts.csv", tmp_path / "spec.csv"
    assert run(["rbe", "--config", str(short_config), "--out", str(ts_path)]) == 0
    assert run(["spectrum", str(ts_path), "--config", str(short_config), "--out", str(spec_path)]) == 0
    cfg = load_config(short_config)
    series = integrate(PROBE_SEED, cfg.physical_params(), cfg.dt, cfg.t_final)
    expected = periodogram(series, "v", "hann", 4)
    np.testing.assert_array_equal(TimeSeries.from_csv(ts_path).samples, series.samples)
    got = Spectrum.from_csv(spec_path)
    np.testing.assert_array_equal(got.frequencies, expected.frequencies)
    np.testing.assert_array_equal(got.magnitude, expected.magnitude)
    np.testing.assert_array_equal(got.phase, expected.phase)


def test_rbe_default_output_dir(short_config, tmp_path):
    assert run(["rbe", "--config", str(short_config), "--lambda3", "+1"]) == 0
    series = TimeSeries.from_csv(tmp_path / "rbe.csv")
    assert series.state(0).lambda3 == 0.999
    assert not list(tmp_path.glob("*.tmp"))


def test_ac_command(tmp_path):
    net = tmp_path / "rc.cir"
    net.write_text("V1 in 0 AC 1\nR1 in out 1k\nC1 out 0 1n\n.port out out 0\n")
    out = tmp_path / "ac.csv"
    assert run(["ac", "--netlist", str(net), "--fmin", "0.0001", "--fmax", "0.001", "--points", "5",
                "--out", str(out)]) == 0
    spec = Spectrum.from_csv(out)
    f = np.linspace(1e5, 1e6, 5)
    np.testing.assert_allclose(spec.magnitude, 1 / np.abs(1 + 2j * np.pi * f * 1e3 * 1e-9), rtol=1e-14)


def test_ac_default_grid(tmp_path):
    net = tmp_path / "lc.cir"
    net.write_text("V1 in 0 AC 1 50\nC1 in a 1f\nLr a 0 1.2357n\nCr a 0 494.27f\n.port p a 0\n")
    out = tmp_path / "ac.csv"
    assert run(["ac", "--netlist", str(net), "--out", str(out)]) == 0
    spec = Spectrum.from_csv(out)
    assert len(spec) == 2001
    assert spec.frequencies[1000] == pytest.approx(6.44e9)


def test_lambshift_command(tmp_path):
    out = tmp_path / "ls.csv"
    assert run(["lambshift", "--route", "oracle", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "delta_hz,peak_low_hz,peak_high_hz,lamb_shift_hz,route"
    assert len(lines) == 12
    shifts = [float(line.split(",")[3]) for line in lines[1:]]
    assert all(a > b for a, b in zip(shifts, shifts[1:]))


def test_anticrossing_circuit_route(tmp_path):
    out = tmp_path / "ax.csv"
    assert run(["anticrossing", "--route", "circuit", "--delta-min", "-100", "--delta-max", "100",
                "--delta-steps", "3", "--out", str(out)]) == 0
    assert out.read_text().splitlines()[1].endswith(",circuit-ac")


def test_missing_netlist_exit_1(capsys):
    assert run(["ac", "--netlist", "missing.cir"]) == 1
    err = capsys.readouterr().err
    assert "missing.cir" in err and len(err.strip().splitlines()) == 1


def test_bad_netlist_reports_line(tmp_path, capsys):
    net = tmp_path / "bad.cir"
    net.write_text("V1 in 0 AC 1\nR1 in 0 -5\n")
    assert run(["ac", "--netlist", str(net)]) == 1
    assert "line 2" in capsys.readouterr().err


def test_numerical_failure_exit_2(tmp_path, capsys):
    cfg = tmp_path / "c.toml"
    cfg.write_text(SHORT.format(out=tmp_path.as_posix()).replace("[simulation]", "[simulation]\nmode = \"linearized\"")
                   .replace("delta_mhz = 150", "delta_mhz = 0").replace("t_final_us = 0.05", "t_final_us = 2"))
    assert run(["rbe", "--config", str(cfg), "--lambda3", "1"]) == 2
    assert "diverged" in capsys.readouterr().err


def test_singular_netlist_exit_2(tmp_path, capsys):
    net = tmp_path / "s.cir"
    net.write_text("V1 a 0 AC 1\nV2 a 0 AC 2\nR1 a 0 1k\n.port p a 0\n")
    assert run(["ac", "--netlist", str(net), "--fmin", "1", "--fmax", "2", "--points", "3"]) == 2


@pytest.mark.parametrize("argv", [
    [], ["bogus"], ["oracle", "--nope"], ["oracle", "--delta", "abc"], ["oracle", "--lambda3", "0.5"],
    ["anticrossing", "--route", "spice"], ["ac"], ["lambshift", "--delta-steps", "0"],
    ["lambshift", "--delta-min", "600", "--delta-max", "100"],
    ["ac", "--netlist", "x.cir", "--points", "many"],
])
def test_usage_errors_exit_1(argv, capsys):
    assert run(argv) == 1
    assert "error" in capsys.readouterr().err


def test_missing_output_dir(capsys):
    assert run(["lambshift", "--out", "/nonexistent/dir/x.csv"]) == 1
    assert "/nonexistent/dir" in capsys.readouterr().err


BASE = {"physical": {"f_r_ghz": 6.44, "delta_mhz": 0.0, "g_mhz": 266.0, "gamma_mhz": 1.6}}


def _with(section, key, value):
    data = {k: dict(v) for k, v in BASE.items()}
    data.setdefault(section, {})[key] = value
    return data


@pytest.mark.parametrize(
    "data, field",
    [
        (_with("physical", "f_r_ghz", 0.0), "physical.f_r_ghz"),
        (_with("physical", "f_r_ghz", "6.44"), "physical.f_r_ghz"),
        (_with("physical", "g_mhz", -1.0), "physical.g_mhz"),
        (_with("physical", "gamma_mhz", -0.1), "physical.gamma_mhz"),
        (_with("physical", "t1_us", 0.0), "physical.t1_us"),
        (_with("physical", "t2_us", -1.0), "physical.t2_us"),
        (_with("physical", "z0_ohm", 0.0), "physical.z0_ohm"),
        (_with("physical", "lambda3_0", 2.0), "physical.lambda3_0"),
        (_with("physical", "lambda3_0", True), "physical.lambda3_0"),
        (_with("physical", "f_q_ghz", 6.5), "physical.f_q_ghz/delta_mhz"),
        (_with("physical", "delta_mhz", -7000.0), "physical.delta_mhz"),
        (_with("physical", "f_r", 6.44), "physical.f_r"),
        (_with("simulation", "dt_ps", 0.0), "simulation.dt_ps"),
        (_with("simulation", "t_final_us", -1.0), "simulation.t_final_us"),
        (_with("simulation", "pad_factor", 2.5), "simulation.pad_factor"),
        (_with("simulation", "points", 1), "simulation.points"),
        (_with("simulation", "decimation", 0), "simulation.decimation"),
        (_with("simulation", "window", "kaiser"), "simulation.window"),
        (_with("simulation", "method", "euler"), "simulation.method"),
        (_with("simulation", "mode", "quantum"), "simulation.mode"),
        (_with("simulation", "fmin_ghz", 7.0) | {"simulation": {"fmin_ghz": 7.0, "fmax_ghz": 6.0}},
         "simulation.fmin_ghz"),
        (_with("output", "dir", ""), "output.dir"),
        (_with("output", "format", "hdf5"), "output.format"),
        ({**BASE, "plot": {}}, "plot"),
        ({"physical": {"f_r_ghz": 6.44, "g_mhz": 266.0}}, "physical.f_q_ghz/delta_mhz"),
        ({**BASE, "simulation": 3}, "simulation"),
    ],
)
def test_config_rejection_names_field(data, field):
    with pytest.raises(InvalidParameterError) as info:
        config_from_mapping(data)
    assert f"config field {field}:" in str(info.value)


def test_config_rejection_via_cli(tmp_path, capsys):
    cfg = tmp_path / "bad.toml"
    cfg.write_text("[physical]\nf_r_ghz = 6.44\ng_mhz = 266\n")
    assert run(["oracle", "--config", str(cfg)]) == 1
    assert "f_q_ghz/delta_mhz" in capsys.readouterr().err
    cfg.write_text("[physical\n")
    assert run(["oracle", "--config", str(cfg)]) == 1
    assert "invalid TOML" in capsys.readouterr().err
    assert run(["oracle", "--config", str(tmp_path / "none.toml")]) == 1
    assert "none.toml" in capsys.readouterr().err


def test_config_f_q_route():
    cfg = config_from_mapping({"physical": {"f_r_ghz": 6.44, "f_q_ghz": 7, "g_mhz": 266, "gamma_mhz": 0}})
    assert cfg.physical_params().omega_q == pytest.approx(TWO_PI * 7e9)
    assert cfg.with_delta(10.0).f_q_hz == pytest.approx(6.45e9)

import logging
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from magtunnel.cli import main
from magtunnel.errors import ConfigError
from magtunnel.io import (
    PlotTable,
    RunRecord,
    config_from_mapping,
    config_snapshot,
    load_config,
    read_summary,
    write_config,
)
from magtunnel.potential import EXAMPLE_POTENTIAL, BarrierPotential, SystemConfig

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
EXAMPLE_INI = CONFIGS / "worked_example.ini"
DEMO_INI = CONFIGS / "resonant_demo.ini"

BASE = """
[potential]
family = double_harmonic
u0_eV = 1.0
a_angstrom = 50
lambda = 0.215

[system]
mass_me = 1.0
E_eV = -0.01
R_angstrom = 1000
H_tesla = 10
"""


def write(tmp_path, text, name="c.ini"):
    path = tmp_path / name
    path.write_text(text)
    return path


def summaries(out, command):
    return sorted(out.glob(f"summary.{command}-*.txt"))


def test_load_example_file():
    p, cfg = load_config(EXAMPLE_INI)
    assert p == EXAMPLE_POTENTIAL
    assert (cfg.energy_depth, cfg.mass, cfg.barrier_length_R, cfg.field_H) == (0.01, 1.0, 1000.0, 10.0)


@pytest.mark.parametrize(
    "edit, needle",
    [
        (("u0_eV = 1.0\n", ""), "u0_eV"),
        (("lambda = 0.215", "lambda = 1.5"), "lambda"),
        (("E_eV = -0.01", "E_eV = 0.01"), "negative"),
        (("a_angstrom = 50", "a_angstrom = fifty"), "a_angstrom"),
        (("H_tesla = 10", "H_tesla = 10\nspin = up"), "spin"),
        (("family = double_harmonic", "family = cubic"), "cubic"),
        (("[system]", "system"), "parse"),
    ],
)
def test_config_errors(tmp_path, edit, needle):
    path = write(tmp_path, BASE.replace(*edit))
    with pytest.raises(ConfigError, match=needle):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.ini")


def test_mass_defaults_with_note(tmp_path, caplog):
    path = write(tmp_path, BASE.replace("mass_me = 1.0\n", ""))
    with caplog.at_level(logging.WARNING):
        _, cfg = load_config(path)
    assert cfg.mass == 1.0
    assert "mass_me" in caplog.text


@given(
    st.floats(0.01, 10), st.floats(1, 500), st.floats(0.01, 0.99),
    st.floats(1e-4, 1), st.floats(1, 1e4), st.floats(0, 50), st.floats(0.01, 5),
)
def test_snapshot_round_trip(u0, a, lam, depth, R, H, mass):
    p = BarrierPotential.double_harmonic(u0, a, lam)
    cfg = SystemConfig(energy_depth=depth, barrier_length_R=R, field_H=H, mass=mass)
    assert config_from_mapping(config_snapshot(p, cfg)) == (p, cfg)


def test_file_round_trip(tmp_path):
    p, cfg = load_config(DEMO_INI)
    write_config(tmp_path / "again.ini", p, cfg)
    assert load_config(tmp_path / "again.ini") == (p, cfg)


def test_plot_table_shape_and_format():
    with pytest.raises(ValueError):
        PlotTable("fig2", ["eta [A]"], np.ones((3, 2)))
    t = PlotTable("fig2", ["eta [A]", "v [eV]"], [[0.1, 1 / 3]])
    assert t.to_csv() == "eta [A],v [eV]\n0.10000000000000001,0.33333333333333331\n"


def test_run_record_append_only(tmp_path):
    rec = RunRecord.start("well", *load_config(EXAMPLE_INI))
    rec.add("x", 1)
    with pytest.raises(KeyError):
        rec.add("x", 2)
    first, second = rec.write(tmp_path), rec.write(tmp_path)
    assert first.name == "summary.well-001.txt" and second.name == "summary.well-002.txt"
    doc = read_summary(first)
    assert config_from_mapping(doc["config"]) == load_config(EXAMPLE_INI)
    assert set(doc["provenance"]) >= {"tool", "version", "timestamp", "tolerances"}


def test_well_command(tmp_path):
    assert main(["--config", str(EXAMPLE_INI), "--command", "well", "--out", str(tmp_path)]) == 0
    doc = read_summary(summaries(tmp_path, "well")[0])
    assert doc["results"]["well"]["valid"] is True
    header = (tmp_path / "fig2.csv").read_text().splitlines()[0]
    assert header == "eta [A],v [eV]"


def test_tables_are_byte_identical(tmp_path):
    for run in ("a", "b"):
        argv = ["--config", str(EXAMPLE_INI), "--command", "trajectory", "--N", "2", "--out", str(tmp_path / run)]
        assert main(argv) == 0
    for name in ("fig3a.csv", "fig3b.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_resonance_command_on_demo(tmp_path):
    assert main(["--config", str(DEMO_INI), "--command", "resonance", "--out", str(tmp_path)]) == 0
    doc = read_summary(summaries(tmp_path, "resonance")[0])
    H_R = doc["results"]["resonance"]["H_R_tesla"]
    assert H_R == pytest.approx(8.4676164, abs=1e-6)
    rows = np.loadtxt(tmp_path / "fig5.csv", delimiter=",", skiprows=1)
    assert np.all(rows[:, 0] <= H_R)


def test_psi_command_on_demo(tmp_path):
    assert main(["--config", str(DEMO_INI), "--command", "psi", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig4b.csv").exists() and (tmp_path / "fig6.csv").exists()


@pytest.mark.parametrize(
    "argv, code",
    [
        (["--command", "resonance"], 4),
        (["--command", "psi"], 6),
        (["--command", "sweep", "--grid", "5:1:4"], 2),
        (["--command", "sweep", "--grid", "1:2:0"], 2),
        (["--command", "sweep"], 2),
        (["--command", "well", "--H", "-1"], 2),
    ],
)
def test_exit_codes(tmp_path, argv, code):
    assert main(["--config", str(EXAMPLE_INI), "--out", str(tmp_path)] + argv) == code


def test_no_well_exit_code(tmp_path):
    path = write(tmp_path, BASE.replace("double_harmonic", "quadratic").replace("lambda = 0.215\n", ""))
    assert main(["--config", str(path), "--command", "well", "--out", str(tmp_path)]) == 3
    doc = read_summary(summaries(tmp_path, "well")[0])
    assert doc["results"]["error"]["exit_code"] == 3


def test_config_error_exit_code(tmp_path):
    path = write(tmp_path, BASE.replace("lambda = 0.215", "lambda = 1.5"))
    assert main(["--config", str(path), "--command", "well", "--out", str(tmp_path)]) == 2


def test_sweep_parallel_matches_serial(tmp_path):
    for jobs in ("1", "2"):
        argv = ["--config", str(DEMO_INI), "--command", "sweep", "--grid", "1:20:5", "--jobs", jobs,
                "--out", str(tmp_path / jobs)]
        assert main(argv) == 0
    assert (tmp_path / "1" / "sweep.csv").read_bytes() == (tmp_path / "2" / "sweep.csv").read_bytes()


@pytest.mark.parametrize("command", ["cycle", "action", "harmonics", "trajectory", "dissipation"])
def test_other_commands_succeed(tmp_path, command):
    assert main(["--config", str(DEMO_INI), "--command", command, "--out", str(tmp_path)]) == 0
    assert len(summaries(tmp_path, command)) == 1

"""Command line behavior: flags, exit codes, files on disk."""

import csv
import os
import subprocess
import sys

import pytest

from twrnoma.cli import main
from twrnoma.configio import DEFAULT_CONFIG_TEXT, parse_config
from twrnoma.model import SystemConfig


def run_in(tmp_path, argv):
    old = os.getcwd()
    os.chdir(tmp_path)
    try:
        return main(argv)
    finally:
        os.chdir(old)


def test_print_default_config(capsys):
    assert main(["--print-default-config"]) == 0
    out = capsys.readouterr().out
    assert out == DEFAULT_CONFIG_TEXT
    assert parse_config(out) == SystemConfig()


def test_no_command_prints_help(capsys):
    assert main([]) == 1
    assert "sweep" in capsys.readouterr().out


def test_bad_flag_exits_one(capsys):
    assert main(["sweep", "--metric", "nope"]) == 1
    assert "error" in capsys.readouterr().err


def test_sweep_requires_metric_or_preset(capsys):
    assert main(["sweep"]) == 1
    assert "--preset or --metric" in capsys.readouterr().err


def test_snr_flag_parsing(tmp_path, capsys):
    code = run_in(tmp_path, ["sweep", "--metric", "outage", "--signals", "x1",
                             "--mode", "ipsic", "--snr", "0:10:5",
                             "--iterations", "2000", "--seed", "5",
                             "--out", "grid.csv"])
    assert code == 0
    with open(tmp_path / "grid.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["snr_db"] for r in rows] == ["0.0", "5.0", "10.0"]
    assert main(["sweep", "--metric", "outage", "--snr", "0-10-5"]) == 1
    assert "start:stop:step" in capsys.readouterr().err
    assert main(["sweep", "--metric", "outage", "--snr", "a:b:c"]) == 1
    assert main(["sweep", "--metric", "outage", "--signals", "x7",
                 "--snr", "0:10:5"]) == 1


def test_config_flag_and_errors(tmp_path, capsys):
    good = tmp_path / "ok.cfg"
    good.write_text("schema_version = 1\nnoma.varpi1 = 0.0\nnoma.varpi2 = 0.0\n")
    code = run_in(tmp_path, ["sweep", "--metric", "outage", "--signals", "x1",
                             "--mode", "psic", "--snr", "10:10:5",
                             "--iterations", "2000", "--config", str(good),
                             "--out", "cfg.csv"])
    assert code == 0
    bad = tmp_path / "bad.cfg"
    bad.write_text("schema_version = 1\nnoma.b2 = 0.7\n")
    assert main(["sweep", "--metric", "outage", "--config", str(bad)]) == 1
    assert "b1 + b2" in capsys.readouterr().err
    assert main(["sweep", "--metric", "outage",
                 "--config", str(tmp_path / "ghost.cfg")]) == 1


def test_preset_expands_variant_files(tmp_path):
    code = run_in(tmp_path, ["sweep", "--preset", "fig3", "--snr", "10:10:5",
                             "--iterations", "2000", "--seed", "2"])
    assert code == 0
    names = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert names == ["fig3_varpi_0.01.csv", "fig3_varpi_0.1.csv",
                     "fig3_varpi_0.csv"]


def test_preset_with_plot_scripts(tmp_path):
    code = run_in(tmp_path, ["sweep", "--preset", "fig2", "--snr", "10:15:5",
                             "--iterations", "2000", "--seed", "2",
                             "--emit-plot"])
    assert code == 0
    assert (tmp_path / "fig2.csv").exists()
    assert (tmp_path / "fig2_plot.py").exists()
    with open(tmp_path / "fig2.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    modes = {r["mode"] for r in rows}
    assert modes == {"ipsic", "psic", "oma"}
    # the reference preset carries the flat asymptote column
    noma = [r for r in rows if r["mode"] != "oma"]
    assert all(r["asymptotic"] for r in noma)


def test_explicit_flags_override_preset(tmp_path):
    code = run_in(tmp_path, ["sweep", "--preset", "fig6", "--snr", "20:20:5",
                             "--mode", "psic", "--signals", "x1",
                             "--iterations", "2000", "--seed", "4"])
    assert code == 0
    with open(tmp_path / "fig6.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 1
    assert rows[0]["mode"] == "psic"
    assert rows[0]["signal"] == "x1"
    assert rows[0]["metric"] == "ergodic_rate"


def test_unwritable_out_path_exits_one(capsys):
    assert main(["sweep", "--metric", "outage", "--signals", "x1",
                 "--mode", "ipsic", "--snr", "0:0:5", "--iterations", "2000",
                 "--out", "/no_such_dir/x.csv"]) == 1
    assert "/no_such_dir/x.csv" in capsys.readouterr().err


def test_validate_exit_codes(capsys):
    assert main(["validate", "--iterations", "20000"]) == 0
    out = capsys.readouterr().out
    assert "all checks passed" in out
    assert out.count("PASS") >= 10
    # strict profile halves every band; the checks that sit near their
    # band edge are expected to trip without crashing the battery
    assert main(["validate", "--iterations", "20000",
                 "--profile", "strict"]) == 2
    out = capsys.readouterr().out
    assert "FAIL" in out and "check(s) failed" in out


def test_validate_rejects_bad_config(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("schema_version = 1\nnoma.b4 = 0.1\n")
    assert main(["validate", "--config", str(bad)]) == 1
    assert "b3 + b4" in capsys.readouterr().err


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "twrnoma.cli",
                           "--print-default-config"],
                          capture_output=True, text=True, timeout=60)
    assert proc.returncode == 0
    assert "schema_version = 1" in proc.stdout

import csv
import io
import json
import os
import subprocess
import sys

import pytest

from modloc import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_gleason_csv(capsys):
    code, out, err = run(["gleason", "--dim", "8", "--samples", "20", "--seed", "7"], capsys)
    assert code == 0 and err == ""
    header = out.splitlines()[0].split(",")
    assert header[:5] == ["schema", "parameter", "value", "bound", "pass"]
    r = rows(out)
    assert all(x["schema"] == "modloc-1" and x["pass"] == "true" for x in r)


def test_lattice_selftest_has_suite_column(capsys):
    code, out, _ = run(["lattice-selftest", "--samples", "10", "--n-max", "4"], capsys)
    assert code == 0
    suites = {x["suite"] for x in rows(out)}
    assert suites == {"lattice", "defect", "causal"}


def test_region_output(capsys):
    assert run(["region", "W & W'"], capsys) == (0, "point(0,0)\n", "")
    assert run(["region", "full'"], capsys)[1] == "empty\n"
    code, out, _ = run(["region", "--json", "c([0,1])"], capsys)
    assert code == 0 and json.loads(out) == [{"u": [-1.0, 0.0], "v": [0.0, 1.0]}]


def test_region_syntax_error_exit_code(capsys):
    code, out, err = run(["region", "c([0,1]) &"], capsys)
    assert code == 2 and out == ""
    assert "line 1, column 10" in err


def test_usage_errors(capsys):
    assert run(["bogus"], capsys)[0] == 2
    assert run([], capsys)[0] == 2
    assert run(["gleason", "--dim", "7"], capsys)[0] == 2
    assert run(["gleason", "--samples", "many"], capsys)[0] == 2


def test_help_exits_zero(capsys):
    code, out, _ = run(["--help"], capsys)
    assert code == 0 and "cluster-scan" in out


def test_failure_record(capsys):
    # the Newton-Wigner target is not met on the lattice: exit 1 and a JSON record
    code, out, err = run(["nw-compare", "--N", "256", "--n-iter", "20"], capsys)
    assert code == 1
    rec = json.loads(err)
    assert rec["schema"] == "modloc-1" and rec["status"] == "fail" and rec["command"] == "nw-compare"
    assert rec["failures"] and all(f["bound"] == 0.05 for f in rec["failures"])
    assert rows(out)


def test_output_file(tmp_path, capsys):
    path = tmp_path / "out.csv"
    code, out, _ = run(["bgl-wedge", "--output", str(path)], capsys)
    assert code == 0 and out == ""
    r = rows(path.read_text())
    assert [x["parameter"] for x in r][:3] == ["duality", "boost_invariance", "lightlike_inclusion"]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    # keys of other subcommands are ignored, flags still win
    cfg.write_text("# model\nN = 256\nm = 1.0\nkappa_max = 4\nsteps = 3\n")
    code, out, _ = run(["cluster-scan", "--config", str(cfg), "--dmin", "2", "--dmax", "3"], capsys)
    assert code == 0
    assert [x["parameter"] for x in rows(out)][:3] == ["d=2", "d=2.5", "d=3"]
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus_key = 1\n")
    code, _, err = run(["cluster-scan", "--config", str(bad)], capsys)
    assert code == 2 and "unknown config keys: bogus_key" in err
    bad.write_text("just words\n")
    assert run(["gleason", "--config", str(bad)], capsys)[0] == 2
    assert run(["gleason", "--config", str(tmp_path / "missing")], capsys)[0] == 2


def test_load_config_parsing(tmp_path):
    p = tmp_path / "c.cfg"
    p.write_text("kappa-max = 3  # trailing\n\n  seed=5\n")
    assert cli.load_config(str(p)) == {"kappa_max": "3", "seed": "5"}


def test_thread_count_does_not_change_output():
    args = [sys.executable, "-m", "modloc.cli", "cluster-scan", "--N", "256", "--dmax", "3", "--steps", "5"]
    outs = []
    for n in ("1", "4"):
        env = dict(os.environ, MODLOC_THREADS=n)
        r = subprocess.run(args, capture_output=True, env=env, check=False)
        outs.append((r.returncode, r.stdout, r.stderr))
    assert outs[0] == outs[1]
    assert outs[0][0] == 0


@pytest.mark.parametrize("value,expected", [("3", 3), ("0", 1), ("x", 1)])
def test_threads_env(monkeypatch, value, expected):
    monkeypatch.setenv("MODLOC_THREADS", value)
    assert cli._threads() == expected


def test_float_formatting():
    assert cli._fmt(True) == "true"
    assert cli._fmt(0.1) == "0.1"
    assert float(cli._fmt(1 / 3)) == 1 / 3
    assert cli._fmt(3) == "3"

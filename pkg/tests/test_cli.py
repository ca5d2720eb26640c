import csv
import io
import json
import subprocess
import sys

import pytest

from genmaxwell.cli import BANNER, main


def invoke(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO("".join(l for l in text.splitlines(True) if not l.startswith("#")))))


def test_identities_json(capsys):
    code, out, err = invoke(capsys, "identities", "--samples", "200", "--seed", "7", "--json")
    assert code == 0 and BANNER in err
    reports = json.loads(out)
    assert len(reports) == 12
    assert all(r["passed"] and r["seed"] == 7 for r in reports)


def test_identities_csv_echoes_seed(capsys):
    code, out, _ = invoke(capsys, "identities", "--samples", "5", "--seed", "3", "--csv")
    assert code == 0 and out.startswith("# seed=3\n")
    assert {r["passed"] for r in rows(out)} == {"true"}


def test_identities_fail_with_impossible_tolerance(capsys):
    code, _, _ = invoke(capsys, "identities", "--samples", "5", "--tol", "1e-30")
    assert code == 1


def test_dispersion_weyl_r(capsys):
    code, out, _ = invoke(capsys, "dispersion", "--family", "weyl-r", "--m1", "1.0", "--k", "0,0,1")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["kx", "ky", "kz", "branch_index", "re_E", "im_E", "residual"]
    assert [round(float(r["re_E"]), 9) for r in table] == [-1, -1, 1, 1]


def test_dispersion_require_massless(capsys):
    assert invoke(capsys, "dispersion", "--family", "weyl-l", "--m3", "2",
                  "--random", "5", "--require-massless")[0] == 0
    assert invoke(capsys, "dispersion", "--family", "dirac-two-mass", "--m1", "1", "--m2", "2",
                  "--random", "5", "--require-massless")[0] == 1


def test_dispersion_chiral_mass_and_json(capsys):
    B = ",".join(["0"] * 16)
    code, out, _ = invoke(capsys, "dispersion", "--family", "chiral-mass", "--B", B,
                          "--k", "0,0,2", "--json")
    assert code == 0
    data = json.loads(out)
    assert [b[0] for b in data[0]["branches"]] == pytest.approx([-2, -2, 2, 2])


def test_polarization_time_like(capsys):
    code, out, _ = invoke(capsys, "polarization", "--sigma", "0t", "--p", "0,0,1", "--m", "1", "--N", "1")
    assert code == 0
    (row,) = rows(out)
    assert row["sigma"] == "0t"
    assert float(row["lorentz_residual"]) == pytest.approx(1.0, abs=1e-12)


def test_limits_and_proca(capsys):
    code, out, _ = invoke(capsys, "limits", "--sigma", "+1", "--expect", "-1", "--json")
    assert code == 0 and all(e["exponent"] == pytest.approx(-1, abs=0.05) for e in json.loads(out))
    assert invoke(capsys, "limits", "--sigma", "+1", "--p", "1,0,0", "--expect", "-1")[0] == 1
    code, out, _ = invoke(capsys, "proca", "--sigma", "0", "--m", "0.5")
    assert code == 0 and len(rows(out)) == 2
    code, out, _ = invoke(capsys, "proca", "--E-offset", "0.5", "--json")
    assert all(r["weinberg_residual"] > 1e-3 for r in json.loads(out))


@pytest.mark.parametrize("argv", [
    ["polarization", "--m", "-1"],
    ["polarization", "--m", "0"],
    ["dispersion", "--family", "dirac-two-mass", "--m1", "0", "--k", "0,0,1"],
    ["dispersion", "--family", "weyl-r", "--m1", "nan", "--k", "0,0,1"],
    ["dispersion", "--family", "weyl-r"],
    ["dispersion", "--family", "chiral-mass", "--k", "0,0,1"],
    ["identities", "--samples", "0"],
    ["limits", "--masses", "1,0.1"],
    ["simulate", "--n", "4", "--steps", "1"],
    ["simulate", "--cfl", "0.9", "--steps", "1"],
    ["simulate", "--k-index", "0,0,40", "--steps", "1"],
    ["simulate", "--helicity", "2", "--steps", "1"],
    ["simulate", "--config", "/nonexistent/run.cfg"],
])
def test_invalid_input_exits_1(capsys, argv):
    code, out, err = invoke(capsys, *argv)
    assert code == 1 and out == "" and "error" in err


@pytest.mark.parametrize("argv", [
    ["bogus"],
    [],
    ["identities", "--frobnicate"],
    ["dispersion", "--family", "unknown", "--k", "0,0,1"],
    ["dispersion", "--family", "spin-s", "--k", "0,0,1"],
    ["dispersion", "--family", "weyl-r", "--k", "0,0"],
    ["identities", "--json", "--csv"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert invoke(capsys, *argv)[0] == 2


def test_simulate_with_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    diag = tmp_path / "diag.csv"
    snap = tmp_path / "snap.csv"
    cfg.write_text(f"# small run\nn = 16\ncfl = 0.25\nsteps = 8\ncadence = 4\nmode = longitudinal\n"
                   f"diagnostics_out = {diag}\nsnapshot_out = {snap}\n")
    code, out, _ = invoke(capsys, "simulate", "--config", str(cfg))
    assert code == 0 and out == ""
    table = rows(diag.read_text())
    assert len(table) == 3
    assert float(table[-1]["max_abs_chi"]) == pytest.approx(1, abs=1e-3)
    assert snap.read_text().count("# genmaxwell-snapshot v1") == 3
    # flags override the file
    other = tmp_path / "other.csv"
    code, _, _ = invoke(capsys, "simulate", "--config", str(cfg), "--steps", "4", "--out", str(other))
    assert code == 0 and len(rows(other.read_text())) == 2


def test_simulate_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    assert invoke(capsys, "simulate", "--config", str(cfg))[0] == 1


@pytest.mark.parametrize("argv", [
    ["identities", "--samples", "20", "--seed", "11", "--csv"],
    ["dispersion", "--family", "weyl-r", "--m1", "0.5", "--random", "40", "--seed", "5"],
    ["simulate", "--mode", "gaussian", "--seed", "9", "--n", "16", "--steps", "6", "--cadence", "2"],
])
def test_same_seed_same_bytes(tmp_path, capsys, argv):
    a, b = tmp_path / "a.out", tmp_path / "b.out"
    assert invoke(capsys, *argv, "--out", str(a))[0] == 0
    assert invoke(capsys, *argv, "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes() and a.stat().st_size > 0


def test_worker_count_does_not_change_output(tmp_path, capsys):
    base = ["dispersion", "--family", "dirac-two-mass", "--m1", "3", "--m2", "2", "--random", "64", "--seed", "1"]
    outs = []
    for w in ("1", "4"):
        path = tmp_path / f"w{w}.csv"
        assert invoke(capsys, *base, "--workers", w, "--out", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "genmaxwell", "polarization", "--sigma", "+1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert proc.stdout.startswith("sigma,m,N,")
    assert BANNER in proc.stderr

import csv
import io
import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from nu_spectra.cli import main, parse_levels, parse_params, UsageError

GOLDEN = Path(__file__).parent / "golden"


def run(*args, env=None):
    return subprocess.run([sys.executable, "-m", "nu_spectra", *args], capture_output=True, text=True, env=env)


def read_csv(text):
    meta, body = {}, []
    for line in text.splitlines(keepends=True):
        if line.startswith("# "):
            key, _, value = line[2:].rstrip("\n").partition("=")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.reader(io.StringIO("".join(body))))
    return meta, rows[0], rows[1:]


# -- argument helpers ----------------------------------------------------------------


def test_parse_params():
    assert parse_params(["hw=1", "mw=2.5"]) == {"hw": 1.0, "mw": 2.5}
    assert parse_params(None) == {}
    with pytest.raises(UsageError):
        parse_params(["hw"])
    with pytest.raises(UsageError):
        parse_params(["hw=abc"])


def test_parse_levels():
    assert parse_levels("0..4") == (0, 4)
    assert parse_levels("3") == (3, 3)
    assert parse_levels(None) is None
    with pytest.raises(UsageError):
        parse_levels("a..b")


# -- spectrum ---------------------------------------------------------------------------


def test_spectrum_harmonic():
    res = run("spectrum", "--potential", "harmonic_1d", "--param", "hw=1", "--levels", "0..4", "--format", "json")
    assert res.returncode == 0, res.stderr
    data = json.loads(res.stdout)
    assert data["schema_version"] == 1
    assert list(data)[:4] == ["schema_version", "potential", "params", "results"]
    assert [r["energy"] for r in data["results"]] == [0.5, 1.5, 2.5, 3.5, 4.5]
    assert list(data["results"][0]) == ["quantum_numbers", "energy", "units", "level_count_rule_applied"]


def test_spectrum_hulthen_single_level():
    res = run("spectrum", "--potential", "hulthen", "--param", "beta2=2", "--param", "V0=1")
    assert res.returncode == 0, res.stderr
    results = json.loads(res.stdout)["results"]
    assert len(results) == 1
    assert results[0]["energy"] == pytest.approx(-0.125, rel=1e-14)


def test_spectrum_hulthen_no_bound_states():
    res = run("spectrum", "--potential", "hulthen", "--param", "beta2=0.5")
    assert res.returncode == 3
    assert "minimum size of potential hole" in res.stderr
    assert res.stdout == ""


@pytest.mark.parametrize("args", [
    ("spectrum", "--potential", "wood_saxon"),
    ("spectrum", "--potential", "harmonic_1d", "--param", "hw=-1"),
    ("spectrum", "--potential", "harmonic_1d", "--param", "hw"),
    ("spectrum", "--potential", "harmonic_1d", "--levels", "x"),
    ("spectrum", "--potential", "harmonic_1d", "--format", "xml"),
    ("wavefunction", "--figure", "1", "--potential", "harmonic_1d"),
    ("wavefunction",),
    ("wavefunction", "--potential", "harmonic_1d"),
])
def test_invalid_input_exit_2(args):
    res = run(*args)
    assert res.returncode == 2
    assert res.stderr


def test_level_not_bound_exit_3():
    res = run("wavefunction", "--potential", "morse", "--levels", "7", "--lower", "0", "--upper", "4")
    assert res.returncode == 3
    assert "no bound level" in res.stderr


def test_every_catalog_id_reachable():
    from nu_spectra.catalog import REGISTRY
    for pid, spec in REGISTRY.items():
        code = main(["spectrum", "--potential", pid, "--levels", "0..1", "--output", "/dev/null"])
        assert code == (0 if spec.has_spectrum else 3), pid


def test_spectrum_csv():
    res = run("spectrum", "--potential", "coulomb", "--levels", "1..3", "--format", "csv")
    assert res.returncode == 0
    meta, header, rows = read_csv(res.stdout)
    assert meta["potential"] == "coulomb"
    assert header[:3] == ["quantum_numbers.n", "quantum_numbers.l", "energy"]
    assert [float(r[2]) for r in rows] == pytest.approx([-0.5, -0.125, -1 / 18])


# -- wavefunction -------------------------------------------------------------------------


def test_wavefunction_normalized_by_trapezoid(tmp_path):
    out = tmp_path / "psi.csv"
    res = run("wavefunction", "--potential", "harmonic_1d", "--levels", "0..4", "--lower", "-8", "--upper", "8",
              "--points", "1601", "--format", "csv", "--output", str(out))
    assert res.returncode == 0, res.stderr
    meta, header, rows = read_csv(out.read_text())
    assert header == ["x", "psi0", "psi1", "psi2", "psi3", "psi4"]
    assert "psi0.normalization" in meta
    data = np.array(rows, dtype=float)
    for j in range(1, 6):
        assert np.trapezoid(data[:, j] ** 2, data[:, 0]) == pytest.approx(1.0, abs=1e-3)


def test_wavefunction_single_level_json():
    res = run("wavefunction", "--potential", "coulomb", "--levels", "2", "--lower", "0", "--upper", "40",
              "--points", "401")
    assert res.returncode == 0, res.stderr
    data = json.loads(res.stdout)
    assert data["grid"] == {"axis": "r", "lower": 0.0, "upper": 40.0, "points": 401}
    [col] = data["results"]
    assert col["column"] == "psi"
    assert len(col["values"]) == 401
    assert col["normalization"] > 0


def test_wavefunction_sphere_and_dirac():
    res = run("wavefunction", "--potential", "spherical_harmonics", "--param", "m=1", "--levels", "1",
              "--lower", "0", "--upper", "3.141592653589793", "--points", "11", "--phi", "0.5", "--format", "csv")
    assert res.returncode == 0, res.stderr
    _, header, _ = read_csv(res.stdout)
    assert header == ["theta", "psi", "psi_imag"]
    res = run("wavefunction", "--potential", "dirac_coulomb", "--levels", "0", "--lower", "1", "--upper", "500",
              "--points", "11", "--format", "csv")
    assert res.returncode == 0, res.stderr
    _, header, _ = read_csv(res.stdout)
    assert header == ["r", "psi", "G"]


def test_figure1_dataset():
    res = run("wavefunction", "--figure", "1", "--format", "json")
    assert res.returncode == 0
    data = json.loads(res.stdout)
    assert data["grid"] == {"axis": "x", "lower": -3.0, "upper": 3.0, "points": 601}
    assert [c["column"] for c in data["results"]] == [f"psi{n}" for n in range(5)]
    x = np.array(data["x"])
    psi0 = np.array(data["results"][0]["values"])
    assert np.allclose(psi0, np.pi ** -0.25 * np.exp(-x * x / 2), rtol=1e-14, atol=0)


def test_figure2_minimum():
    res = run("wavefunction", "--figure", "2", "--format", "json")
    assert res.returncode == 0
    meta = json.loads(res.stdout)["meta"]
    assert abs(meta["r_min"] - np.log(3.0)) <= 1e-15
    assert abs(meta["r_min_numeric"] - np.log(3.0)) <= 1e-9


# -- golden files -------------------------------------------------------------------------

GOLDEN_CASES = [
    ("figure1.csv", ("wavefunction", "--figure", "1", "--format", "csv")),
    ("figure2.csv", ("wavefunction", "--figure", "2", "--format", "csv")),
    ("figure2.json", ("wavefunction", "--figure", "2", "--format", "json")),
    ("spectrum_harmonic_1d.json", ("spectrum", "--potential", "harmonic_1d", "--param", "hw=1", "--levels", "0..4",
                                   "--format", "json")),
    ("spectrum_morse.csv", ("spectrum", "--potential", "morse", "--format", "csv")),
    ("molecules.json", ("molecules", "--format", "json")),
    ("tables_hulthen.json", ("tables", "--potential", "hulthen", "--format", "json")),
]


@pytest.mark.parametrize("name,args", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden_file(tmp_path, name, args):
    out = tmp_path / name
    res = run(*args, "--output", str(out))
    assert res.returncode == 0, res.stderr
    assert out.read_bytes() == (GOLDEN / name).read_bytes()


def test_output_is_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        assert run("wavefunction", "--figure", "1", "--format", "csv", "-o", str(path)).returncode == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r\n" not in a.read_bytes()


def test_stdout_matches_file(tmp_path):
    out = tmp_path / "s.json"
    args = ("spectrum", "--potential", "kratzer", "--levels", "0..2")
    assert run(*args, "-o", str(out)).returncode == 0
    assert run(*args).stdout == out.read_text()


# -- verify, tables, molecules, list --------------------------------------------------------


def test_verify_tables():
    res = run("verify", "--scope", "tables")
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["summary"] == {"total": 18, "passed": 18, "failed": 0}
    assert "18/18 checks passed" in res.stderr


def test_verify_expansions_csv():
    res = run("verify", "--scope", "expansions", "--format", "csv")
    assert res.returncode == 0, res.stderr
    meta, header, rows = read_csv(res.stdout)
    assert header == ["suite", "name", "passed", "measured", "tolerance"]
    assert all(r[2] == "true" for r in rows)


def test_verify_failure_exit_1():
    import os
    env = dict(os.environ, NU_SPECTRA_TOL="expansion=1e-30")
    res = run("verify", "--scope", "expansions", env=env)
    assert res.returncode == 1
    assert "failing checks:" in res.stderr
    assert json.loads(res.stdout)["summary"]["failed"] > 0


def test_verify_bad_tolerance_env():
    import os
    env = dict(os.environ, NU_SPECTRA_TOL="bogus=1")
    assert run("verify", "--scope", "tables", env=env).returncode == 2


def test_tables_all():
    res = run("tables")
    assert res.returncode == 0
    recs = json.loads(res.stdout)["results"]
    assert {r["potential"] for r in recs} == set(json.loads(run("list").stdout)["results"][i]["id"]
                                                    for i in range(17))
    assert all(r["passed"] and r["max_rel_deviation"] <= 1e-10 for r in recs)


def test_molecules():
    res = run("molecules", "--format", "csv")
    assert res.returncode == 0
    meta, header, rows = read_csv(res.stdout)
    recs = [dict(zip(header, r)) for r in rows]
    flags = {r["molecule"]: r["flag"] for r in recs}
    assert flags == {"H2": "DISCREPANT", "HCl": "CONSISTENT", "I2": "DISCREPANT"}
    hcl = next(r for r in recs if r["molecule"] == "HCl")
    assert float(hcl["b_recomputed"]) == pytest.approx(4.51744, abs=1e-3)
    assert float(hcl["V0_published_cm"]) == 524010.0
    assert float(hcl["V0_published_eV"]) == pytest.approx(524010.0 * 1.2398e-4)


def test_list():
    for args in (("list",), ("--list",)):
        res = run(*args)
        assert res.returncode == 0
        recs = json.loads(res.stdout)["results"]
        assert len(recs) == 18
        assert recs[-1]["id"] == "molecules"
        assert all("params" in r for r in recs)
    res = run("list", "--format", "csv")
    _, header, rows = read_csv(res.stdout)
    assert header[:2] == ["id", "kind"]


def test_module_and_script_agree():
    import shutil
    exe = shutil.which("nu-spectra")
    if exe is None:
        pytest.skip("console script not on PATH")
    a = subprocess.run([exe, "spectrum", "--potential", "morse"], capture_output=True, text=True)
    assert a.stdout == run("spectrum", "--potential", "morse").stdout

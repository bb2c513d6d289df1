import json
import subprocess
import sys

import pytest

from simplex_obstruction.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_timings(doc):
    doc = dict(doc)
    doc.pop("timings_ms")
    return doc


def test_build_n4(tmp_path, capsys):
    code, out, _ = run(capsys, "build", "--n", "4", "--out", str(tmp_path))
    assert code == 0
    rep = json.loads(out)
    assert rep["results"]["skeleton"]["columns_C"] == 552
    assert sorted(p.name for p in tmp_path.iterdir()) == [
        "D.json", "M.mtx", "delta.json", "indices.json", "report.json"]
    assert strip_timings(json.loads((tmp_path / "report.json").read_text())) == strip_timings(rep)


def test_build_n2_empty(tmp_path, capsys):
    code, out, _ = run(capsys, "build", "--n", "2", "--out", str(tmp_path))
    assert code == 0
    assert json.loads(out)["results"]["obstruction"]["nnz"] == 0


def test_build_size_guard(tmp_path, capsys):
    code, out, err = run(capsys, "build", "--n", "9", "--out", str(tmp_path))
    assert code == 2 and out == "" and "n" in err


def test_solve_gf2(capsys):
    code, out, _ = run(capsys, "solve", "--n", "4", "--field", "gf2")
    res = json.loads(out)["results"]["exact-linalg"]
    assert code == 0
    assert (res["rank"], res["rank_augmented"], res["solvable"]) == (462, 463, False)


def test_solve_integer_n3(capsys):
    code, out, _ = run(capsys, "solve", "--n", "3", "--field", "integer")
    res = json.loads(out)["results"]["exact-linalg"]
    assert code == 0 and res["solvable"] and res["witness_verified"] is True


def test_solve_rational_n4(capsys):
    code, out, _ = run(capsys, "solve", "--n", "4", "--field", "rational")
    res = json.loads(out)["results"]["exact-linalg"]
    assert code == 0 and res["solvable"] and res["witness_verified"] is True


def test_solve_from_exported_system(tmp_path, capsys):
    run(capsys, "build", "--n", "3", "--out", str(tmp_path))
    code, out, _ = run(capsys, "solve", "--system", str(tmp_path), "--field", "gfp", "--p", "5")
    res = json.loads(out)
    assert code == 0 and res["n"] == 3 and res["results"]["exact-linalg"]["p"] == 5


@pytest.mark.parametrize("argv", [["solve", "--field", "gfp"],
                                  ["solve", "--field", "gf2", "--p", "3"],
                                  ["solve", "--field", "gfp", "--p", "4"]])
def test_solve_bad_p(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_solve_missing_system(tmp_path, capsys):
    code, _, err = run(capsys, "solve", "--system", str(tmp_path / "nope"))
    assert code == 2 and "nope" in err


def test_bad_field_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--field", "reals"])
    assert exc.value.code == 2


def test_verify_paths_deterministic(capsys):
    argv = ["verify-paths", "--faces", "10", "--samples", "128", "--seed", "4"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert strip_timings(json.loads(out1)) == strip_timings(json.loads(out2))
    res = json.loads(out1)["results"]["unitary-paths"]
    assert res["passed"] and res["max_deviation"] < 1e-6


def test_verify_paths_base_targets(capsys):
    code, out, _ = run(capsys, "verify-paths", "--faces", "50", "--samples", "256",
                       "--targets", "base")
    assert code == 0
    assert json.loads(out)["results"]["unitary-paths"]["max_deviation"] < 1e-9


def test_verify_paths_minimum_samples(capsys):
    code, _, err = run(capsys, "verify-paths", "--n", "3", "--faces", "5", "--samples", "64",
                       "--tol", "1e-6")
    # targets in [-3, 3] stay resolvable at 64 samples
    assert code == 0 and err == ""


def test_counterexample_depth_4(capsys):
    code, out, _ = run(capsys, "counterexample", "--grid-depth", "4")
    res = json.loads(out)["results"]["counterexample"]
    assert code == 0
    assert res["points_checked"] == 2024 * 15
    assert all(res[k] == 0 for k in res if k.endswith("_failures"))


def test_text_format(capsys):
    code, out, _ = run(capsys, "solve", "--n", "3", "--field", "rational", "--format", "text")
    assert code == 0
    assert out.startswith("solve (n=3")
    assert "exact-linalg.rank: 10" in out
    assert "witness: [24 entries]" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "simplex_obstruction", "solve", "--n", "3",
                           "--field", "gf2"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["exact-linalg"]["solvable"] is True

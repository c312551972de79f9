import json
import shutil
import statistics
import subprocess
import sys

import numpy as np
import pytest

from bregman_hausdorff import sample_simplex, save_points
from bregman_hausdorff.cli import main


@pytest.fixture
def fixture_files(tmp_path):
    p = tmp_path / "p.csv"
    q = tmp_path / "q.csv"
    p.write_text("e1,e2,e3,e4\n0.5,0.25,0.125,0.125\n")
    q.write_text("e1,e2,e3,e4\n0.3333333333333333,0.3333333333333333,0.3333333333333334,0\n")
    return str(p), str(q)


@pytest.fixture
def clouds(tmp_path):
    p, q = str(tmp_path / "P.csv"), str(tmp_path / "Q.csv")
    save_points(sample_simplex(5, 400, seed=1), p)
    save_points(sample_simplex(5, 150, seed=2), q)
    return p, q


def run_json(capsys, *argv):
    code = main(list(argv) + ["--output", "json"])
    out = capsys.readouterr().out
    assert code == 0, out
    return json.loads(out)


def run_code(capsys, *argv):
    code = main(list(argv))
    err = capsys.readouterr().err
    return code, err


class TestHausdorff:
    def test_fixture_both_directions(self, capsys, fixture_files):
        p, q = fixture_files
        rep = run_json(capsys, "hausdorff", "--p", p, "--q", q, "--divergence", "kl",
                       "--variant", "primal", "--both-directions")
        a, b = rep["results"]
        assert a["direction"] == "P||Q" and a["value"] == "inf"
        assert a["stats"]["infinite"] is True
        assert b["direction"] == "Q||P" and b["value"] == pytest.approx(0.415, abs=1e-3)
        assert rep["units"] == "bits"

    def test_self_is_zero(self, capsys, clouds):
        p, _ = clouds
        rep = run_json(capsys, "hausdorff", "--p", p, "--q", p)
        assert rep["results"][0]["value"] == 0.0

    @pytest.mark.parametrize("variant", ["primal", "dual"])
    def test_backends_field_for_field(self, capsys, clouds, variant):
        p, q = clouds
        reps = {b: run_json(capsys, "hausdorff", "--p", p, "--q", q, "--variant", variant,
                            "--backend", b, "--both-directions")
                for b in ("linear", "kdtree", "shell")}
        keys = {b: (sorted(r), [sorted(x) for x in r["results"]],
                    [sorted(x["stats"]) for x in r["results"]]) for b, r in reps.items()}
        assert keys["linear"] == keys["kdtree"] == keys["shell"]
        for r in reps.values():
            for x, y in zip(r["results"], reps["linear"]["results"]):
                assert x["value"] == y["value"] and x["witness"] == y["witness"]

    def test_units_dimensionless(self, capsys, clouds):
        p, q = clouds
        assert run_json(capsys, "hausdorff", "--p", p, "--q", q, "--divergence", "is")["units"] \
            == "dimensionless"

    def test_table_matches_json(self, capsys, clouds):
        p, q = clouds
        rep = run_json(capsys, "hausdorff", "--p", p, "--q", q)
        assert main(["hausdorff", "--p", p, "--q", q]) == 0
        table = capsys.readouterr().out
        assert f"value={rep['results'][0]['value']!r}" in table

    def test_threads(self, capsys, clouds):
        p, q = clouds
        one = run_json(capsys, "hausdorff", "--p", p, "--q", q)
        four = run_json(capsys, "hausdorff", "--p", p, "--q", q, "--threads", "4")
        assert one["results"][0]["value"] == four["results"][0]["value"]

    def test_deterministic(self, capsys, clouds):
        p, q = clouds
        a = run_json(capsys, "hausdorff", "--p", p, "--q", q, "--backend", "shell")
        b = run_json(capsys, "hausdorff", "--p", p, "--q", q, "--backend", "shell")
        for x, y in zip(a["results"], b["results"]):
            assert x["value"] == y["value"] and x["witness"] == y["witness"]


class TestChernoff:
    def test_se_singletons(self, capsys, tmp_path):
        (tmp_path / "a.csv").write_text("0\n")
        (tmp_path / "b.csv").write_text("2\n")
        rep = run_json(capsys, "chernoff", "--p", str(tmp_path / "a.csv"),
                       "--q", str(tmp_path / "b.csv"), "--divergence", "se")
        r = rep["results"][0]
        assert r["value"] == pytest.approx(1.0, abs=1e-9)
        assert r["chernoff_points"] == 1

    def test_swap_and_residuals(self, capsys, clouds):
        p, q = clouds
        a = run_json(capsys, "chernoff", "--p", p, "--q", q, "--tolerance", "1e-11")
        b = run_json(capsys, "chernoff", "--p", q, "--q", p, "--tolerance", "1e-11")
        assert a["results"][0]["value"] == b["results"][0]["value"]
        assert a["results"][0]["max_residual"] <= 1e-11
        assert a["results"][0]["chernoff_points"] == 400 * 150

    def test_budget(self, capsys, clouds):
        p, q = clouds
        code, err = run_code(capsys, "chernoff", "--p", p, "--q", q, "--max-pairs", "1000")
        assert code == 2 and "subsample" in err


class TestExitCodes:
    def test_usage(self, capsys, fixture_files):
        p, q = fixture_files
        assert run_code(capsys, "hausdorff", "--p", p, "--q", q, "--divergence", "l2")[0] == 2
        assert run_code(capsys, "frobnicate")[0] == 2

    def test_dimension_mismatch_is_usage(self, capsys, tmp_path, fixture_files):
        (tmp_path / "d3.csv").write_text("0.2,0.3,0.5\n")
        code, err = run_code(capsys, "hausdorff", "--p", fixture_files[0], "--q", str(tmp_path / "d3.csv"))
        assert code == 2 and "dimension" in err

    def test_parse(self, capsys, tmp_path, fixture_files):
        bad = tmp_path / "bad.csv"
        bad.write_text("0.5,0.5\n0.5\n")
        code, err = run_code(capsys, "hausdorff", "--p", str(bad), "--q", fixture_files[1])
        assert code == 3 and ":2:" in err
        assert len(err.strip().splitlines()) == 1

    def test_missing_file(self, capsys, tmp_path, fixture_files):
        assert run_code(capsys, "hausdorff", "--p", str(tmp_path / "nope.csv"),
                        "--q", fixture_files[1])[0] == 3

    def test_domain(self, capsys, tmp_path, fixture_files):
        bad = tmp_path / "bad.csv"
        bad.write_text("0.5,0.6,0,0\n")
        assert run_code(capsys, "hausdorff", "--p", str(bad), "--q", fixture_files[1])[0] == 4
        assert run_code(capsys, "hausdorff", "--p", str(bad), "--q", fixture_files[1],
                        "--validate", "none")[0] == 0

    def test_convergence(self, capsys, clouds):
        p, q = clouds
        code, err = run_code(capsys, "chernoff", "--p", p, "--q", q, "--max-iterations", "1")
        assert code == 5 and "bisection" in err


class TestGen:
    def test_identical_files(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            assert main(["gen", "--dim", "10", "--count", "2000", "--seed", "7", "--out", str(path)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()
        X = np.loadtxt(a, delimiter=",")
        assert X.shape == (2000, 10)

    def test_make_dirs(self, capsys, tmp_path):
        out = tmp_path / "new" / "x.csv"
        assert run_code(capsys, "gen", "--dim", "3", "--count", "5", "--out", str(out))[0] == 2
        assert main(["gen", "--dim", "3", "--count", "5", "--out", str(out), "--make-dirs"]) == 0
        assert out.exists()

    def test_bad_dim(self, capsys, tmp_path):
        assert run_code(capsys, "gen", "--dim", "1", "--count", "5",
                        "--out", str(tmp_path / "x.csv"))[0] == 2


class TestBench:
    def test_schema_and_median(self, capsys):
        rep = run_json(capsys, "bench", "--dims", "3,4", "--sizes", "300,60",
                       "--divergences", "kl,is", "--repeats", "3")
        cells = {(r["dim"], r["divergence"], r["backend"]) for r in rep["records"]}
        assert len(cells) == len(rep["records"]) == 2 * 2 * 3
        for r in rep["records"]:
            assert len(r["times"]) == 3
            assert r["median_seconds"] == statistics.median(r["times"])
            assert (r["n_p"], r["n_q"]) == (300, 60)
        assert len(rep["speedups"]) == 4
        by_cell = {}
        for r in rep["records"]:
            by_cell.setdefault((r["dim"], r["divergence"]), set()).add(r["value"])
        assert all(len(v) == 1 for v in by_cell.values())

    def test_bad_sizes(self, capsys):
        assert run_code(capsys, "bench", "--sizes", "10")[0] == 2
        assert run_code(capsys, "bench", "--backends", "ball")[0] == 2


@pytest.mark.skipif(shutil.which("bregman-hausdorff") is None, reason="console script not installed")
def test_console_script(fixture_files):
    p, q = fixture_files
    out = subprocess.run(["bregman-hausdorff", "hausdorff", "--p", p, "--q", q, "--output", "json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["results"][0]["value"] == "inf"


def test_module_entry(fixture_files):
    p, q = fixture_files
    out = subprocess.run([sys.executable, "-m", "bregman_hausdorff", "hausdorff", "--p", p, "--q", q],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "value='inf'" in out.stdout

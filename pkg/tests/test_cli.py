import json
import subprocess
import sys

import numpy as np
import pytest

from depthmod import cli, report
from depthmod.errors import SamplingBudgetError


def run(capsys, *args):
    code = cli.main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_covariance_rrt6(capsys):
    code, out, _ = run(capsys, "covariance", "--model", "rrt", "--m", "6")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "model,m,scale,i,j,exact,value"
    first = [ln.split(",") for ln in lines[1:7]]
    assert [r[5] for r in first] == ["2/36", "1/36", "-1/36", "-2/36", "-1/36", "1/36"]
    assert all(r[2] == "n log n" for r in first)
    assert first[0][6] == "0.0555555555556"


def test_covariance_json_and_sigma2(capsys):
    code, out, _ = run(capsys, "covariance", "--model", "cgwt", "--m", "3", "--sigma2", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["first_row"] == ["4/27", "-2/27", "-2/27"] and doc["sigma2"] == "2"
    assert np.allclose(doc["matrix"], np.array([[4, -2, -2], [-2, 4, -2], [-2, -2, 4]]) / 27)


def test_regime_mismatch_exit_2(capsys):
    code, out, err = run(capsys, "covariance", "--model", "bst", "--m", "9")
    assert code == 2 and out == "" and "large regime" in err
    code, _, err = run(capsys, "moments", "--model", "rrt", "--m", "4")
    assert code == 2 and "small regime" in err
    code, _, err = run(capsys, "simulate", "--model", "rrt", "--m", "6", "--n", "100", "--scaling", "sqrt-n")
    assert code == 2 and "critical regime" in err


def test_usage_errors_exit_2(capsys):
    for args in (["simulate", "--model", "rrt", "--m", "1", "--n", "10"],
                 ["simulate", "--model", "rrt", "--m", "3", "--n", "10", "--offspring", "poisson1"],
                 ["simulate", "--model", "cgwt", "--m", "3", "--n", "10", "--offspring", "twopoint-0-2"],
                 ["oscillation", "--model", "bst", "--m-from", "9", "--m-to", "5"]):
        assert run(capsys, *args)[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["simulate", "--model", "avl", "--m", "3", "--n", "10"])
    assert exc.value.code == 2


def test_sampling_budget_exit_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise SamplingBudgetError("no luck")

    monkeypatch.setattr(cli.stats, "simulate_counts", boom)
    code, _, err = run(capsys, "simulate", "--model", "cgwt", "--m", "2", "--n", "11", "--reps", "2")
    assert code == 3 and "no luck" in err


def test_simulate_round_trip(capsys, tmp_path):
    path = tmp_path / "s.csv"
    args = ["simulate", "--model", "rrt", "--m", "3", "--n", "2000", "--reps", "50", "--seed", "4"]
    assert cli.main(args + ["--out", str(path)]) == 0
    text = path.read_text()
    s = report.read_summary_csv(text)
    assert s.model == "rrt" and s.m == 3 and s.replicates == 50 and s.scaling == "sqrt-n"
    assert report.summary_to_csv(s) == text  # stable at printed precision
    # deterministic and independent of threads
    assert cli.main(args + ["--threads", "3"]) == 0
    assert capsys.readouterr().out == text


def test_simulate_single_replicate(capsys):
    code, out, _ = run(capsys, "simulate", "--model", "bst", "--m", "99", "--n", "10", "--reps", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and sum(doc["mean"]) == 10 and doc["scaling"] == "n-alpha"
    assert doc["sample_cov"][0][0] is None  # undefined with one replicate


def test_oscillation_lines(capsys):
    code, out, _ = run(capsys, "oscillation", "--model", "rrt", "--m-from", "7", "--m-to", "100")
    rows = out.splitlines()[1:]
    assert code == 0 and len(rows) == 94 and all(r.endswith("oscillates=true") for r in rows)


def test_moments_table(capsys):
    code, out, _ = run(capsys, "moments", "--model", "bst", "--m", "9", "--max-degree", "3")
    rows = {tuple(r.split(",")[:3]): r.split(",")[3:] for r in out.splitlines()[1:]}
    assert code == 0 and float(rows[("Z", "1", "1")][0]) == pytest.approx(31.16, abs=0.01)
    assert ("Zhat", "3", "0") in rows


def test_scaling_command(capsys):
    grid = ",".join(str(4**k) for k in range(5, 10))
    code, out, _ = run(capsys, "scaling", "--model", "rrt", "--m", "2", "--n-grid", grid,
                       "--reps", "200", "--min-n", "1000")
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert code == 0 and len(rows) == 5
    assert float(rows[0][5]) == pytest.approx(1.0, abs=0.15)  # Gaussian regime: Var ~ n


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "depthmod", "covariance", "--model", "bst", "--m", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "1/28" in proc.stdout

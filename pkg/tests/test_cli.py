import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from qnamarket.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from qnamarket.stats import summarize


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_simulate_outputs(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["--steps", "2100", "--transient", "100", "--seed", "3", "--out", str(out)]) == EXIT_OK
    rows = read_csv(out)
    assert len(rows) == 2000
    assert list(rows[0]) == ["round", "return", "log_price"]
    assert rows[0]["round"] == "101" and rows[-1]["round"] == "2100"

    summary = json.loads((tmp_path / "run.json").read_text())
    assert {"n", "mean", "variance", "skewness", "fisher_kurtosis", "jb_statistic", "jb_p_value", "config"} <= set(
        summary
    )
    assert summary["config"]["n_components"] == 20 and summary["config"]["lambda"] == 1000.0

    # re-reading the CSV reproduces the emitted summary
    returns = np.array([float(r["return"]) for r in rows])
    again = summarize(returns).as_dict()
    for key, value in again.items():
        assert value == pytest.approx(summary[key], rel=1e-9, abs=1e-300)
    log_prices = np.array([float(r["log_price"]) for r in rows])
    np.testing.assert_allclose(np.diff(log_prices), returns[1:], atol=1e-12)


@pytest.mark.parametrize("steps, transient", [(50, 0), (300, 299), (1000, 250)])
def test_row_count_is_steps_minus_transient(tmp_path, steps, transient):
    for mode in ("simulate", "probmap"):
        out = tmp_path / f"{mode}.csv"
        args = ["--mode", mode, "--steps", str(steps), "--transient", str(transient), "--out", str(out)]
        assert main(args) == EXIT_OK
        assert len(read_csv(out)) == steps - transient


def test_probmap_outputs(tmp_path):
    out = tmp_path / "pm.csv"
    assert main(["--mode", "probmap", "--steps", "400", "--transient", "0", "--out", str(out)]) == EXIT_OK
    rows = read_csv(out)
    assert len(rows[0]) == 17
    for row in rows[:: 50]:
        total = sum(float(v) for k, v in row.items() if k != "round")
        assert total == pytest.approx(1, abs=1e-10)
    report = json.loads((tmp_path / "pm.json").read_text())
    assert report["signed_vs_quantum_max_deviation"] < 1e-10
    assert report["literal_max_normalization_drift"] < 1e-10


def test_probmap_noisy(tmp_path):
    out = tmp_path / "pmn.csv"
    assert main(["--mode", "probmap", "--beta", "2", "--steps", "200", "--out", str(out)]) == EXIT_OK
    report = json.loads((tmp_path / "pmn.json").read_text())
    assert report["signed_vs_quantum_max_deviation"] < 1e-10
    assert report["config"]["noise_beta"] == 2.0


def test_sweep_table3_shape(tmp_path):
    out = tmp_path / "t3.csv"
    args = ["--mode", "sweep", "--sweep", "v0=0.4,0.5,0.6,0.7,0.8,0.9", "--sweep", "sin2phi=0.4,0.5,0.6"]
    assert main(args + ["--steps", "300", "--out", str(out)]) == EXIT_OK
    rows = read_csv(out)
    assert len(rows) == 18
    assert {(float(r["v0"]), float(r["sin2phi"])) for r in rows} == {
        (v, s) for v in (0.4, 0.5, 0.6, 0.7, 0.8, 0.9) for s in (0.4, 0.5, 0.6)
    }
    assert all(int(r["n"]) == 200 for r in rows)


def test_sweep_json_with_replicates_and_beta(tmp_path):
    out = tmp_path / "t7.json"
    args = ["--mode", "sweep", "--sweep", "n_components=10,20", "--beta", "2", "--v0", "0.88"]
    args += ["--replicates", "3", "--steps", "300", "--format", "json", "--out", str(out)]
    assert main(args) == EXIT_OK
    doc = json.loads(out.read_text())
    assert len(doc["rows"]) == 6
    assert {r["n_components"] for r in doc["rows"]} == {10, 20}
    assert len({r["seed"] for r in doc["rows"]}) == 6
    assert all(r["noise_beta"] == 2.0 for r in doc["rows"])


def test_sweep_noise_beta_axis(tmp_path):
    out = tmp_path / "b.csv"
    assert main(["--mode", "sweep", "--sweep", "noise_beta=0.01,2", "--steps", "200", "--out", str(out)]) == 0
    assert [float(r["noise_beta"]) for r in read_csv(out)] == [0.01, 2.0]


def test_outputs_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    a.mkdir(), b.mkdir()
    for d in (a, b):
        assert main(["--steps", "700", "--seed", "5", "--beta", "0.3", "--out", str(d / "r.csv")]) == 0
    assert (a / "r.csv").read_bytes() == (b / "r.csv").read_bytes()
    assert (a / "r.json").read_bytes() == (b / "r.json").read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ["--mode", "sweep"],
        ["--mode", "bogus"],
        ["--v0", "1.5"],
        ["--sin2phi", "-0.1"],
        ["--steps", "10", "--transient", "10"],
        ["--sweep", "lambda=1,2", "--mode", "sweep"],
        ["--sweep", "v0=a,b", "--mode", "sweep"],
        ["--sweep", "v0=0.5,3", "--mode", "sweep"],
        ["--components", "0"],
        ["--format", "xml"],
        ["--workers", "0"],
    ],
)
def test_usage_errors(tmp_path, args):
    with pytest.raises(SystemExit) as exc:
        main(args + ["--out", str(tmp_path / "x.csv")])
    assert exc.value.code == EXIT_USAGE
    assert not (tmp_path / "x.csv").exists()


def test_missing_out_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == EXIT_USAGE


def test_unwritable_path(tmp_path):
    assert main(["--steps", "50", "--transient", "0", "--out", str(tmp_path / "nope" / "r.csv")]) == EXIT_RUNTIME


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "qnamarket", "--steps", "60", "--transient", "10", "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert len(read_csv(out)) == 50
    bad = subprocess.run([sys.executable, "-m", "qnamarket", "--v0", "7", "--out", str(out)], capture_output=True)
    assert bad.returncode == EXIT_USAGE


def test_undefined_statistics_still_written(tmp_path):
    out = tmp_path / "short.csv"
    assert main(["--steps", "3", "--transient", "1", "--out", str(out)]) == EXIT_OK
    summary = json.loads((tmp_path / "short.json").read_text())
    assert summary["n"] == 2 and summary["fisher_kurtosis"] is None and "undefined" in summary

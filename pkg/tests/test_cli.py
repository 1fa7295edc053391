import json
import os
import subprocess
import sys

import numpy as np
import pytest

from catq import write_hamiltonian
from catq.cli import main
from catq.experiments import ExperimentConfig
from catq.errors import ConfigError


def _write_config(tmp_path, **cfg):
    cfg.setdefault("output_path", "out")
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    return path


def _summary(tmp_path):
    return json.loads((tmp_path / "out" / "summary.json").read_text())


def test_demo_prints_metric(capsys):
    assert main(["demo"]) == 0
    out = capsys.readouterr().out
    assert "Q = [[1, -1], [-1, 3]]" in out
    assert "h_qa norm" in out


def test_run_reality_sweep_outputs(tmp_path):
    path = _write_config(tmp_path, kind="reality_sweep", hamiltonian={"source": "random", "dim": 4}, seed=3)
    assert main(["run", str(path)]) == 0
    summary = _summary(tmp_path)
    assert summary["status"] == "pass"
    assert summary["config"]["seed"] == 3
    meta = json.loads((tmp_path / "out" / "metadata.json").read_text())
    assert meta["backend"] in ("cython", "python") and "timestamp" in meta
    csv = (tmp_path / "out" / "reality_sweep.csv").read_bytes()
    assert b"\r" not in csv and csv.startswith(b"t,max_imag_residual")


def test_complex_values_split_into_re_im_columns(tmp_path):
    path = _write_config(tmp_path, kind="max_bound", hamiltonian={"source": "random", "dim": 3})
    assert main(["run", str(path)]) == 0
    header = (tmp_path / "out" / "max_bound.csv").read_text().splitlines()[0]
    assert "overlap_re" in header and "overlap_im" in header


def test_env_seed_overrides_config(tmp_path, monkeypatch):
    monkeypatch.setenv("CATQ_SEED", "17")
    path = _write_config(tmp_path, kind="max_bound", hamiltonian={"source": "random", "dim": 3}, seed=1)
    assert main(["run", str(path)]) == 0
    assert _summary(tmp_path)["config"]["seed"] == 17


def test_bad_env_seed_is_a_usage_error(tmp_path, monkeypatch):
    monkeypatch.setenv("CATQ_SEED", "x")
    path = _write_config(tmp_path, kind="max_bound", hamiltonian={"source": "random", "dim": 3})
    assert main(["run", str(path)]) == 2


def test_tolerance_failure_exits_one_and_still_writes(tmp_path):
    path = _write_config(
        tmp_path, kind="reality_sweep", hamiltonian={"source": "random", "dim": 3}, tolerances={"max_imag_residual": 1e-30}
    )
    assert main(["run", str(path)]) == 1
    assert _summary(tmp_path)["status"] == "fail"


def test_file_source(tmp_path):
    write_hamiltonian(tmp_path / "h.txt", np.array([[1, 1], [0, 2]]))
    path = _write_config(tmp_path, kind="demo", hamiltonian={"source": "file", "path": "h.txt"})
    assert main(["run", str(path)]) == 0
    assert _summary(tmp_path)["checks"]["h_qa_norm"]["pass"]


def test_ragged_matrix_file_is_a_usage_error(tmp_path, capsys):
    (tmp_path / "h.txt").write_text("2\n1,0 0,0\n1,0\n")
    path = _write_config(tmp_path, kind="demo", hamiltonian={"source": "file", "path": "h.txt"})
    assert main(["run", str(path)]) == 2
    assert "line 3" in capsys.readouterr().err


def test_defective_matrix_is_a_numeric_failure(tmp_path):
    write_hamiltonian(tmp_path / "h.txt", np.array([[1, 1], [0, 1]]))
    path = _write_config(tmp_path, kind="max_bound", hamiltonian={"source": "file", "path": "h.txt"})
    assert main(["run", str(path)]) == 1
    summary = _summary(tmp_path)
    assert summary["status"] == "error" and "DefectiveMatrixError" in summary["error"]


def test_continuity_run(tmp_path):
    path = _write_config(
        tmp_path,
        kind="continuity",
        hamiltonian={"source": "oscillator", "n_points": 321, "grid_max": 8.0},
        params={"steps": 20},
    )
    assert main(["run", str(path)]) == 0


@pytest.mark.parametrize(
    "raw",
    [
        {"kind": "nope", "output_path": "o"},
        {"kind": "demo"},
        {"kind": "demo", "output_path": "o", "extra": 1},
        {"kind": "max_bound", "output_path": "o"},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "random"}},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "random", "dim": 3, "bogus": 1}},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "file", "path": "missing.txt"}},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "random", "dim": 3}, "t_a": 1, "t_b": 1},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "random", "dim": 3}, "seed": 1.5},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "random", "dim": 3}, "tolerances": {"x": 1}},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "random", "dim": 3}, "params": {"x": 1}},
        {"kind": "max_bound", "output_path": "o", "hamiltonian": {"source": "random", "dim": 3}, "hbar": 0},
    ],
)
def test_config_validation(raw, tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(raw, str(tmp_path))


def test_run_with_invalid_json_exits_two(tmp_path):
    bad = tmp_path / "cfg.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 2
    assert main(["run", str(tmp_path / "absent.json")]) == 2


def test_usage_errors_exit_two():
    assert main([]) == 2
    assert main(["verify", "--dim", "1"]) == 2
    assert main(["verify", "--dim", "x"]) == 2


def test_help_documents_flags():
    out = subprocess.run([sys.executable, "-m", "catq", "verify", "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    for flag in ("--dim", "--seed", "--t", "--output"):
        assert flag in out.stdout


def test_verify_writes_all_tables(tmp_path):
    assert main(["verify", "--dim", "3", "--seed", "5", "--output", str(tmp_path / "v")]) == 0
    names = set(os.listdir(tmp_path / "v"))
    assert {"summary.json", "metadata.json", "reality_sweep.csv", "max_bound.csv", "oracle_restarts.csv"} <= names
    summary = json.loads((tmp_path / "v" / "summary.json").read_text())
    assert set(summary["suites"]) == {"reality_sweep", "max_bound", "oracle_compare"}

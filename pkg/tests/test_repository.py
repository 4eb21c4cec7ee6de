import json

import numpy as np
import pytest

from cpi_superspace.errors import PlotDataError, SerializationError
from cpi_superspace.models.phase_space import Distribution, Trajectory
from cpi_superspace.models.quantum import ConcentrationRow, KernelValue, SlicingRow
from cpi_superspace.models.verification import CheckResult, RunSummary
from cpi_superspace.repositories import FileResultRepository
from cpi_superspace.utils.plot_data import emit_plot_data, plot_table


def _summary():
    return RunSummary(
        command="evolve",
        config_hash="abc123",
        checks=[
            CheckResult.evaluate("evolve.det_jacobian", 1e-13, 1e-8),
            CheckResult.evaluate("evolve.energy_drift", 2e-6, 1e-6),
            CheckResult.evaluate("evolve.pairing", float("nan"), 1e-8),
        ],
    )


def test_check_result_status():
    assert CheckResult.evaluate("a", 0.0, 0.0).passed
    assert not CheckResult.evaluate("a", 1e-3, 1e-4).passed
    assert not CheckResult.evaluate("a", float("inf"), 1.0).passed
    assert not CheckResult.condition("monotone", False).passed


def test_summary_round_trip(tmp_path):
    repository = FileResultRepository(tmp_path / "out")
    repository.save_summary(_summary())
    loaded = repository.load_summary()
    assert loaded.command == "evolve"
    assert loaded.status == "fail"
    assert [check.check for check in loaded.failed()] == ["evolve.energy_drift", "evolve.pairing"]
    data = json.loads((tmp_path / "out" / "summary.json").read_text(encoding="utf-8"))
    assert data["schema_version"] == 1
    assert data["checks"][2]["residual"] == "nan"


def test_summary_bytes_are_deterministic(tmp_path):
    first = FileResultRepository(tmp_path / "a")
    second = FileResultRepository(tmp_path / "b")
    first.save_summary(_summary())
    second.save_summary(_summary())
    assert (tmp_path / "a" / "summary.json").read_bytes() == (tmp_path / "b" / "summary.json").read_bytes()


def test_bad_summary(tmp_path):
    (tmp_path / "summary.json").write_text(json.dumps({"command": "evolve"}), encoding="utf-8")
    with pytest.raises(SerializationError):
        FileResultRepository(tmp_path).load_summary()


def test_csv_keeps_full_precision(tmp_path):
    repository = FileResultRepository(tmp_path)
    repository.save_csv("table.csv", ["N", "error"], [[2, 0.1 + 0.2], [4, 1e-17]])
    lines = (tmp_path / "table.csv").read_text(encoding="utf-8").splitlines()
    assert lines == ["N,error", "2,0.30000000000000004", "4,1e-17"]
    assert repository.list_artifacts() == ["table.csv"]


def test_output_dir_created_lazily(tmp_path):
    repository = FileResultRepository(tmp_path / "lazy")
    assert repository.list_artifacts() == []
    assert not (tmp_path / "lazy").exists()


@pytest.mark.parametrize("kind", ["distribution", "hbar_sweep", "n_sweep", "trajectory", "lyapunov"])
def test_empty_results_write_nothing(tmp_path, kind):
    path = tmp_path / "empty.dat"
    with pytest.raises(PlotDataError):
        emit_plot_data([], kind, path, "hash")
    assert not path.exists()


def test_unknown_plot_kind():
    with pytest.raises(PlotDataError):
        plot_table([1], "histogram")


def test_distribution_plot_data(tmp_path):
    dist = Distribution((-1.0, 1.0), (0.0, 2.0), np.arange(12, dtype=float).reshape(3, 4))
    path = emit_plot_data(dist, "distribution", tmp_path / "distribution.dat", "f00d")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# kind: distribution"
    assert lines[1] == "# config_hash: f00d"
    assert lines[2].startswith("# q ")
    data = np.loadtxt(path)
    assert data.shape == (12, 3)
    assert data[5, 2] == 5.0


def test_sweep_plot_data(tmp_path):
    exact = KernelValue(0.0, 0.0)
    rows = [SlicingRow(N, KernelValue(0.0, 1.0 / N), exact) for N in (2, 4, 8)]
    data, columns = plot_table(rows, "n_sweep")
    np.testing.assert_allclose(data[:, 0], [2, 4, 8])
    assert columns.startswith("N ")

    concentration = [ConcentrationRow(hbar, np.sqrt(hbar / 2), 0.1, 0.1, 1.0) for hbar in (1.0, 0.1)]
    data, _ = plot_table(concentration, "hbar_sweep")
    np.testing.assert_allclose(data[:, 1], np.sqrt([0.5, 0.05]))


def test_trajectory_plot_data(tmp_path):
    trajectory = Trajectory(times=[0.0, 0.5, 1.0], phi=[[1.0, 0.0], [0.9, -0.5], [0.5, -0.8]])
    repository = FileResultRepository(tmp_path)
    path = repository.save_plot_data("trajectory.dat", trajectory, "trajectory", "h")
    assert np.loadtxt(path).shape == (3, 3)

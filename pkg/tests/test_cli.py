import json

import pytest

from cpi_superspace.cli.main import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR, EXIT_OK, main
from cpi_superspace.physics import ghost_kernel


def _run(config_path, output_dir, *extra):
    return main(["--config", str(config_path), "--output-dir", str(output_dir), *extra])


def _summary(output_dir):
    return json.loads((output_dir / "summary.json").read_text(encoding="utf-8"))


def test_verify_grassmann(write_config, tmp_path):
    path = write_config({"command": "verify", "seed": 1, "verify": {"suite": "grassmann", "random_elements": 4}})
    out = tmp_path / "verify"
    assert _run(path, out) == EXIT_OK
    summary = _summary(out)
    assert summary["status"] == "pass"
    assert summary["command"] == "verify"
    assert all(check["check"].startswith("grassmann.") for check in summary["checks"])
    identities = json.loads((out / "identities.json").read_text(encoding="utf-8"))
    assert identities["surface_term_sign"] == -1


def test_same_config_gives_identical_summaries(write_config, tmp_path):
    path = write_config({"command": "verify", "seed": 7, "verify": {"suite": "grassmann", "random_elements": 3}})
    assert _run(path, tmp_path / "first") == EXIT_OK
    assert _run(path, tmp_path / "second") == EXIT_OK
    first = (tmp_path / "first" / "summary.json").read_bytes()
    assert first == (tmp_path / "second" / "summary.json").read_bytes()


def test_flags_override_config(write_config, tmp_path):
    path = write_config({"command": "verify", "seed": 1, "verify": {"suite": "grassmann", "random_elements": 2}})
    out = tmp_path / "evolve"
    assert _run(path, out, "evolve", "--model", "ho", "--T", "0.5") == EXIT_OK
    assert _summary(out)["command"] == "evolve"
    assert {"summary.json", "trajectory.csv", "trajectory.dat"} <= {p.name for p in out.iterdir()}
    assert (out / "trajectory.csv").read_text(encoding="utf-8").startswith("t,")


def test_unknown_config_key(write_config, tmp_path, capsys):
    path = write_config({"command": "evolve", "integrator": {"order": 4}})
    assert _run(path, tmp_path / "out") == EXIT_CONFIG_ERROR
    assert "order" in capsys.readouterr().err
    assert not (tmp_path / "out").exists()


def test_invalid_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"command\": ", encoding="utf-8")
    assert _run(path, tmp_path / "out") == EXIT_CONFIG_ERROR


def test_missing_config_file(tmp_path):
    assert _run(tmp_path / "absent.json", tmp_path / "out") == EXIT_CONFIG_ERROR


def test_missing_seed(write_config, tmp_path):
    path = write_config({"command": "verify"})
    assert _run(path, tmp_path / "out") == EXIT_CONFIG_ERROR


def test_failed_check_still_writes_summary(write_config, tmp_path, capsys):
    path = write_config({"command": "quantum", "quantum": {"sweep": "N", "slices": [2, 4]}})
    out = tmp_path / "coarse"
    assert _run(path, out) == EXIT_CHECK_FAILED
    summary = _summary(out)
    assert summary["status"] == "fail"
    failed = [check["check"] for check in summary["checks"] if check["status"] == "fail"]
    assert "quantum.relative_error_at_max_N" in failed
    assert "quantum.relative_error_at_max_N" in capsys.readouterr().err
    assert (out / "sweep_N.csv").exists()


def test_free_particle_slicing(write_config, tmp_path):
    path = write_config({"command": "quantum", "model": {"name": "free"}, "quantum": {"slices": [2, 8, 64]}})
    out = tmp_path / "free"
    assert _run(path, out) == EXIT_OK
    lines = (out / "sweep_N.dat").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# kind: n_sweep"
    assert lines[1] == "# config_hash: " + _summary(out)["config_hash"]


def test_group_law_sweep(write_config, tmp_path):
    path = write_config({"command": "quantum", "span": {"T": 3.0}, "quantum": {"sweep": "group"}})
    out = tmp_path / "group"
    assert _run(path, out) == EXIT_OK
    assert (out / "sweep_group.csv").exists()


def test_quantum_rejects_pendulum(write_config, tmp_path):
    path = write_config({"command": "quantum", "model": {"name": "pendulum"}})
    assert _run(path, tmp_path / "out") == EXIT_CONFIG_ERROR


def test_ghost_kernel_check(write_config, tmp_path):
    path = write_config({"command": "eq5-check", "model": {"name": "harmonic"}})
    out = tmp_path / "ghost"
    assert _run(path, out) == EXIT_OK
    report = json.loads((out / "ghost_kernel_report.json").read_text(encoding="utf-8"))
    assert report["K"] == pytest.approx(report["reports"][0]["K_expected"], rel=1e-6)
    assert len(report["reports"]) == 3
    names = {check["check"] for check in _summary(out)["checks"]}
    assert "ghost_kernel.analytic_constant[T=0.5]" in names
    assert "ghost_kernel.liouville_probability[T=1.5]" in names


def test_ghost_kernel_fails_on_wrong_normalization(write_config, tmp_path, monkeypatch):
    exact = ghost_kernel.ghost_modulus_integral
    monkeypatch.setattr(ghost_kernel, "ghost_modulus_integral", lambda G, names: 37 * exact(G, names))
    path = write_config({"command": "eq5-check", "model": {"name": "harmonic"}})
    out = tmp_path / "ghost"
    assert _run(path, out) == EXIT_CHECK_FAILED
    failed = {check["check"] for check in _summary(out)["checks"] if check["status"] == "fail"}
    assert "ghost_kernel.analytic_constant[T=1]" in failed
    assert not any(name.startswith("ghost_kernel.liouville_probability") for name in failed)


def test_ghost_kernel_rejects_pendulum(write_config, tmp_path):
    path = write_config({"command": "eq5-check", "model": {"name": "pendulum"}})
    assert _run(path, tmp_path / "out") == EXIT_CONFIG_ERROR


def test_lyapunov_short_run(write_config, tmp_path):
    path = write_config({"command": "lyapunov", "model": {"name": "harmonic"}, "lyapunov": {"T": 20.0}})
    out = tmp_path / "lyap"
    assert _run(path, out) == EXIT_OK
    assert {"lyapunov.csv", "lyapunov.dat"} <= {p.name for p in out.iterdir()}


@pytest.mark.slow
def test_liouville_oscillator(write_config, tmp_path):
    path = write_config(
        {
            "command": "liouville",
            "seed": 11,
            "initial": {"q": 0.5, "p": 0.0},
            "span": {"T": 1.5707963267948966},
            "liouville": {"samples": 20000},
        }
    )
    out = tmp_path / "liouville"
    assert _run(path, out) == EXIT_OK
    report = json.loads((out / "distribution.json").read_text(encoding="utf-8"))
    assert report["ensemble_binned_mass_rms"] < 5e-3
    assert "liouville.ensemble_binned_mass_rms" in {check["check"] for check in _summary(out)["checks"]}

import json

import pandas as pd
import pytest

from wcusp_waves.app import EXIT_OK, EXIT_PRECONDITION, EXIT_USAGE, main
from wcusp_waves.commands.skeleton import (
    build_skeleton,
    request_params,
    standing_checks,
    traveling_checks,
)
from wcusp_waves.models import SkeletonRequestSchema
from wcusp_waves.shared.errors import LemmaConditionFailed


def write_request(directory, name: str, data: dict) -> str:
    path = directory / f"{name}.json"
    with open(path, "w") as f:
        json.dump(data, f)
    return str(path)


def test_request_params_from_figure(fig8_params):
    request = SkeletonRequestSchema().load({"kind": "wavetrain", "figure": "fig8"})
    assert request_params(request) == fig8_params


def test_traveling_checks(fig8_params):
    checks = traveling_checks(fig8_params)
    assert checks["diagram"] == "MirroredHysteresis"
    assert checks["passed"]
    assert all(entry["margin"] > 0 for entry in checks["c1d_margins"])
    assert checks["c_star"] == pytest.approx(0.3607, abs=2e-3)


def test_traveling_checks_fail_on_class3(standing_params):
    with pytest.raises(LemmaConditionFailed) as e:
        traveling_checks(standing_params)
    assert e.value.condition == "mirrored_hysteresis"


def test_standing_checks(standing_params, fig8_params):
    checks = standing_checks(standing_params)
    assert checks["passed"]
    with pytest.raises(LemmaConditionFailed):
        standing_checks(fig8_params)


def test_build_standing_pulse(standing_params):
    request = SkeletonRequestSchema().load(
        {"kind": "standing_pulse", "params": {"lambda": 0.5, "alpha": 0, "beta": 1 / 3, "gamma": 0}}
    )
    orbit, checks = build_skeleton(request)
    assert orbit.spike_count == 1
    assert checks["seam_gap"] <= 1e-6
    assert checks["params"]["lam"] == standing_params.lam


def test_skeleton_command(tmp_path):
    config = write_request(
        tmp_path, "train", {"kind": "wavetrain", "figure": "fig8", "panel": "burst"}
    )
    out = tmp_path / "out"
    assert main(["skeleton", config, "--output-dir", str(out)]) == EXIT_OK

    directory = out / "skeleton" / "train"
    orbit = pd.read_csv(directory / "orbit.csv")
    assert set(orbit["kind"]) == {"slow_arc", "fast_jump"}
    with open(directory / "orbit.json") as f:
        sidecar = json.load(f)
    assert sidecar["spike_count"] == 2
    assert sidecar["checks"]["passed"]
    with open(directory / "manifest.json") as f:
        manifest = json.load(f)
    assert manifest["config_paths"] == [config]
    assert sorted(manifest["artifacts"]) == ["orbit.csv", "orbit.json"]


def test_skeleton_on_transition_variety(tmp_path, capsys):
    params = {"lambda": 0.3, "alpha": -2 / 27, "beta": 1 / 3, "gamma": 0.0}
    config = write_request(tmp_path, "degenerate", {"kind": "wavetrain", "params": params})
    code = main(["skeleton", config, "--output-dir", str(tmp_path / "out")])
    assert code == EXIT_PRECONDITION
    assert "TranscriticalDegenerate" in capsys.readouterr().err


def test_skeleton_invalid_request(tmp_path, capsys):
    config = write_request(tmp_path, "bad", {"kind": "traveling", "figure": "fig8"})
    assert main(["skeleton", config, "--output-dir", str(tmp_path / "out")]) == EXIT_USAGE
    assert "eps_us_tilde" in capsys.readouterr().err


def test_skeleton_unknown_panel(tmp_path):
    config = write_request(tmp_path, "panel", {"kind": "wavetrain", "figure": "fig8", "panel": "x"})
    assert main(["skeleton", config, "--output-dir", str(tmp_path / "out")]) == EXIT_USAGE

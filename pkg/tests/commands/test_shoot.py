import json

import pandas as pd
import pytest

from wcusp_waves.app import EXIT_OK, EXIT_PRECONDITION, main
from wcusp_waves.config.settings import JUMP_TABLE_ROWS


def params_args(p) -> list:
    return [
        "--lambda",
        repr(p.lam),
        "--alpha",
        repr(p.alpha),
        "--beta",
        repr(p.beta),
        "--gamma",
        repr(p.gamma),
    ]


def test_shoot_front_speed(tmp_path, fig8_params):
    assert main(["shoot", *params_args(fig8_params), "--output-dir", str(tmp_path)]) == EXIT_OK

    with open(tmp_path / "shoot" / "shoot.json") as f:
        summary = json.load(f)
    assert summary["c_star_closed_form"] == pytest.approx(0.3607, abs=2e-3)
    assert summary["speed_difference"] < 1e-6
    assert summary["delta_alpha_star"] == pytest.approx(0.02558, abs=1e-3)
    assert len(summary["c1d_margins"]) > 0

    table = pd.read_csv(tmp_path / "shoot" / "jump_table.csv")
    assert len(table) == JUMP_TABLE_ROWS
    assert table["z"].iloc[0] == 0.0
    assert table["z"].iloc[-1] == pytest.approx(1.5 * summary["delta_alpha_star"])

    with open(tmp_path / "shoot" / "manifest.json") as f:
        manifest = json.load(f)
    assert sorted(manifest["artifacts"]) == ["jump_table.csv", "shoot.json"]


def test_shoot_custom_grid(tmp_path, fig8_params):
    args = ["shoot", *params_args(fig8_params), "--z-max", "0.01", "--z-count", "3"]
    assert main([*args, "--output-dir", str(tmp_path)]) == EXIT_OK
    table = pd.read_csv(tmp_path / "shoot" / "jump_table.csv")
    assert list(table["z"]) == pytest.approx([0.0, 0.005, 0.01])



def test_shoot_monostable_slice(tmp_path, fig8_params):
    # far from the folds the slice has a single root and no front
    args = ["shoot", *params_args(fig8_params), "--w", "3.0", "--output-dir", str(tmp_path)]
    assert main(args) == EXIT_PRECONDITION

"""Shortcuts that are useful across wcusp-waves tests."""
import json
import os

import numpy as np

from wcusp_waves.models import (
    Grid1D,
    Perturbation,
    ScaleParams,
    SimConfig,
    SimConfigSchema,
    UnfoldingParams,
)


def small_config(**overrides) -> SimConfig:
    """A cheap simulation around the Fig. 8 parameters on a coarse grid."""
    config = SimConfig(
        grid=Grid1D(x0=0.0, x1=1.0, n=64),
        scales=ScaleParams(tau_u=0.001, tau_w=0.1, tau_z=60.0, D_u=5e-5, D_w=0.0, D_z=0.0),
        params=UnfoldingParams(
            lam=0.31333333333333335, alpha=0.3959259259259259, beta=1 / 3, gamma=0.0
        ),
        t_end=0.05,
        dt_out=0.01,
        dt_max=0.001,
        perturbation=Perturbation(x_lo=0.0, x_hi=0.1, t_lo=0.0, t_hi=0.02),
    )
    return config._replace(**overrides)


def bump_fields(config: SimConfig) -> dict:
    """Initial fields with a smooth bump in every component."""
    x = config.grid.centers
    bump = np.exp(-(((x - x.mean()) / (0.1 * (x[-1] - x[0]))) ** 2))
    return {"u": bump, "w": 0.5 * bump, "z": 0.25 * bump}


def write_config(config: SimConfig, directory) -> str:
    path = os.path.join(str(directory), "config.json")
    with open(path, "w") as f:
        json.dump(SimConfigSchema().dump(config), f)
    return path

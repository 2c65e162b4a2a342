"""Frozen simulation setups for the published figures, shipped as JSON."""

__all__ = [
    "FIGURE_IDS",
    "load_figure",
    "list_figures",
    "pitchfork_params",
    "panel_config",
    "check_pitchfork_goldens",
]

import json
import os
from typing import Dict, List, Optional

from ..config.logging import get_logger
from ..config.settings import CI_MESH, FIGURES_DIR
from ..core.unfolding import find_pitchfork
from ..models.params import FigureConfig, FigurePanel, SimConfig, UnfoldingParams
from ..models.schemas import FigureConfigSchema
from ..shared.errors import NoConvergence

logger = get_logger(__name__)

FIGURE_IDS = ("fig6", "fig7", "fig8", "fig9", "fig10", "fig11")
GOLDENS_FILE = "pitchfork_goldens.json"


def figure_path(figure_id: str) -> str:
    return os.path.join(FIGURES_DIR, f"{figure_id}.json")


def load_figure(figure_id: str) -> FigureConfig:
    if figure_id not in FIGURE_IDS:
        raise ValueError(f"unknown figure {figure_id!r}; expected one of {FIGURE_IDS}")
    with open(figure_path(figure_id)) as f:
        return FigureConfigSchema().load(json.load(f))


def list_figures() -> List[FigureConfig]:
    return [load_figure(figure_id) for figure_id in FIGURE_IDS]


def pitchfork_params(beta: float, offsets: Dict[str, float]) -> UnfoldingParams:
    """(λ_PF(β) + Δλ, α_PF(β) + Δα, β, γ_PF(β))."""
    pf = find_pitchfork(beta)
    return UnfoldingParams(
        lam=pf.lam + offsets["lam"],
        alpha=pf.alpha + offsets["alpha"],
        beta=beta,
        gamma=pf.gamma,
    )


def panel_config(
    figure: FigureConfig, panel: FigurePanel, ci_mesh: Optional[bool] = None
) -> SimConfig:
    """
    The SimConfig of one panel. Offsets are taken from the pitchfork at the
    panel's own β when it overrides β. `ci_mesh` defaults to the
    WCUSP_CI_MESH setting and swaps in the figure's reduced cell count.
    """
    if ci_mesh is None:
        ci_mesh = CI_MESH
    beta = panel.beta if panel.beta is not None else figure.beta
    offsets = panel.pitchfork_offsets or figure.pitchfork_offsets
    grid = figure.grid._replace(n=figure.ci_n) if ci_mesh else figure.grid
    return SimConfig(
        grid=grid,
        scales=figure.scales._replace(**panel.scale_overrides),
        params=pitchfork_params(beta, offsets),
        t_end=figure.t_end,
        dt_out=figure.dt_out,
        dt_max=figure.dt_max,
        perturbation=figure.perturbation,
    )


def check_pitchfork_goldens() -> List[dict]:
    """Recompute the pitchfork at every committed β and compare with the goldens."""
    with open(os.path.join(FIGURES_DIR, GOLDENS_FILE)) as f:
        goldens = json.load(f)
    tol = goldens["tolerance"]
    rows = []
    for point in goldens["points"]:
        pf = find_pitchfork(point["beta"])
        computed = {"lambda": pf.lam, "alpha": pf.alpha, "gamma": pf.gamma, "u": pf.u}
        worst = max(abs(computed[k] - point[k]) for k in computed)
        if worst > tol:
            raise NoConvergence(
                f"pitchfork at beta={point['beta']!r} drifted {worst!r} from its golden value"
            )
        rows.append({"beta": point["beta"], **computed, "deviation": worst})
        logger.debug(f"pitchfork golden at beta={point['beta']!r} matches within {worst:.2e}")
    return rows

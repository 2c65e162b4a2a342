import os
from typing import Optional

import click
import numpy as np

from ..config.logging import get_logger
from ..config.settings import JUMP_TABLE_ROWS
from ..core.unfolding import fixed_points, solve_cubic
from ..models import Command, Direction, UnfoldingParams, UnfoldingParamsSchema
from ..shared.errors import LemmaConditionFailed, ShootingDiverged
from ..skeleton import (
    c1d_margins,
    delta_alpha_star,
    front_speed_closed_form,
    jump_table,
    shoot_front_speed,
)
from .utils import (
    command_dir,
    echo_json,
    output_dir_option,
    params_options,
    write_json,
    write_manifest,
)

logger = get_logger(__name__)


@click.command("shoot")
@params_options
@click.option("--w", "w", type=float, default=None, help="Slice w (default: u_rest).")
@click.option("--z", "z", type=float, default=0.0, show_default=True, help="Slice z.")
@click.option("--z-max", type=float, default=None, help="Top of the jump-table z grid.")
@click.option("--z-count", type=click.IntRange(min=2), default=JUMP_TABLE_ROWS, show_default=True)
@output_dir_option
def shoot(
    params: UnfoldingParams,
    u_shift: float,
    w: Optional[float],
    z: float,
    z_max: Optional[float],
    z_count: int,
    output_dir: str,
):
    """Compute the up-front speed c* by closed form and by shooting, plus the jump table."""
    u_rest = fixed_points(params).u_rest
    slice_ = solve_cubic(u_rest if w is None else w, z, params)
    closed = front_speed_closed_form(slice_, Direction.UP)
    try:
        shot = shoot_front_speed(slice_, Direction.UP)
    except ShootingDiverged as e:
        raise LemmaConditionFailed("front_speed_exists", str(e))

    summary = {
        "params": UnfoldingParamsSchema().dump(params),
        "u_shift": u_shift,
        "slice": {"w": slice_.w, "z": slice_.z, "roots": list(slice_.roots)},
        "c_star_closed_form": closed,
        "c_star_shooting": shot,
        "speed_difference": abs(closed - shot),
    }

    directory = command_dir(output_dir, "shoot")
    artifacts = []
    if params.gamma == 0:
        d_alpha = delta_alpha_star(params, u_rest)
        top = z_max if z_max is not None else 1.5 * max(d_alpha, 0.0)
        table = jump_table(params, u_rest, np.linspace(0.0, top, z_count))
        table_path = os.path.join(directory, "jump_table.csv")
        table.to_csv(table_path, index=False, float_format="%.17g")
        artifacts.append(table_path)
        click.echo(table.to_string(index=False))
        summary.update(
            delta_alpha_star=d_alpha,
            c1d_margins=[{"z": zi, "margin": m} for zi, m in c1d_margins(params, u_rest)],
        )
    else:
        logger.info("jump table skipped: its closed forms need gamma == 0")

    echo_json(summary)
    artifacts.append(write_json(summary, os.path.join(directory, "shoot.json")))
    write_manifest("shoot", Command.SHOOT, directory, artifacts)

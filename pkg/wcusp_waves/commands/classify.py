import os

import click

from ..config.logging import get_logger
from ..core.unfolding import (
    DiagramKind,
    classify_diagram,
    find_transcritical,
    fixed_points,
    hausdorff_gaps,
)
from ..models import Command, UnfoldingParams, UnfoldingParamsSchema
from ..shared.errors import DomainError, WrongRootCount
from .utils import (
    command_dir,
    echo_json,
    output_dir_option,
    params_options,
    write_json,
    write_manifest,
)

logger = get_logger(__name__)


def classification_summary(params: UnfoldingParams, u_shift: float = 0.0) -> dict:
    """Diagram class, folds, rest-state flags and the root-gap ratio at `params`."""
    diagram = classify_diagram(params)
    fps = fixed_points(params)
    try:
        gaps = hausdorff_gaps(params, fps.u_rest)._asdict()
    except WrongRootCount as e:
        logger.info(f"no root-gap ratio: {e}")
        gaps = None
    try:
        alpha_t = find_transcritical(params.beta)
    except DomainError:
        alpha_t = None

    return {
        "params": UnfoldingParamsSchema().dump(params),
        "u_shift": u_shift,
        "diagram": diagram.class_id.value,
        "degenerate": diagram.class_id is DiagramKind.TRANSCRITICAL_DEGENERATE,
        "fold_w_values": list(diagram.fold_w_values),
        "fixed_points": {
            "roots": list(fps.roots),
            "classification": list(fps.classification),
            "flags": fps.flags._asdict(),
            "passed": fps.flags.passed,
        },
        "gaps": gaps,
        "transcritical_alpha": alpha_t,
    }


@click.command("classify")
@params_options
@output_dir_option
def classify(params: UnfoldingParams, u_shift: float, output_dir: str):
    """Classify the bifurcation diagram of the slice family at given parameters."""
    summary = classification_summary(params, u_shift)
    echo_json(summary)

    directory = command_dir(output_dir, "classify")
    path = write_json(summary, os.path.join(directory, "classification.json"))
    write_manifest("classify", Command.CLASSIFY, directory, [path])

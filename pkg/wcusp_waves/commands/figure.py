import os
from typing import Optional

import click

from ..config.logging import get_logger
from ..figures import (
    FIGURE_IDS,
    check_pitchfork_goldens,
    list_figures,
    load_figure,
    panel_config,
)
from ..models import Command, FigureConfigListSchema, PatternReportSchema
from ..shared.errors import PatternMismatch
from .simulate import describe, run_and_report
from .utils import command_dir, echo_json, output_dir_option, write_json, write_manifest

logger = get_logger(__name__)


@click.command("figure")
@click.argument("figure_id", type=click.Choice(FIGURE_IDS), required=False)
@click.option("--list", "list_", is_flag=True, help="Print the frozen figure setups and exit.")
@click.option("--panel", default=None, help="Run a single panel.")
@click.option(
    "--ci/--full",
    "ci_mesh",
    default=None,
    help="Use the reduced CI mesh or the published one (default: WCUSP_CI_MESH).",
)
@output_dir_option
def figure(
    figure_id: Optional[str],
    list_: bool,
    panel: Optional[str],
    ci_mesh: Optional[bool],
    output_dir: str,
):
    """Reproduce FIGURE_ID and check every panel against its expected pattern."""
    if list_:
        figures = list_figures()
        listing = {"_items": figures, "_meta": {"total": len(figures)}}
        echo_json(FigureConfigListSchema().dump(listing))
        return
    if figure_id is None:
        raise click.UsageError("give a figure id or --list")

    goldens = check_pitchfork_goldens()
    fig = load_figure(figure_id)
    panels = [item for item in fig.panels if panel is None or item.name == panel]
    if not panels:
        raise click.BadParameter(f"{figure_id} has no panel {panel!r}", param_hint="--panel")

    directory = command_dir(output_dir, os.path.join("figure", figure_id))
    artifacts, summary, mismatches = [], {"pitchfork_goldens": goldens, "panels": {}}, []
    for fig_panel in panels:
        config = panel_config(fig, fig_panel, ci_mesh=ci_mesh)
        report, paths = run_and_report(config, os.path.join(directory, fig_panel.name))
        artifacts.extend(paths)
        matched = fig_panel.expected_kind is None or report.kind is fig_panel.expected_kind
        summary["panels"][fig_panel.name] = {
            "expected_kind": fig_panel.expected_kind.value if fig_panel.expected_kind else None,
            "matched": matched,
            "report": PatternReportSchema().dump(report),
        }
        click.echo(f"{figure_id}/{fig_panel.name}: {describe(report)}")
        if not matched:
            expected = fig_panel.expected_kind.value
            mismatches.append(f"{fig_panel.name}: expected {expected}, got {report.kind.value}")

    artifacts.append(write_json(summary, os.path.join(directory, "figure.json")))
    write_manifest(figure_id, Command.FIGURE, directory, artifacts)
    if mismatches:
        raise PatternMismatch("; ".join(mismatches))

import json
import os
from typing import Dict, List, Optional, Tuple

import click

from ..config.logging import get_logger
from ..figures import load_figure, panel_config
from ..models import Command, PatternReport, PatternReportSchema, SimConfig, SimConfigSchema
from ..pde import classify_pattern, export_csv, modulated_config, simulate as run_simulation
from ..pde import write_pgm, write_record
from .utils import command_dir, output_dir_option, write_json, write_manifest

logger = get_logger(__name__)

REPORT_FILE = "report.json"


def run_and_report(
    config: SimConfig, directory: str, csv: bool = False, strict: bool = False
) -> Tuple[PatternReport, List[str]]:
    """Simulate, classify and write the record, heatmap and report into `directory`."""
    record = run_simulation(config)
    artifacts = write_record(record, directory)
    artifacts.append(write_pgm(record, os.path.join(directory, "u.pgm")))
    if csv:
        artifacts.append(export_csv(record, os.path.join(directory, "record.csv")))
    report = classify_pattern(record, strict=strict)
    artifacts.append(
        write_json(PatternReportSchema().dump(report), os.path.join(directory, REPORT_FILE))
    )
    return report, artifacts


def load_config(path: str) -> SimConfig:
    with open(path) as f:
        return SimConfigSchema().load(json.load(f))


def figure_panel_config(figure_id: str, panel_name: Optional[str]) -> Tuple[str, SimConfig]:
    figure = load_figure(figure_id)
    panels = {panel.name: panel for panel in figure.panels}
    name = panel_name or figure.panels[0].name
    if name not in panels:
        raise click.BadParameter(f"{figure_id} has no panel {name!r}", param_hint="--panel")
    return f"{figure_id}-{name}", panel_config(figure, panels[name])


def describe(report: PatternReport) -> str:
    text = report.kind.value
    if report.wave_speed is not None:
        text += f" c={report.wave_speed:.6g}"
    if report.spikes_per_burst is not None:
        text += f" spikes={report.spikes_per_burst}"
    return text


@click.command("simulate")
@click.argument("config", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--figure", "figure_id", default=None, help="Simulate a figure panel instead.")
@click.option("--panel", default=None, help="Panel of --figure (default: the first).")
@click.option("--csv", is_flag=True, help="Also export a long-format CSV of the record.")
@click.option("--strict", is_flag=True, help="Fail when the pattern is undecidable.")
@output_dir_option
def simulate(
    config: Optional[str],
    figure_id: Optional[str],
    panel: Optional[str],
    csv: bool,
    strict: bool,
    output_dir: str,
):
    """Integrate the PDE for CONFIG (JSON) and classify the resulting pattern."""
    if (config is None) == (figure_id is None):
        raise click.UsageError("give either CONFIG or --figure")
    if config is not None:
        name, sim_config = os.path.splitext(os.path.basename(config))[0], load_config(config)
    else:
        name, sim_config = figure_panel_config(figure_id, panel)

    directory = command_dir(output_dir, os.path.join("simulate", name))
    report, artifacts = run_and_report(sim_config, directory, csv=csv, strict=strict)
    write_manifest(name, Command.SIMULATE, directory, artifacts, [config] if config else [])
    click.echo(f"{name}: {describe(report)}")


@click.command("modulate")
@click.argument("config", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--lambda", "lam", type=float, default=None, help="Override λ.")
@click.option("--alpha", type=float, default=None, help="Override α.")
@click.option("--beta", type=float, default=None, help="Override β.")
@click.option(
    "--figure",
    "figure_id",
    type=click.Choice(["fig6", "fig7"]),
    default=None,
    help="Run a figure's base and modulated panels instead.",
)
@output_dir_option
def modulate(
    config: Optional[str],
    lam: Optional[float],
    alpha: Optional[float],
    beta: Optional[float],
    figure_id: Optional[str],
    output_dir: str,
):
    """Run a configuration before and after changing (λ, α, β)."""
    if (config is None) == (figure_id is None):
        raise click.UsageError("give either CONFIG or --figure")
    if figure_id is not None:
        figure = load_figure(figure_id)
        base_panel, modulated_panel = figure.panels[:2]
        name = figure_id
        runs = {
            "base": panel_config(figure, base_panel),
            "modulated": panel_config(figure, modulated_panel),
        }
    else:
        overrides: Dict[str, float] = {
            k: v for k, v in (("lam", lam), ("alpha", alpha), ("beta", beta)) if v is not None
        }
        if not overrides:
            raise click.UsageError("give at least one of --lambda, --alpha, --beta")
        name = os.path.splitext(os.path.basename(config))[0]
        base = load_config(config)
        runs = {"base": base, "modulated": modulated_config(base, overrides)}

    directory = command_dir(output_dir, os.path.join("modulate", name))
    artifacts, summary = [], {}
    for label, sim_config in runs.items():
        report, paths = run_and_report(sim_config, os.path.join(directory, label))
        artifacts.extend(paths)
        summary[label] = PatternReportSchema().dump(report)
        click.echo(f"{label}: {describe(report)}")

    artifacts.append(write_json(summary, os.path.join(directory, "modulation.json")))
    write_manifest(name, Command.MODULATE, directory, artifacts, [config] if config else [])

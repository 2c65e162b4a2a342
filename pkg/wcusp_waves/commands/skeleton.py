import json
import os

import click

from ..config.logging import get_logger
from ..config.settings import MANIFOLD_TOL, SEAM_TOL
from ..core.unfolding import DiagramKind, classify_diagram, fixed_points
from ..figures import load_figure, panel_config
from ..models import Command, SkeletonRequestSchema, UnfoldingParams
from ..shared.errors import BranchGap, LemmaConditionFailed
from ..skeleton import (
    SingularOrbit,
    build_front_wavetrain_skeleton,
    build_standing_burst_skeleton,
    build_standing_pulse_skeleton,
    build_traveling_burst_skeleton,
    c1d_margins,
    check_lemma_B2,
    lemma_a1_report,
    write_orbit,
)
from .utils import command_dir, output_dir_option, to_lemma_frame, write_manifest

logger = get_logger(__name__)


def request_params(request: dict) -> UnfoldingParams:
    """Lemma-frame parameters of a loaded skeleton request."""
    if request["figure"] is not None:
        figure = load_figure(request["figure"])
        panels = {panel.name: panel for panel in figure.panels}
        name = request["panel"] or figure.panels[0].name
        if name not in panels:
            raise click.BadParameter(f"{figure.id} has no panel {name!r}", param_hint="panel")
        params = panel_config(figure, panels[name]).params
        return to_lemma_frame(params, "pde")[0]
    return to_lemma_frame(request["params"], request["frame"])[0]


def traveling_checks(p: UnfoldingParams) -> dict:
    """Evaluate every condition of the traveling construction; raise on the first failure."""
    diagram = classify_diagram(p)
    if diagram.class_id is not DiagramKind.MIRRORED_HYSTERESIS:
        raise LemmaConditionFailed("mirrored_hysteresis", f"diagram is {diagram.class_id.value}")
    for name, ok in fixed_points(p).flags._asdict().items():
        if not ok:
            raise LemmaConditionFailed(name)
    report = lemma_a1_report(p)
    gaps = report.gaps
    if not (gaps.L2 < gaps.L1 and 0 < gaps.a < 0.5):
        raise LemmaConditionFailed("root_gap_ordering", f"L1={gaps.L1!r}, L2={gaps.L2!r}")
    margins = c1d_margins(p, report.fixed_points.u_rest)
    for z, margin in margins:
        if margin <= 0:
            raise LemmaConditionFailed("ultraslow_drift_margin", f"margin {margin!r} at z={z!r}")
    return {
        "diagram": report.diagram.class_id.value,
        "fixed_point_flags": report.fixed_points.flags._asdict(),
        "gaps": gaps._asdict(),
        "c_star": report.c_star,
        "delta_alpha_star": report.delta_alpha_star,
        "c1d_margins": [{"z": z, "margin": m} for z, m in margins],
        "passed": report.passed,
    }


def standing_checks(p: UnfoldingParams) -> dict:
    result = check_lemma_B2(p)
    if not result.passed:
        raise LemmaConditionFailed(
            "standing_integrals", f"(a)={result.ineq_a!r}, (b)={result.ineq_b!r}"
        )
    return result._asdict()


def verify_orbit(orbit: SingularOrbit, p: UnfoldingParams) -> dict:
    seam_gap = orbit.max_seam_gap()
    residual = orbit.max_manifold_residual(p)
    if seam_gap > SEAM_TOL:
        raise BranchGap(f"consecutive segments are {seam_gap!r} apart")
    if residual > MANIFOLD_TOL:
        raise BranchGap(f"slow arcs leave the critical manifold by {residual!r}")
    return {"seam_gap": seam_gap, "manifold_residual": residual}


def build_skeleton(request: dict):
    """Build the requested orbit; returns (orbit, checks)."""
    p = request_params(request)
    kind = request["kind"]
    if kind in ("traveling", "wavetrain"):
        checks = traveling_checks(p)
        if kind == "traveling":
            orbit = build_traveling_burst_skeleton(
                p, request["eps_us_tilde"], c_star=checks["c_star"]
            )
        else:
            orbit = build_front_wavetrain_skeleton(p)
    else:
        checks = standing_checks(p)
        if kind == "standing":
            orbit = build_standing_burst_skeleton(
                p, request["delta_ul_tilde"], z_bar=request["z_bar"]
            )
        else:
            orbit = build_standing_pulse_skeleton(p)
    checks.update(verify_orbit(orbit, p))
    checks["params"] = p._asdict()
    logger.info(f"{kind} skeleton: {len(orbit.segments)} segments, {orbit.spike_count} spikes")
    return orbit, checks


@click.command("skeleton")
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@output_dir_option
def skeleton(config: str, output_dir: str):
    """Build and verify the singular skeleton described by CONFIG (JSON)."""
    with open(config) as f:
        request = SkeletonRequestSchema().load(json.load(f))
    orbit, checks = build_skeleton(request)

    name = os.path.splitext(os.path.basename(config))[0]
    directory = command_dir(output_dir, os.path.join("skeleton", name))
    paths = write_orbit(orbit, directory, checks)
    write_manifest(name, Command.SKELETON, directory, paths, [config])
    click.echo(f"{request['kind']} skeleton: spike_count={orbit.spike_count}")

"""Numerically checkable conditions behind the front and burst constructions."""

__all__ = [
    "LemmaA1Report",
    "LemmaB2Result",
    "lemma_a1_report",
    "check_lemma_B2",
    "check_lemma_C1d",
    "c1d_margins",
    "branch_value",
]

from typing import List, NamedTuple, Tuple

import numpy as np
from scipy.integrate import quad

from ..config.logging import get_logger
from ..config.settings import C1D_SAMPLES, QUAD_EPSABS, QUAD_LIMIT
from ..core.unfolding import (
    Branch,
    DiagramClass,
    DiagramKind,
    FixedPointSet,
    HausdorffGaps,
    classify_diagram,
    fixed_points,
    hausdorff_gaps,
    nullcline_fixed_points,
    solve_cubic,
)
from ..models.params import UnfoldingParams
from ..shared.errors import BranchGap, LemmaConditionFailed
from .fronts import delta_alpha_star, find_cstar, jump_curves, standing_front_w

logger = get_logger(__name__)


class LemmaA1Report(NamedTuple):
    diagram: DiagramClass
    fixed_points: FixedPointSet
    gaps: HausdorffGaps
    c_star: float
    delta_alpha_star: float

    @property
    def passed(self) -> bool:
        return (
            self.diagram.class_id is DiagramKind.MIRRORED_HYSTERESIS
            and self.fixed_points.flags.passed
            and self.gaps.L2 < self.gaps.L1
            and 0 < self.gaps.a < 0.5
        )


class LemmaB2Result(NamedTuple):
    ineq_a: float
    ineq_b: float
    passed: bool


def branch_value(p: UnfoldingParams, w: float, z: float, branch: Branch) -> float:
    """u on the lower or upper branch of the slice at (w, z)."""
    roots = solve_cubic(w, z, p).roots
    if branch.is_lower:
        return roots[0]
    if len(roots) < 2:
        raise BranchGap(f"no {branch.value} branch at w={w!r}, z={z!r}")
    return roots[-1]


def _integrate(f, lo: float, hi: float) -> float:
    if lo == hi:
        return 0.0
    value, _ = quad(f, lo, hi, epsabs=QUAD_EPSABS, limit=QUAD_LIMIT)
    return value


def lemma_a1_report(p: UnfoldingParams) -> LemmaA1Report:
    """
    Everything that licenses the traveling front from rest into the wave
    train: the diagram class, the rest-state inequalities, the root gaps at
    w = u_rest and the front speed c*.
    """
    diagram = classify_diagram(p)
    fps = fixed_points(p)
    u_rest = fps.u_rest
    gaps = hausdorff_gaps(p, u_rest)
    return LemmaA1Report(
        diagram=diagram,
        fixed_points=fps,
        gaps=gaps,
        c_star=find_cstar(p),
        delta_alpha_star=delta_alpha_star(p, u_rest),
    )


def check_lemma_B2(p: UnfoldingParams) -> LemmaB2Result:
    """
    Evaluate the two standing-pulse integral inequalities

        (a) ∫_{w_rest}^{w_h1} (u_down − s) ds + ∫_{w_h1}^{w_fold} (u_up − s) ds > 0
        (b) ∫_{w_rest}^{w_h1} (u_down − s) ds + ∫_{w_h1}^{w_h2}   (u_up − s) ds < 0

    where w_fold is the right fold of the class-3 diagram and w_rest the
    unique homogeneous fixed point.
    """
    diagram = classify_diagram(p)
    if diagram.class_id is not DiagramKind.CLASS3:
        raise LemmaConditionFailed(
            "class3_diagram", f"diagram is {diagram.class_id.value}"
        )
    rests = nullcline_fixed_points(p)
    if len(rests) != 1:
        raise LemmaConditionFailed(
            "unique_fixed_point", f"{len(rests)} homogeneous fixed points"
        )
    w_rest = rests[0]
    w_h1, w_h2 = standing_front_w(p)
    w_fold = diagram.fold_w_values[-1]

    lower = _integrate(lambda s: branch_value(p, s, 0.0, Branch.DOWN) - s, w_rest, w_h1)
    upper = lambda s: branch_value(p, s, 0.0, Branch.UP) - s
    ineq_a = lower + _integrate(upper, w_h1, w_fold)
    ineq_b = lower + _integrate(upper, w_h1, w_h2)
    logger.debug(f"standing integrals: w_rest={w_rest!r} (a)={ineq_a!r} (b)={ineq_b!r}")
    return LemmaB2Result(ineq_a=ineq_a, ineq_b=ineq_b, passed=ineq_a > 0 and ineq_b < 0)


def check_lemma_C1d(p: UnfoldingParams, u_rest: float, z: float) -> float:
    """
    Drift margin of the ultraslow variable across one burst cycle at z:
    ∫ (u_down − z_abs) dw + ∫ (u_up − z_abs) dw between the up- and down-jump
    loci, z_abs = u_rest + z. Returns the smaller of the two lobes.
    """
    curves = jump_curves(p, u_rest, z)
    z_abs = u_rest + z

    def lobe(lo: float, hi: float) -> float:
        down = _integrate(lambda w: branch_value(p, w, z, Branch.DOWN) - z_abs, lo, hi)
        up = _integrate(lambda w: branch_value(p, w, z, Branch.UP) - z_abs, lo, hi)
        return down + up

    plus = lobe(curves.w_up_plus, curves.w_down_plus)
    minus = lobe(curves.w_down_minus, curves.w_up_minus)
    return min(plus, minus)


def c1d_margins(
    p: UnfoldingParams, u_rest: float, n: int = C1D_SAMPLES
) -> List[Tuple[float, float]]:
    """(z, margin) pairs for `n` evenly spaced z in [0, Δα*)."""
    z_max = delta_alpha_star(p, u_rest)
    if z_max <= 0:
        return []
    return [
        (float(z), check_lemma_C1d(p, u_rest, float(z)))
        for z in np.linspace(0.0, z_max, n, endpoint=False)
    ]

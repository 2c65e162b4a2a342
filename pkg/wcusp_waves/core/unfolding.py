"""
Evaluation and root geometry of the winged-cusp unfolding

    g(u, λ, α, β, γ) = −u³ − λ² − α + βu + γuλ,

the homogeneous steady-state equation built on it, and locators for the
organizing singularities (folds, the transcritical point, the pitchfork).

A slice of the critical manifold at slow value w and ultraslow value z is the
monic cubic u³ − p·u + q = 0 with p = β + γΛ, q = Λ² + A, Λ = λ + w and
A = α + z.
"""

__all__ = [
    "Branch",
    "DiagramKind",
    "CriticalSlice",
    "DiagramClass",
    "FixedPointFlags",
    "FixedPointSet",
    "PitchforkPoint",
    "HausdorffGaps",
    "eval_gwcusp",
    "eval_ghy",
    "eval_F",
    "slice_coefficients",
    "cubic_roots",
    "solve_cubic",
    "find_pitchfork",
    "find_transcritical",
    "fold_w_values",
    "classify_diagram",
    "bistable_w_intervals",
    "label_slice",
    "fixed_points",
    "nullcline_fixed_points",
    "homogeneous_rest_roots",
    "rest_frame",
    "hausdorff_gaps",
]

import math
from enum import Enum as EnumBaseClass
from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..config.logging import get_logger
from ..config.settings import (
    FOLD_BISECT_TOL,
    NEWTON_MAX_ITER,
    PITCHFORK_BETA_STEP,
    PITCHFORK_RESIDUAL_TOL,
    POLISH_TOL,
    ROOT_MERGE_TOL,
)
from ..models.params import UnfoldingParams
from ..shared.errors import (
    DomainError,
    NoConvergence,
    NoStableRest,
    UnresolvedFold,
    WrongRootCount,
)

logger = get_logger(__name__)

# Relative slack on the cubic discriminant below which a slice is
# treated as having a (numerically) repeated root.
_DISCRIMINANT_SLACK = 1e-12
# np.roots resolves a double root of the fold quartic only to ~sqrt(eps).
_FOLD_CLUSTER_TOL = 1e-6
_TRIPLE_CONTACT_TOL = 1e-6


class Branch(EnumBaseClass):
    DOWN_MINUS = "down-"
    MID_MINUS = "mid-"
    UP = "up"
    MID_PLUS = "mid+"
    DOWN_PLUS = "down+"
    DOWN = "down"
    MID = "mid"

    @property
    def is_lower(self) -> bool:
        return self in (Branch.DOWN, Branch.DOWN_MINUS, Branch.DOWN_PLUS)

    @property
    def is_middle(self) -> bool:
        return self in (Branch.MID, Branch.MID_MINUS, Branch.MID_PLUS)


class DiagramKind(EnumBaseClass):
    MIRRORED_HYSTERESIS = "MirroredHysteresis"
    CLASS3 = "Class3"
    TRANSCRITICAL_DEGENERATE = "TranscriticalDegenerate"
    OTHER = "Other"


class CriticalSlice(NamedTuple):
    """Real roots of the slice cubic at (w, z), ascending, with branch labels."""

    w: float
    z: float
    roots: Tuple[float, ...]
    branch_labels: Tuple[Branch, ...]
    multiplicities: Tuple[int, ...]

    @property
    def fold(self) -> bool:
        return any(m > 1 for m in self.multiplicities)

    @property
    def bistable(self) -> bool:
        return len(self.roots) == 3

    def root_on(self, branch: Branch) -> float:
        for root, label in zip(self.roots, self.branch_labels):
            if label is branch:
                return root
        raise WrongRootCount(f"slice at w={self.w!r} has no {branch.value} root")


class DiagramClass(NamedTuple):
    class_id: DiagramKind
    fold_w_values: Tuple[float, ...]
    fold_count: int


class FixedPointFlags(NamedTuple):
    """The rest-state inequalities that license the mirrored-hysteresis fronts."""

    three_roots: bool
    # u³ − βu − α > −u³ + βu − α
    down_jump_exceeds_up: bool
    # −u³ + βu − α > 0
    up_jump_positive: bool
    # u³ − (β + 1)u + α > 0
    rest_bound: bool

    @property
    def passed(self) -> bool:
        return all(self)


class FixedPointSet(NamedTuple):
    roots: Tuple[float, ...]
    classification: Tuple[str, ...]
    flags: FixedPointFlags

    @property
    def u_rest(self) -> float:
        return self.roots[0]


class PitchforkPoint(NamedTuple):
    lam: float
    alpha: float
    gamma: float
    u: float


class HausdorffGaps(NamedTuple):
    L1: float
    L2: float
    a: float


### Pointwise evaluation ###
def eval_gwcusp(u, p: UnfoldingParams):
    return -(u**3) - p.lam**2 - p.alpha + p.beta * u + p.gamma * u * p.lam


def eval_ghy(u, lam, beta):
    return -(u**3) + lam + beta * u


def eval_F(u, p: UnfoldingParams):
    """
    The homogeneous resting-state function
        F(u) = −u³ − (λ+u)² + βu − γ(λ+u)u − α.
    Its γ-term enters with the opposite sign to g's, so F(u; γ) equals
    g(u, λ+u, α, β, −γ); the two coincide when γ = 0.
    """
    shifted = p.lam + u
    return -(u**3) - shifted**2 + p.beta * u - p.gamma * shifted * u - p.alpha


def slice_coefficients(p: UnfoldingParams, w, z=0.0):
    """Return (p_lin, q) so that the slice at (w, z) reads u³ − p_lin·u + q = 0."""
    Lam = p.lam + w
    return p.beta + p.gamma * Lam, Lam**2 + p.alpha + z


### Cubic roots ###
def _cubic_candidates(b, c, d) -> np.ndarray:
    """
    Closed-form roots of x³ + b x² + c x + d = 0, Newton-polished until the
    step falls below POLISH_TOL (relative) or stops lowering the residual.
    Returns an array of shape (..., 3), ascending, with NaN for complex roots.
    Repeated roots appear repeatedly.
    """
    b, c, d = np.broadcast_arrays(
        np.asarray(b, dtype=float),
        np.asarray(c, dtype=float),
        np.asarray(d, dtype=float),
    )
    shift = b / 3.0
    P = c - b * shift
    Q = 2.0 * shift**3 - c * shift + d
    half_q = Q / 2.0
    third_p = P / 3.0
    disc = half_q**2 + third_p**3
    scale = half_q**2 + np.abs(third_p) ** 3
    three_real = (P < 0) & (disc <= _DISCRIMINANT_SLACK * scale)

    roots = np.full(b.shape + (3,), np.nan)

    # Trigonometric branch
    with np.errstate(invalid="ignore", divide="ignore"):
        m = 2.0 * np.sqrt(np.where(three_real, -third_p, 1.0))
        cos_arg = np.where(three_real, 3.0 * Q / (P * m), 0.0)
    theta = np.arccos(np.clip(cos_arg, -1.0, 1.0)) / 3.0
    for k in range(3):
        t_k = m * np.cos(theta - 2.0 * np.pi * k / 3.0)
        roots[..., k] = np.where(three_real, t_k - shift, np.nan)

    # Cardano branch
    sqrt_disc = np.sqrt(np.maximum(disc, 0.0))
    t_single = np.cbrt(-half_q + sqrt_disc) + np.cbrt(-half_q - sqrt_disc)
    roots[..., 0] = np.where(three_real, roots[..., 0], t_single - shift)

    # Newton polish, kept only where it lowers the residual
    for _ in range(NEWTON_MAX_ITER):
        f = ((roots + b[..., None]) * roots + c[..., None]) * roots + d[..., None]
        df = (3.0 * roots + 2.0 * b[..., None]) * roots + c[..., None]
        with np.errstate(invalid="ignore", divide="ignore"):
            candidate = roots - f / df
        f_new = (
            (candidate + b[..., None]) * candidate + c[..., None]
        ) * candidate + d[..., None]
        better = np.isfinite(candidate) & (np.abs(f_new) < np.abs(f))
        step = np.where(better, np.abs(candidate - roots), 0.0)
        roots = np.where(better, candidate, roots)
        if not np.any(step > POLISH_TOL * (1.0 + np.abs(np.nan_to_num(roots)))):
            break

    return np.sort(roots, axis=-1)


def cubic_roots(b, c, d, merge_tol: float = ROOT_MERGE_TOL) -> np.ndarray:
    """
    Distinct real roots of x³ + b x² + c x + d = 0, vectorised over the
    coefficient arrays. The result has shape (..., 3): roots ascending,
    padded with NaN. Roots closer than `merge_tol` are reported once.
    """
    raw = _cubic_candidates(b, c, d)
    merged = raw.copy()
    anchor = raw[..., 0]
    for k in (1, 2):
        close = np.abs(raw[..., k] - anchor) < merge_tol
        merged[..., k] = np.where(close, np.nan, raw[..., k])
        anchor = np.where(close, anchor, raw[..., k])
    return np.sort(merged, axis=-1)


def _clustered_roots(b: float, c: float, d: float) -> Tuple[List[float], List[int]]:
    raw = [r for r in _cubic_candidates(b, c, d) if np.isfinite(r)]
    roots: List[float] = []
    mults: List[int] = []
    for r in raw:
        if roots and abs(r - roots[-1]) < ROOT_MERGE_TOL:
            mults[-1] += 1
        else:
            roots.append(float(r))
            mults.append(1)
    return roots, mults


def _default_labels(roots: List[float]) -> Tuple[Branch, ...]:
    if len(roots) == 3:
        return (Branch.DOWN, Branch.MID, Branch.UP)
    if len(roots) == 2:
        return (Branch.DOWN, Branch.UP)
    return (Branch.DOWN if roots[0] < 0 else Branch.UP,)


def solve_cubic(w: float, z: float, p: UnfoldingParams) -> CriticalSlice:
    """All real roots of g(u, λ+w, α+z, β, γ) = 0 in ascending order."""
    p_lin, q = slice_coefficients(p, w, z)
    roots, mults = _clustered_roots(0.0, -p_lin, q)
    return CriticalSlice(
        w=w,
        z=z,
        roots=tuple(roots),
        branch_labels=_default_labels(roots),
        multiplicities=tuple(mults),
    )


### Organizing singularities ###
def _pitchfork_residual(x: np.ndarray, beta: float) -> np.ndarray:
    u, lam, alpha, gamma = x
    shifted = lam + u
    return np.array(
        [
            -(u**3) - shifted**2 + beta * u - gamma * shifted * u - alpha,
            -3 * u**2 - 2 * shifted + beta - gamma * (lam + 2 * u),
            -6 * u - 2 - 2 * gamma,
            -2 * shifted - gamma * u,
        ]
    )


def _pitchfork_jacobian(x: np.ndarray) -> np.ndarray:
    u, lam, _, gamma = x
    shifted = lam + u
    F_u = -3 * u**2 - 2 * shifted - gamma * (lam + 2 * u)
    return np.array(
        [
            [F_u, -2 * shifted - gamma * u, -1.0, -shifted * u],
            [-6 * u - 2 - 2 * gamma, -2 - gamma, 0.0, -(lam + 2 * u)],
            [-6.0, 0.0, 0.0, -2.0],
            [-2 - gamma, -2.0, 0.0, -u],
        ]
    )


def _damped_newton(x: np.ndarray, beta: float) -> np.ndarray:
    residual = _pitchfork_residual(x, beta)
    norm = np.linalg.norm(residual, np.inf)
    for iteration in range(NEWTON_MAX_ITER):
        if norm <= PITCHFORK_RESIDUAL_TOL:
            return x
        try:
            step = np.linalg.solve(_pitchfork_jacobian(x), -residual)
        except np.linalg.LinAlgError as e:
            raise NoConvergence(f"singular pitchfork Jacobian at beta={beta!r}") from e
        damping = 1.0
        while damping > 1e-4:
            trial = x + damping * step
            trial_residual = _pitchfork_residual(trial, beta)
            trial_norm = np.linalg.norm(trial_residual, np.inf)
            if trial_norm < norm or trial_norm <= PITCHFORK_RESIDUAL_TOL:
                break
            damping /= 2
        x, residual, norm = trial, trial_residual, trial_norm
        logger.debug(
            f"pitchfork newton beta={beta:.6f} iter={iteration} residual={norm:.3e}"
        )
    if norm <= PITCHFORK_RESIDUAL_TOL:
        return x
    raise NoConvergence(
        f"pitchfork Newton failed at beta={beta!r} (residual {norm:.3e})"
    )


def find_pitchfork(beta: float) -> PitchforkPoint:
    """
    Solve F = F_u = F_uu = F_λ = 0 for (u, λ, α, γ) at the given β by damped
    Newton, continued in β from the exact point
    (u, λ, α, γ) = (−1/3, 1/3, −2/27, 0) at β = 1/3.
    """
    seed_beta = 1.0 / 3.0
    x = np.array([-1.0 / 3.0, 1.0 / 3.0, -2.0 / 27.0, 0.0])
    n_steps = max(1, int(math.ceil(abs(beta - seed_beta) / PITCHFORK_BETA_STEP)))
    for b in np.linspace(seed_beta, beta, n_steps + 1)[1:]:
        x = _damped_newton(x, float(b))
    u, lam, alpha, gamma = (float(v) for v in x)
    return PitchforkPoint(lam=lam, alpha=alpha, gamma=gamma, u=u)


def find_transcritical(beta: float) -> float:
    """α̃ of the transcritical point of the slice family at λ̃ = 0."""
    if beta <= 0:
        raise DomainError(f"transcritical point needs beta > 0, got {beta!r}")
    return -2.0 * (beta / 3.0) ** 1.5


### Fold structure ###
def _fold_quartic(p: UnfoldingParams, z: float) -> np.ndarray:
    """Coefficients (in Λ) of the slice discriminant 4p³ − 27q²."""
    A = p.alpha + z
    beta, gamma = p.beta, p.gamma
    return np.array(
        [
            -27.0,
            4 * gamma**3,
            12 * beta * gamma**2 - 54 * A,
            12 * beta**2 * gamma,
            4 * beta**3 - 27 * A**2,
        ]
    )


def _fold_structure(p: UnfoldingParams, z: float) -> Tuple[List[float], List[float]]:
    """Simple and double roots (as Λ values) of the slice discriminant."""
    coeffs = _fold_quartic(p, z)
    raw = np.roots(coeffs)
    candidates = sorted(
        float(r.real)
        for r in raw
        if abs(r.imag) < _FOLD_CLUSTER_TOL * (1 + abs(r.real))
    )

    clusters: List[List[float]] = []
    for r in candidates:
        if clusters and abs(r - clusters[-1][-1]) < _FOLD_CLUSTER_TOL:
            clusters[-1].append(r)
        else:
            clusters.append([r])

    quartic = np.poly1d(coeffs)
    simple, double = [], []
    for cluster in clusters:
        centre = float(np.mean(cluster))
        if len(cluster) > 1:
            double.append(centre)
            continue
        h = _FOLD_CLUSTER_TOL * (1 + abs(centre))
        lo, hi = centre - h, centre + h
        if np.sign(quartic(lo)) == np.sign(quartic(hi)):
            double.append(centre)
            continue
        simple.append(brentq(quartic, lo, hi, xtol=FOLD_BISECT_TOL))
    return simple, double


def _check_contact_order(p: UnfoldingParams, Lams: List[float]):
    for Lam in Lams:
        if abs(p.beta + p.gamma * Lam) < _TRIPLE_CONTACT_TOL:
            raise UnresolvedFold(
                f"fold at w={Lam - p.lam!r} is a higher-order contact (cusp point)"
            )


def fold_w_values(p: UnfoldingParams, z: float = 0.0) -> Tuple[float, ...]:
    """w-coordinates of the simple folds of the slice family, ascending."""
    simple, _ = _fold_structure(p, z)
    _check_contact_order(p, simple)
    return tuple(Lam - p.lam for Lam in simple)


def classify_diagram(
    p: UnfoldingParams,
    z: float = 0.0,
    w_range: Optional[Tuple[float, float]] = None,
) -> DiagramClass:
    """
    Classify the bifurcation diagram of the slice family at ultraslow value z.

    Folds are the real roots of the slice discriminant viewed as a quartic in
    Λ = λ + w. Four simple folds bound two disjoint three-root lobes (mirrored
    hysteresis). Two simple folds at both of which the middle and upper roots
    merge give the class-3 arrangement. A double root of the discriminant means
    two folds coalesce: the parameters lie on the transition variety.
    """
    simple, double = _fold_structure(p, z)
    _check_contact_order(p, simple + double)

    def in_range(Lam: float) -> bool:
        if w_range is None:
            return True
        return w_range[0] <= Lam - p.lam <= w_range[1]

    simple = [Lam for Lam in simple if in_range(Lam)]
    double = [Lam for Lam in double if in_range(Lam)]
    folds = sorted(simple + double)
    fold_ws = tuple(Lam - p.lam for Lam in folds)

    if double:
        kind = DiagramKind.TRANSCRITICAL_DEGENERATE
    elif len(simple) == 4:
        kind = DiagramKind.MIRRORED_HYSTERESIS
    elif len(simple) == 2 and all(Lam**2 + p.alpha + z > 0 for Lam in simple):
        # q > 0 at a fold puts the double root 3q/(2p) above the simple one
        kind = DiagramKind.CLASS3
    else:
        kind = DiagramKind.OTHER

    logger.debug(f"classify_diagram: {kind.value} with folds at {fold_ws}")
    return DiagramClass(class_id=kind, fold_w_values=fold_ws, fold_count=len(fold_ws))


def bistable_w_intervals(p: UnfoldingParams, z: float = 0.0) -> List[Tuple[float, float]]:
    """The w-intervals on which the slice has three distinct roots."""
    simple, double = _fold_structure(p, z)
    Lams = sorted(simple + double)
    quartic = np.poly1d(_fold_quartic(p, z))
    intervals = []
    for lo, hi in zip(Lams[:-1], Lams[1:]):
        if quartic(0.5 * (lo + hi)) > 0:
            intervals.append((lo - p.lam, hi - p.lam))
    return intervals


def label_slice(slice_: CriticalSlice, diagram: DiagramClass) -> CriticalSlice:
    """
    Attach branch labels to a slice given the diagram it belongs to. In the
    mirrored-hysteresis regime the left lobe carries (down−, mid−, up) and the
    right lobe (down+, mid+, up); outside the lobes a lone root is down− to the
    left, up between the lobes and down+ to the right.
    """
    roots = list(slice_.roots)
    if diagram.class_id is not DiagramKind.MIRRORED_HYSTERESIS:
        return slice_._replace(branch_labels=_default_labels(roots))

    f1, f2, f3, f4 = diagram.fold_w_values
    w = slice_.w
    left_lobe = w <= 0.5 * (f2 + f3)
    if len(roots) == 3:
        labels = (
            (Branch.DOWN_MINUS, Branch.MID_MINUS, Branch.UP)
            if left_lobe
            else (Branch.DOWN_PLUS, Branch.MID_PLUS, Branch.UP)
        )
    elif len(roots) == 2:
        labels = (Branch.DOWN_MINUS if left_lobe else Branch.DOWN_PLUS, Branch.UP)
    elif w < f1:
        labels = (Branch.DOWN_MINUS,)
    elif w > f4:
        labels = (Branch.DOWN_PLUS,)
    else:
        labels = (Branch.UP,)
    return slice_._replace(branch_labels=labels)


### Fixed points ###
_FIXED_POINT_ROLES = {
    1: ("rest",),
    2: ("rest", "right"),
    3: ("rest", "middle", "right"),
}


def fixed_points(p: UnfoldingParams, z_offset: float = 0.0) -> FixedPointSet:
    """
    Real roots of F(u, λ, α + z_offset, β, γ) = 0, ascending, together with
    the rest-state inequality flags evaluated at the lowest root.
    """
    alpha = p.alpha + z_offset
    b = 1.0 + p.gamma
    c = 2.0 * p.lam - p.beta + p.gamma * p.lam
    d = p.lam**2 + alpha
    roots, _ = _clustered_roots(b, c, d)

    u = roots[0]
    down_gap = u**3 - p.beta * u - alpha
    up_gap = -(u**3) + p.beta * u - alpha
    flags = FixedPointFlags(
        three_roots=len(roots) == 3,
        down_jump_exceeds_up=bool(down_gap > up_gap),
        up_jump_positive=bool(up_gap > 0),
        rest_bound=bool(u**3 - (p.beta + 1) * u + alpha > 0),
    )
    return FixedPointSet(
        roots=tuple(roots), classification=_FIXED_POINT_ROLES[len(roots)], flags=flags
    )


def nullcline_fixed_points(p: UnfoldingParams, z_offset: float = 0.0) -> Tuple[float, ...]:
    """Roots of g(u, λ+u, α+z_offset, β, γ) = 0: fast-slow equilibria at frozen z."""
    b = 1.0 - p.gamma
    c = 2.0 * p.lam - p.beta - p.gamma * p.lam
    d = p.lam**2 + p.alpha + z_offset
    roots, _ = _clustered_roots(b, c, d)
    return tuple(roots)


def homogeneous_rest_roots(p: UnfoldingParams) -> Tuple[float, ...]:
    """Roots of g(u, λ+u, α+u, β, γ) = 0: the homogeneous states with w = z = u."""
    b = 1.0 - p.gamma
    c = 2.0 * p.lam + 1.0 - p.beta - p.gamma * p.lam
    d = p.lam**2 + p.alpha
    roots, _ = _clustered_roots(b, c, d)
    return tuple(roots)


def rest_frame(p: UnfoldingParams) -> Tuple[UnfoldingParams, float]:
    """
    Locate the lowest homogeneous rest state whose fast layer is attracting
    and return (p̃, u_rest) where p̃ carries α̃ = α + u_rest. In that frame the
    ultraslow coordinate vanishes at rest.
    """
    for u in homogeneous_rest_roots(p):
        g_u = -3 * u**2 + p.beta + p.gamma * (p.lam + u)
        if g_u < 0:
            return p.shifted(u), u
    raise NoStableRest(f"no homogeneous rest state with an attracting layer for {p}")


def hausdorff_gaps(p: UnfoldingParams, w: float) -> HausdorffGaps:
    """
    Root-distance gaps of the three-root slice at w: L2 between the lower and
    middle roots, L1 between the upper and middle roots, and their ratio
    a = L2 / (L1 + L2) in (0, 1).
    """
    slice_ = solve_cubic(w, 0.0, p)
    if len(slice_.roots) != 3:
        raise WrongRootCount(
            f"slice at w={w!r} has {len(slice_.roots)} distinct roots, expected 3"
        )
    down, mid, up = slice_.roots
    L2 = mid - down
    L1 = up - mid
    return HausdorffGaps(L1=L1, L2=L2, a=L2 / (up - down))

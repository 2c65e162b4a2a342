"""
Singular orbits of the reduced wave equations: the traveling and standing
bursts of the three-scale problem and the two-scale front/pulse skeletons
they are built from. Parameters are in the lemma frame (z = 0 at rest).
"""

__all__ = [
    "build_traveling_burst_skeleton",
    "build_standing_burst_skeleton",
    "build_front_wavetrain_skeleton",
    "build_standing_pulse_skeleton",
    "spike_adding_sweep",
    "is_non_increasing",
]

import math
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from ..config.logging import get_logger
from ..config.settings import (
    BURST_MAX_JUMPS,
    GRAZING_TOL,
    REST_PROXIMITY,
    SKELETON_ESCAPE,
    SKELETON_OFFSET,
    SPIKE_SWEEP_EPS_RANGE,
    SPIKE_SWEEP_POINTS,
    STANDING_DEPARTURE_SAMPLES,
    STANDING_LOCUS_SAMPLES,
)
from ..core.unfolding import (
    Branch,
    DiagramKind,
    classify_diagram,
    fixed_points,
    nullcline_fixed_points,
    slice_coefficients,
    solve_cubic,
)
from ..models.params import Direction, UnfoldingParams
from ..shared.errors import (
    FoldCollision,
    LemmaConditionFailed,
    NoBistableRange,
    NoConvergence,
    NonGenericGrazing,
    NoSymmetricCrossing,
    RadicandNegative,
    WcuspError,
)
from .fronts import (
    HeteroclinicJump,
    _require_symmetric,
    delta_alpha_star,
    find_cstar,
    make_jump,
    standing_front_w,
)
from .orbit import (
    Segment,
    SingularOrbit,
    arc_segment,
    jump_segment,
    reflect_segments,
)
from .reduced import Arc, FlowConstants, ReducedKind, ReducedState, StopEvent, reduced_flow

logger = get_logger(__name__)


### Helpers ###
def _q(p: UnfoldingParams, s: ReducedState) -> float:
    return slice_coefficients(p, s.w, s.z)[1]


def _locus_w(p: UnfoldingParams, q_target: float, z: float, side: float) -> float:
    """w on the jump locus q(w, z) = q_target, on the side sign(Λ) = side (γ = 0)."""
    radicand = q_target - p.alpha - z
    if radicand < 0:
        raise RadicandNegative(f"no jump locus at z={z!r} (radicand {radicand!r})")
    return math.copysign(math.sqrt(radicand), side) - p.lam


def _snap(
    arc: Arc, p: UnfoldingParams, w: float, branch: Branch
) -> Tuple[np.ndarray, ReducedState]:
    """Move the arc's end onto the locus value `w`, keeping the other slow variables."""
    end = arc.end._replace(w=w)
    roots = solve_cubic(w, end.z, p).roots
    u = roots[0] if branch.is_lower else roots[-1]
    samples = arc.samples.copy()
    samples[-1] = (u, 0.0, w, end.v_w, end.z, end.v_z)
    return samples, end


def _jump_at(p: UnfoldingParams, end: ReducedState, direction: Direction) -> HeteroclinicJump:
    return make_jump(solve_cubic(end.w, end.z, p), direction)


def _lower_slope(p: UnfoldingParams, w: float, z: float) -> float:
    """du/dw along the lower branch of the slice family at (w, z)."""
    u = solve_cubic(w, z, p).roots[0]
    p_lin, _ = slice_coefficients(p, w, z)
    g_u = -3 * u**2 + p_lin
    g_lam = -2 * (p.lam + w) + p.gamma * u
    return -g_lam / g_u


def _mirrored_preconditions(p: UnfoldingParams, c_star: Optional[float]) -> Tuple[float, float]:
    _require_symmetric(p)
    diagram = classify_diagram(p)
    if diagram.class_id is not DiagramKind.MIRRORED_HYSTERESIS:
        raise LemmaConditionFailed(
            "mirrored_hysteresis", f"diagram is {diagram.class_id.value}"
        )
    fps = fixed_points(p)
    for name, ok in fps.flags._asdict().items():
        if not ok:
            raise LemmaConditionFailed(name, f"fails at u_rest={fps.u_rest!r}")
    if c_star is None:
        c_star = find_cstar(p)
    if c_star <= 0:
        raise LemmaConditionFailed("positive_front_speed", f"c*={c_star!r}")
    return fps.u_rest, c_star


### Traveling skeletons ###
def build_traveling_burst_skeleton(
    p: UnfoldingParams, eps_us_tilde: float, c_star: Optional[float] = None
) -> SingularOrbit:
    """
    Singular homoclinic orbit of the traveling burst. After the initial
    up-jump at rest the orbit alternates between upper-branch arcs, down-jumps
    at the H_down locus, lower-branch arcs and up-jumps at the H_up locus while
    the ultraslow drift raises z. Once z exceeds Δα* the lower arc reaches the
    axis Λ = 0 before the up locus and relaxes to rest.

    `c_star` may be passed in to skip the front-speed computation when the
    same parameters are swept in ε̃_us.
    """
    u_rest, c_star = _mirrored_preconditions(p, c_star)
    da_star = delta_alpha_star(p, u_rest)
    q_up = -(u_rest**3) + p.beta * u_rest
    q_down = -q_up
    constants = FlowConstants(c=c_star, eps=eps_us_tilde, u_rest=u_rest)

    down_event = StopEvent("down", lambda s, u: _q(p, s) - q_down, +1)
    up_event = StopEvent("up", lambda s, u: _q(p, s) - q_up, -1)
    axis_event = StopEvent("axis", lambda s, u: p.lam + s.w, -1)
    rest_event = StopEvent(
        "rest", lambda s, u: abs(s.w - u_rest) + abs(s.z) - REST_PROXIMITY, -1
    )

    segments: List[Segment] = []
    jumps: List[HeteroclinicJump] = []
    state = ReducedState(w=u_rest, z=0.0)

    def jump(end: ReducedState, direction: Direction):
        j = _jump_at(p, end, direction)
        jumps.append(j)
        segments.append(jump_segment(j))

    jump(state, Direction.UP)
    spikes = 1
    while True:
        if len(jumps) > BURST_MAX_JUMPS:
            raise NoConvergence(f"burst exceeded {BURST_MAX_JUMPS} jumps at eps={eps_us_tilde!r}")

        arc = reduced_flow(p, ReducedKind.TRAVELING3, Branch.UP, state, [down_event], constants)
        if arc.stop != "down":
            raise NoConvergence(f"upper arc never reached the down locus from {state}")
        w_j = _locus_w(p, q_down, arc.end.z, p.lam + arc.end.w)
        samples, state = _snap(arc, p, w_j, Branch.UP)
        segments.append(arc_segment(samples, Branch.UP.value))
        jump(state, Direction.DOWN)

        arc = reduced_flow(
            p, ReducedKind.TRAVELING3, Branch.DOWN, state, [up_event, axis_event], constants
        )
        if arc.stop == "up":
            w_j = _locus_w(p, q_up, arc.end.z, p.lam + arc.end.w)
            samples, state = _snap(arc, p, w_j, Branch.DOWN)
            segments.append(arc_segment(samples, Branch.DOWN.value))
            jump(state, Direction.UP)
            spikes += 1
            continue
        if arc.stop == "axis":
            if abs(arc.end.z - da_star) < GRAZING_TOL:
                raise NonGenericGrazing(
                    f"lower arc meets Λ = 0 at z={arc.end.z!r},"
                    f" within {GRAZING_TOL} of Δα*={da_star!r}"
                )
            segments.append(arc_segment(arc.samples, Branch.DOWN.value))
            break
        raise NoConvergence(f"lower arc ended without reaching a locus from {state}")

    final = reduced_flow(
        p, ReducedKind.TRAVELING3, Branch.DOWN, arc.end, [rest_event], constants
    )
    if final.stop != "rest":
        raise NoConvergence(f"final arc did not return to rest from {arc.end}")
    segments.append(arc_segment(final.samples, Branch.DOWN.value))

    logger.info(f"traveling burst at eps={eps_us_tilde!r}: {spikes} spikes, c*={c_star!r}")
    return SingularOrbit(
        segments=tuple(segments),
        spike_count=spikes,
        closed=True,
        symmetric=False,
        z_rest=u_rest,
        c=c_star,
        jumps=tuple(jumps),
    )


def build_front_wavetrain_skeleton(p: UnfoldingParams) -> SingularOrbit:
    """
    Two-scale skeleton (z frozen at rest) of a front from rest into the
    periodic wave train: up-jump at rest, then one full cycle between the
    H_down^+ and H_up^+ loci.
    """
    u_rest, c_star = _mirrored_preconditions(p, None)
    q_up = -(u_rest**3) + p.beta * u_rest
    q_down = -q_up
    constants = FlowConstants(c=c_star, u_rest=u_rest)
    down_event = StopEvent("down", lambda s, u: _q(p, s) - q_down, +1)
    up_event = StopEvent("up", lambda s, u: _q(p, s) - q_up, -1)

    segments: List[Segment] = []
    jumps: List[HeteroclinicJump] = []
    state = ReducedState(w=u_rest)
    for direction in (Direction.UP, Direction.DOWN, Direction.UP, Direction.DOWN):
        j = _jump_at(p, state, direction)
        jumps.append(j)
        segments.append(jump_segment(j))
        if len(jumps) == 4:
            break
        branch, event, q_target = (
            (Branch.UP, down_event, q_down)
            if direction is Direction.UP
            else (Branch.DOWN, up_event, q_up)
        )
        arc = reduced_flow(p, ReducedKind.TRAVELING, branch, state, [event], constants)
        if arc.stop != event.name:
            raise NoConvergence(f"{branch.value} arc never reached the {event.name} locus")
        samples, state = _snap(arc, p, _locus_w(p, q_target, 0.0, +1.0), branch)
        segments.append(arc_segment(samples, branch.value))

    return SingularOrbit(
        segments=tuple(segments),
        spike_count=2,
        closed=True,
        symmetric=False,
        z_rest=u_rest,
        c=c_star,
        jumps=tuple(jumps),
    )


def spike_adding_sweep(
    p: UnfoldingParams, eps_values: Optional[Sequence[float]] = None
) -> pd.DataFrame:
    """
    Spike count of the traveling burst skeleton for each ε̃_us. Without
    `eps_values`, sweeps SPIKE_SWEEP_POINTS log-spaced values over
    SPIKE_SWEEP_EPS_RANGE.
    """
    if eps_values is None:
        eps_values = np.geomspace(*SPIKE_SWEEP_EPS_RANGE, SPIKE_SWEEP_POINTS)
    _, c_star = _mirrored_preconditions(p, None)
    rows = []
    for eps in eps_values:
        try:
            orbit = build_traveling_burst_skeleton(p, eps, c_star=c_star)
            rows.append({"eps_us_tilde": eps, "spike_count": orbit.spike_count, "status": "ok"})
        except WcuspError as e:
            logger.warning(f"spike sweep at eps={eps!r} failed: {e}")
            rows.append({"eps_us_tilde": eps, "spike_count": np.nan, "status": type(e).__name__})
    return pd.DataFrame(rows, columns=["eps_us_tilde", "spike_count", "status"])


def is_non_increasing(sweep: pd.DataFrame) -> bool:
    """True if spike counts never increase with ε̃_us over the successful rows."""
    ok = sweep[sweep.status == "ok"].sort_values("eps_us_tilde")
    return bool(np.all(np.diff(ok.spike_count.to_numpy()) <= 0))


### Standing skeletons ###
def _unique_rest(p: UnfoldingParams) -> float:
    rests = nullcline_fixed_points(p)
    if len(rests) != 1:
        raise LemmaConditionFailed("unique_fixed_point", f"{len(rests)} homogeneous fixed points")
    return rests[0]


def _saddle_rate(p: UnfoldingParams, w: float, z: float) -> float:
    """Unstable rate of w'' = w − u_down(w) about a lower-branch equilibrium."""
    slope = _lower_slope(p, w, z)
    if slope >= 1:
        raise LemmaConditionFailed("saddle_rest", f"du/dw = {slope!r} at w={w!r}")
    return math.sqrt(1.0 - slope)


def build_standing_pulse_skeleton(p: UnfoldingParams) -> SingularOrbit:
    """
    Two-scale standing pulse (z frozen): leave rest along the lower branch,
    jump up at the first equal-area locus, follow the upper branch until
    v_w = 0, then close by the reflection ξ ↦ −ξ.
    """
    w_rest = _unique_rest(p)
    w_h1, _ = standing_front_w(p)
    if w_rest >= w_h1:
        raise LemmaConditionFailed("rest_left_of_front", f"w_rest={w_rest!r}, w_h1={w_h1!r}")

    mu = _saddle_rate(p, w_rest, 0.0)
    start = ReducedState(w=w_rest + SKELETON_OFFSET, v_w=SKELETON_OFFSET * mu)
    front = StopEvent("front", lambda s, u: s.w - w_h1, +1)
    turn = StopEvent("turn", lambda s, u: s.v_w, -1)

    lower = reduced_flow(p, ReducedKind.STANDING, Branch.DOWN, start, [front, turn])
    if lower.stop != "front":
        raise LemmaConditionFailed(
            "lower_arc_reaches_front", f"lower arc stopped with {lower.stop} before w_h1={w_h1!r}"
        )
    samples, state = _snap(lower, p, w_h1, Branch.DOWN)
    up = _jump_at(p, state, Direction.UP)
    upper = reduced_flow(p, ReducedKind.STANDING, Branch.UP, state, [turn])
    if upper.stop != "turn":
        raise NoConvergence(f"upper arc never turned back from w={w_h1!r}")

    half = [
        arc_segment(samples, Branch.DOWN.value),
        jump_segment(up, v_w=state.v_w),
        arc_segment(upper.samples, Branch.UP.value),
    ]
    down = up._replace(
        direction=Direction.DOWN,
        c=-up.c,
        base_u=up.land_u,
        land_u=up.base_u,
        profile=half[1].samples[::-1, :2] * np.array([1.0, -1.0]),
    )
    return SingularOrbit(
        segments=tuple(half + reflect_segments(half)),
        spike_count=1,
        closed=True,
        symmetric=True,
        c=0.0,
        z_rest=w_rest,
        jumps=(up, down),
    )


class _UnusableDeparture(Exception):
    pass


class _HalfBurst(NamedTuple):
    # v_w where v_z first vanishes; NaN when the orbit left the window first
    phi: float
    up_jumps: int
    segments: Tuple[Segment, ...]
    jumps: Tuple[HeteroclinicJump, ...]


class _StandingShooter:
    """Half-orbits of the standing burst, parameterized by the departure z_d."""

    def __init__(self, p: UnfoldingParams, delta: float, z_bar: float):
        self.p = p
        self.w_rest = _unique_rest(p)
        self.constants = FlowConstants(delta=delta, z_bar=z_bar, u_rest=self.w_rest)
        self.z_eq = self._quasi_steady_rest(z_bar)
        self.z_hi = self._window_top()
        self.z_top = self.z_eq + (self.z_hi - self.z_eq) * (1 - 1e-6)
        grid = np.linspace(self.z_eq, self.z_top, STANDING_LOCUS_SAMPLES)
        loci = np.array([standing_front_w(p, z) for z in grid])
        self.h1 = CubicSpline(grid, loci[:, 0])
        self.h2 = CubicSpline(grid, loci[:, 1])

    def _u_qss(self, z: float) -> float:
        return nullcline_fixed_points(self.p, z)[0]

    def _qss_slope(self, z: float) -> float:
        """d/dz of z + u_rest − u_qss(z): the stiffness of the quasi-steady arc."""
        u = self._u_qss(z)
        p = self.p
        g_u = -3 * u**2 - 2 * (p.lam + u) + p.beta + p.gamma * (p.lam + 2 * u)
        return 1.0 - 1.0 / g_u

    def _quasi_steady_rest(self, z_bar: float) -> float:
        z = 0.0
        for _ in range(50):
            f = z + self.w_rest - self._u_qss(z) - z_bar
            if abs(f) < 1e-14:
                break
            z -= f / self._qss_slope(z)
        return z

    def _window_top(self) -> float:
        """Largest z for which the equal-area loci exist."""

        def ok(z: float) -> bool:
            try:
                standing_front_w(self.p, z)
                return True
            except NoBistableRange:
                return False

        if not ok(self.z_eq):
            raise LemmaConditionFailed(
                "standing_front_at_rest", f"no equal-area locus at z={self.z_eq!r}"
            )
        lo, hi = self.z_eq, self.z_eq + 0.01
        while ok(hi):
            lo, hi = hi, self.z_eq + 2 * (hi - self.z_eq)
            if hi - self.z_eq > 1e3:
                raise LemmaConditionFailed("bounded_window", "equal-area loci persist for all z")
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if ok(mid) else (lo, mid)
        return lo

    def _front_w(self, z: float, near: float) -> float:
        pair = standing_front_w(self.p, z)
        return min(pair, key=lambda w: abs(w - near))

    def half_orbit(self, z_d: float) -> _HalfBurst:
        p, k = self.p, self.constants
        kappa = math.sqrt(self._qss_slope(self.z_eq))
        start = ReducedState(
            w=self.w_rest, z=self.z_eq + SKELETON_OFFSET, v_z=SKELETON_OFFSET * kappa
        )
        depart = StopEvent("depart", lambda s, u: s.z - z_d, +1)
        stall = StopEvent("stall", lambda s, u: s.v_z, -1)
        qss = reduced_flow(p, ReducedKind.STANDING_A, Branch.DOWN, start, [depart, stall], k)
        if qss.stop != "depart":
            return _HalfBurst(math.nan, 0, (), ())
        segments: List[Segment] = [arc_segment(qss.samples, "quasi_steady")]
        jumps: List[HeteroclinicJump] = []

        w_q = qss.end_u
        mu = _saddle_rate(p, w_q, z_d)
        state = ReducedState(
            w=w_q + SKELETON_OFFSET, v_w=SKELETON_OFFSET * mu, z=z_d, v_z=qss.end.v_z
        )
        common = [
            StopEvent("symmetric", lambda s, u: s.v_z, -1),
            StopEvent("window", lambda s, u: s.z - self.z_top, +1),
            StopEvent("escape", lambda s, u: abs(s.w - self.w_rest) - SKELETON_ESCAPE, +1),
        ]
        to_upper = [
            StopEvent("h1", lambda s, u: s.w - float(self.h1(s.z)), +1),
            StopEvent("h2", lambda s, u: s.w - float(self.h2(s.z)), +1),
        ]
        to_lower = [
            StopEvent("h1", lambda s, u: s.w - float(self.h1(s.z)), -1),
            StopEvent("h2", lambda s, u: s.w - float(self.h2(s.z)), -1),
        ]
        branch = Branch.DOWN
        up_jumps = 0
        while len(jumps) <= BURST_MAX_JUMPS:
            events = (to_upper if branch.is_lower else to_lower) + common
            try:
                arc = reduced_flow(p, ReducedKind.STANDING_B, branch, state, events, k)
            except FoldCollision:
                return _HalfBurst(math.nan, up_jumps, (), ())
            if arc.stop == "symmetric":
                segments.append(arc_segment(arc.samples, branch.value))
                return _HalfBurst(arc.end.v_w, up_jumps, tuple(segments), tuple(jumps))
            if arc.stop not in ("h1", "h2"):
                return _HalfBurst(math.nan, up_jumps, (), ())
            try:
                w_j = self._front_w(arc.end.z, arc.end.w)
            except NoBistableRange:
                return _HalfBurst(math.nan, up_jumps, (), ())
            samples, state = _snap(arc, p, w_j, branch)
            segments.append(arc_segment(samples, branch.value))
            direction = Direction.UP if branch.is_lower else Direction.DOWN
            j = _jump_at(p, state, direction)
            jumps.append(j)
            segments.append(jump_segment(j, v_w=state.v_w, v_z=state.v_z))
            if direction is Direction.UP:
                up_jumps += 1
                branch = Branch.UP
            else:
                branch = Branch.DOWN
        raise NoConvergence(f"standing half-orbit exceeded {BURST_MAX_JUMPS} jumps")


def build_standing_burst_skeleton(
    p: UnfoldingParams,
    delta_ul_tilde: float,
    z_bar: float = 0.0,
    samples: int = STANDING_DEPARTURE_SAMPLES,
) -> SingularOrbit:
    """
    Symmetric singular homoclinic orbit of the standing burst.

    The first half leaves rest along the quasi-steady branch w = u, departs
    it at z_d along the layer saddle, and then oscillates between the
    equal-area loci while (z, v_z) drift slowly. It must end on the
    section v_w = v_z = 0; z_d is found by scanning `samples` departure
    values for a sign change of v_w at the first v_z = 0 crossing (between
    half-orbits with the same jump count) and refining with brentq. The
    second half is the reflection ξ ↦ −ξ.
    """
    shooter = _StandingShooter(p, delta_ul_tilde, z_bar)
    span = shooter.z_top - shooter.z_eq
    grid = shooter.z_eq + span * np.linspace(0, 1, samples + 2)[1:-1]
    halves = [shooter.half_orbit(z_d) for z_d in grid]

    for i in range(len(grid) - 1):
        a, b = halves[i], halves[i + 1]
        if not (np.isfinite(a.phi) and np.isfinite(b.phi)) or a.up_jumps != b.up_jumps:
            continue
        if a.phi == 0:
            z_star = grid[i]
        elif a.phi * b.phi > 0:
            continue
        else:

            def phi(z_d: float) -> float:
                half = shooter.half_orbit(z_d)
                if not np.isfinite(half.phi) or half.up_jumps != a.up_jumps:
                    raise _UnusableDeparture()
                return half.phi

            try:
                z_star = brentq(phi, grid[i], grid[i + 1], xtol=1e-13)
            except _UnusableDeparture:
                continue
        best = shooter.half_orbit(z_star)
        half = list(best.segments)
        mirrored = reflect_segments(half)
        jumps = best.jumps + tuple(
            j._replace(
                direction=Direction.DOWN if j.direction is Direction.UP else Direction.UP,
                c=-j.c,
                base_u=j.land_u,
                land_u=j.base_u,
                profile=j.profile[::-1] * np.array([1.0, -1.0]),
            )
            for j in reversed(best.jumps)
        )
        logger.info(
            f"standing burst at delta={delta_ul_tilde!r}: z_d={z_star!r}, {best.up_jumps} up-jumps"
        )
        return SingularOrbit(
            segments=tuple(half + mirrored),
            spike_count=best.up_jumps,
            closed=True,
            symmetric=True,
            c=0.0,
            z_rest=shooter.w_rest,
            jumps=jumps,
        )

    raise NoSymmetricCrossing(
        f"no departure in ({shooter.z_eq!r}, {shooter.z_top!r}) reaches v_w = v_z = 0"
    )

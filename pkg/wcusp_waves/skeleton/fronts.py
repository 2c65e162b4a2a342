"""
Fronts of the layer dynamics

    u' = v,   v' = c·v − g(u, λ+w, α+z, β, γ)

at frozen (w, z). On a three-root slice g = −(u−r1)(u−r2)(u−r3), and the
heteroclinic between the outer roots has the exact profile
v = ±(u−r1)(r3−u)/√2 with speed c_up = (r1 + r3 − 2·r2)/√2 (c_down = −c_up).
"""

__all__ = [
    "JumpCurves",
    "HeteroclinicJump",
    "front_speed_closed_form",
    "shoot_front_speed",
    "traveling_front_speed",
    "find_cstar",
    "jump_profile",
    "make_jump",
    "standing_front_w",
    "jump_curves",
    "delta_alpha_star",
    "jump_table",
]

import math
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.integrate import solve_ivp
from scipy.optimize import brentq, minimize_scalar

from ..config.logging import get_logger
from ..config.settings import (
    EQUAL_AREA_GRID,
    EQUAL_AREA_XTOL,
    JUMP_PROFILE_SAMPLES,
    SHOOT_ATOL,
    SHOOT_BOX,
    SHOOT_BRACKET,
    SHOOT_MAX_SPAN,
    SHOOT_OFFSET,
    SHOOT_RTOL,
    SHOOT_SPEED_TOL,
    SPEED_AGREEMENT_TOL,
)
from ..core.unfolding import (
    CriticalSlice,
    bistable_w_intervals,
    cubic_roots,
    fixed_points,
    slice_coefficients,
    solve_cubic,
)
from ..models.params import Direction, UnfoldingParams
from ..shared.errors import (
    DomainError,
    NoBistableRange,
    NotBistable,
    RadicandNegative,
    ShootingDiverged,
)

logger = get_logger(__name__)

_SQRT2 = math.sqrt(2.0)
# Equal-area touching zeros are accepted below this energy mismatch.
_TOUCH_TOL = 1e-10
_LINGER_TOL = 1e-6


class JumpCurves(NamedTuple):
    w_up_minus: float
    w_down_minus: float
    w_up_plus: float
    w_down_plus: float


class HeteroclinicJump(NamedTuple):
    w: float
    z: float
    c: float
    direction: Direction
    base_u: float
    land_u: float
    # (n, 2) array of (u, v_u) from base to landing point
    profile: np.ndarray


def _outer_roots(slice_: CriticalSlice) -> Tuple[float, float, float]:
    if len(slice_.roots) != 3:
        raise NotBistable(
            f"slice at w={slice_.w!r}, z={slice_.z!r} has {len(slice_.roots)} roots"
        )
    r1, r2, r3 = slice_.roots
    return r1, r2, r3


def front_speed_closed_form(slice_: CriticalSlice, direction: Direction) -> float:
    """
    Speed from the affine map onto the normalized cubic u(1−u)(u−a) with
    a = (r2 − r1)/(r3 − r1): c_up = (r3 − r1)(1 − 2a)/√2.
    """
    r1, r2, r3 = _outer_roots(slice_)
    a = (r2 - r1) / (r3 - r1)
    c_up = (r3 - r1) * (1.0 - 2.0 * a) / _SQRT2
    return c_up if direction is Direction.UP else -c_up


def _shoot_once(roots: Tuple[float, float, float], c: float, direction: Direction) -> int:
    """+1 on overshoot, −1 on undershoot, 0 if the orbit lingers at the target."""
    r1, r2, r3 = roots
    base, target = (r1, r3) if direction is Direction.UP else (r3, r1)
    sign = 1.0 if direction is Direction.UP else -1.0

    g_prime = -(base - r2) * (base - (r3 if base == r1 else r1))
    mu = 0.5 * (c + math.sqrt(c * c - 4.0 * g_prime))
    y0 = [base + sign * SHOOT_OFFSET, sign * SHOOT_OFFSET * mu]

    def rhs(t, y):
        u, v = y
        return [v, c * v + (u - r1) * (u - r2) * (u - r3)]

    def overshoot(t, y):
        return y[0] - target

    overshoot.terminal = True
    overshoot.direction = sign

    def undershoot(t, y):
        return y[1]

    undershoot.terminal = True
    undershoot.direction = -sign

    def escape(t, y):
        return SHOOT_BOX - max(abs(y[0]), abs(y[1]))

    escape.terminal = True

    sol = solve_ivp(
        rhs,
        (0.0, SHOOT_MAX_SPAN),
        y0,
        method="RK45",
        rtol=SHOOT_RTOL,
        atol=SHOOT_ATOL,
        events=(overshoot, undershoot, escape),
    )
    if sol.t_events[2].size:
        raise ShootingDiverged(f"front orbit left the box |u|,|v| <= {SHOOT_BOX} at c={c!r}")
    if sol.t_events[0].size:
        return 1
    if sol.t_events[1].size:
        return -1
    # No event: either parked at the landing saddle or captured by the middle root
    if abs(sol.y[0, -1] - target) < _LINGER_TOL:
        return 0
    return -1


def shoot_front_speed(slice_: CriticalSlice, direction: Direction) -> float:
    """
    Bisection on c: integrate from the base saddle along its unstable
    direction; an orbit that passes the landing root means c is too large,
    one whose v_u changes sign means c is too small.
    """
    roots = _outer_roots(slice_)
    lo, hi = SHOOT_BRACKET
    if _shoot_once(roots, lo, direction) != -1 or _shoot_once(roots, hi, direction) != 1:
        raise ShootingDiverged(f"speed bracket {SHOOT_BRACKET} does not enclose the front")
    while hi - lo > SHOOT_SPEED_TOL:
        c = 0.5 * (lo + hi)
        outcome = _shoot_once(roots, c, direction)
        if outcome == 0:
            return c
        if outcome > 0:
            hi = c
        else:
            lo = c
    logger.debug(f"shooting converged to [{lo!r}, {hi!r}] at w={slice_.w!r}")
    return 0.5 * (lo + hi)


def traveling_front_speed(
    p: UnfoldingParams, z: float, w: float, direction: Direction
) -> float:
    slice_ = solve_cubic(w, z, p)
    closed = front_speed_closed_form(slice_, direction)
    shot = shoot_front_speed(slice_, direction)
    if abs(closed - shot) > SPEED_AGREEMENT_TOL:
        raise ShootingDiverged(
            f"speed methods disagree at w={w!r}, z={z!r}: {closed!r} vs {shot!r}"
        )
    return closed


def find_cstar(p: UnfoldingParams) -> float:
    """Speed of the up-jump based at the rest state (slice w = u_rest, z = 0)."""
    u_rest = fixed_points(p).u_rest
    return traveling_front_speed(p, 0.0, u_rest, Direction.UP)


### Jump profiles ###
def jump_profile(
    slice_: CriticalSlice, direction: Direction, n: int = JUMP_PROFILE_SAMPLES
) -> np.ndarray:
    r1, _, r3 = _outer_roots(slice_)
    u = np.linspace(r1, r3, n)
    v = (u - r1) * (r3 - u) / _SQRT2
    if direction is Direction.DOWN:
        u, v = u[::-1], -v[::-1]
    return np.column_stack([u, v])


def make_jump(slice_: CriticalSlice, direction: Direction) -> HeteroclinicJump:
    r1, _, r3 = _outer_roots(slice_)
    base, land = (r1, r3) if direction is Direction.UP else (r3, r1)
    return HeteroclinicJump(
        w=slice_.w,
        z=slice_.z,
        c=front_speed_closed_form(slice_, direction),
        direction=direction,
        base_u=base,
        land_u=land,
        profile=jump_profile(slice_, direction),
    )


### Equal-area (standing) fronts ###
def _energy_gap(p: UnfoldingParams, w: np.ndarray, z: float) -> np.ndarray:
    """∫ g du between the outer roots, from the exact antiderivative."""
    p_lin, q = slice_coefficients(p, w, z)
    roots = cubic_roots(0.0, -p_lin, q)
    r1, r3 = roots[..., 0], roots[..., 2]

    def G(u):
        return -(u**4) / 4.0 + p_lin * u**2 / 2.0 - q * u

    return G(r3) - G(r1)


def standing_front_w(p: UnfoldingParams, z: float = 0.0) -> Tuple[float, float]:
    """
    The w-values (w_h1 ≤ w_h2) at which the outer wells of the slice have equal
    depth, so the layer dynamics carry standing (c = 0) heteroclinics.
    A single touching solution is returned twice.
    """
    intervals = bistable_w_intervals(p, z)
    if not intervals:
        raise NoBistableRange(f"no three-root slice at z={z!r} for {p}")

    zeros: List[float] = []
    for lo, hi in intervals:
        pad = 1e-9 * (1.0 + hi - lo)
        grid = np.linspace(lo + pad, hi - pad, EQUAL_AREA_GRID)
        energy = _energy_gap(p, grid, z)
        finite = np.isfinite(energy)
        for i in np.flatnonzero(finite[:-1] & finite[1:]):
            e0, e1 = energy[i], energy[i + 1]
            if e0 == 0.0:
                zeros.append(float(grid[i]))
            elif e0 * e1 < 0:
                f = lambda w: float(_energy_gap(p, np.asarray(w), z))
                zeros.append(brentq(f, grid[i], grid[i + 1], xtol=EQUAL_AREA_XTOL))
        # Touching zeros: a local minimum of |E| that never changes sign
        mags = np.where(finite, np.abs(energy), np.inf)
        for i in range(1, len(grid) - 1):
            if mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]:
                if energy[i - 1] * energy[i + 1] <= 0:
                    continue
                res = minimize_scalar(
                    lambda w: abs(float(_energy_gap(p, np.asarray(w), z))),
                    bounds=(grid[i - 1], grid[i + 1]),
                    method="bounded",
                    options={"xatol": EQUAL_AREA_XTOL},
                )
                if res.fun < _TOUCH_TOL:
                    zeros.append(float(res.x))

    merged: List[float] = []
    for w in sorted(zeros):
        if not merged or w - merged[-1] > 1e-9:
            merged.append(w)
    zeros = merged
    if not zeros:
        raise NoBistableRange(f"no equal-area front at z={z!r} for {p}")
    if len(zeros) > 2:
        logger.debug(f"standing_front_w: {len(zeros)} equal-area roots, keeping the outer pair")
    return zeros[0], zeros[-1]


### Jump loci in the ultraslow direction ###
def _require_symmetric(p: UnfoldingParams):
    if p.gamma != 0:
        raise DomainError(f"jump-curve closed forms need gamma == 0, got {p.gamma!r}")


def delta_alpha_star(p: UnfoldingParams, u_rest: float) -> float:
    return -(u_rest**3) + p.beta * u_rest - p.alpha


def jump_curves(p: UnfoldingParams, u_rest: float, z: float) -> JumpCurves:
    """
    w-coordinates of the four fronts at ultraslow value z. The up-jumps sit on
    the slices whose lower root is u_rest, the down-jumps on their mirror
    images (upper root −u_rest).
    """
    _require_symmetric(p)
    alpha = p.alpha + z
    up_radicand = -(u_rest**3) + p.beta * u_rest - alpha
    down_radicand = u_rest**3 - p.beta * u_rest - alpha
    if up_radicand < 0 or down_radicand < 0:
        raise RadicandNegative(
            f"jump curves absent at z={z!r} (radicands {up_radicand!r}, {down_radicand!r})"
        )
    up, down = math.sqrt(up_radicand), math.sqrt(down_radicand)
    return JumpCurves(
        w_up_minus=-up - p.lam,
        w_down_minus=-down - p.lam,
        w_up_plus=up - p.lam,
        w_down_plus=down - p.lam,
    )


def jump_table(p: UnfoldingParams, u_rest: float, z_values: Sequence[float]) -> pd.DataFrame:
    """One row of jump curves per z; rows past the merge point are marked."""
    rows = []
    for z in z_values:
        try:
            curves = jump_curves(p, u_rest, z)._asdict()
            status = "ok"
        except RadicandNegative:
            curves = {field: np.nan for field in JumpCurves._fields}
            status = "RadicandNegative"
        rows.append({"z": z, **curves, "status": status})
    return pd.DataFrame(rows, columns=["z", *JumpCurves._fields, "status"])

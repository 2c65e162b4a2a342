"""
Slow flows on the critical manifold.

Every flow is integrated as an ODE in its slow variables with the fast
variable u recovered at each evaluation by projecting onto the requested
branch of the slice cubic. The five flavours are:

    traveling    w' = (u − w)/c                              (z frozen)
    standing     w' = v_w,  v_w' = w − u                     (z frozen)
    traveling3   w' = (u − w)/c,  z' = ε̃(u − z_abs)/c
    standingA    w = u on the quasi-steady branch,  z' = v_z,  v_z' = z_abs − u − z̄
    standingB    w' = v_w,  v_w' = w − u,  z' = δ̃·v_z,  v_z' = δ̃(z_abs − u − z̄)

z is measured from rest: z_abs = u_rest + z.
"""

__all__ = [
    "ReducedKind",
    "ReducedState",
    "FlowConstants",
    "StopEvent",
    "Arc",
    "BranchTracker",
    "reduced_flow",
    "branch_root",
]

from enum import Enum as EnumBaseClass
from typing import Callable, Dict, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from ..config.logging import get_logger
from ..config.settings import FOLD_PROXIMITY, REDUCED_ATOL, REDUCED_RTOL
from ..core.unfolding import (
    Branch,
    nullcline_fixed_points,
    slice_coefficients,
    solve_cubic,
)
from ..models.params import UnfoldingParams
from ..shared.errors import FoldCollision

logger = get_logger(__name__)


class ReducedKind(EnumBaseClass):
    TRAVELING = "traveling"
    STANDING = "standing"
    TRAVELING3 = "traveling3"
    STANDING_A = "standingA"
    STANDING_B = "standingB"


_LAYOUT: Dict[ReducedKind, Tuple[str, ...]] = {
    ReducedKind.TRAVELING: ("w",),
    ReducedKind.STANDING: ("w", "v_w"),
    ReducedKind.TRAVELING3: ("w", "z"),
    ReducedKind.STANDING_A: ("z", "v_z"),
    ReducedKind.STANDING_B: ("w", "v_w", "z", "v_z"),
}


class ReducedState(NamedTuple):
    w: float
    v_w: float = 0.0
    z: float = 0.0
    v_z: float = 0.0


class FlowConstants(NamedTuple):
    c: float = 0.0
    eps: float = 0.0
    delta: float = 0.0
    z_bar: float = 0.0
    u_rest: float = 0.0


class StopEvent(NamedTuple):
    """A terminal event `fn(state, u)`; `direction` as in scipy's solve_ivp."""

    name: str
    fn: Callable[[ReducedState, float], float]
    direction: int = 0


class Arc(NamedTuple):
    # (n, 6) rows of (u, v_u, w, v_w, z, v_z)
    samples: np.ndarray
    stop: Optional[str]
    end: ReducedState
    end_u: float
    branch: Branch


def branch_root(roots: Sequence[float], branch: Branch) -> float:
    if branch.is_lower:
        return roots[0]
    if branch.is_middle:
        return roots[1]
    return roots[-1]


class BranchTracker:
    """
    Follows one branch of the slice family: by position when the slice has
    three roots, by nearest-root continuation otherwise.
    """

    def __init__(self, branch: Branch, u0: float):
        self.branch = branch
        self.last = u0

    def select(self, roots: Sequence[float]) -> float:
        if len(roots) == 3:
            u = branch_root(roots, self.branch)
        else:
            u = min(roots, key=lambda r: abs(r - self.last))
        self.last = u
        return u


def _state(y: np.ndarray, kind: ReducedKind, frozen: ReducedState) -> ReducedState:
    return frozen._replace(**dict(zip(_LAYOUT[kind], (float(v) for v in y))))


def _project(
    p: UnfoldingParams, kind: ReducedKind, s: ReducedState, tracker: BranchTracker
) -> float:
    if kind is ReducedKind.STANDING_A:
        return tracker.select(nullcline_fixed_points(p, s.z))
    return tracker.select(solve_cubic(s.w, s.z, p).roots)


def _fold_margin(p: UnfoldingParams, kind: ReducedKind, s: ReducedState, u: float) -> float:
    if kind is ReducedKind.STANDING_A:
        # slope of u ↦ g(u, λ+u, α+z) along the quasi-steady branch
        slope = -3 * u**2 - 2 * (p.lam + u) + p.beta + p.gamma * (p.lam + 2 * u)
    else:
        p_lin, _ = slice_coefficients(p, s.w, s.z)
        slope = -3 * u**2 + p_lin
    return abs(slope) - FOLD_PROXIMITY


def _rhs(kind: ReducedKind, s: ReducedState, u: float, k: FlowConstants) -> list:
    z_abs = k.u_rest + s.z
    if kind is ReducedKind.TRAVELING:
        return [(u - s.w) / k.c]
    if kind is ReducedKind.STANDING:
        return [s.v_w, s.w - u]
    if kind is ReducedKind.TRAVELING3:
        return [(u - s.w) / k.c, k.eps * (u - z_abs) / k.c]
    if kind is ReducedKind.STANDING_A:
        return [s.v_z, z_abs - u - k.z_bar]
    return [s.v_w, s.w - u, k.delta * s.v_z, k.delta * (z_abs - u - k.z_bar)]


def reduced_flow(
    p: UnfoldingParams,
    kind: ReducedKind,
    branch: Branch,
    start: ReducedState,
    stop_events: Sequence[StopEvent] = (),
    constants: FlowConstants = FlowConstants(),
    t_max: float = 1e6,
    u0: Optional[float] = None,
) -> Arc:
    """
    Integrate one slow arc from `start` on `branch` until the first of
    `stop_events` fires. Reaching a fold first raises FoldCollision; running
    out of time returns an arc with `stop=None`.
    """
    if u0 is None:
        if kind is ReducedKind.STANDING_A:
            roots = nullcline_fixed_points(p, start.z)
        else:
            roots = solve_cubic(start.w, start.z, p).roots
        u0 = branch_root(roots, branch) if len(roots) == 3 else roots[0]
    tracker = BranchTracker(branch, u0)

    def rhs(t, y):
        s = _state(y, kind, start)
        return _rhs(kind, s, _project(p, kind, s, tracker), constants)

    def wrap(event: StopEvent):
        def fn(t, y):
            s = _state(y, kind, start)
            return event.fn(s, _project(p, kind, s, BranchTracker(branch, tracker.last)))

        fn.terminal = True
        fn.direction = event.direction
        return fn

    def fold(t, y):
        s = _state(y, kind, start)
        u = _project(p, kind, s, BranchTracker(branch, tracker.last))
        return _fold_margin(p, kind, s, u)

    fold.terminal = True
    fold.direction = -1

    y0 = [getattr(start, name) for name in _LAYOUT[kind]]
    sol = solve_ivp(
        rhs,
        (0.0, t_max),
        y0,
        method="LSODA",
        rtol=REDUCED_RTOL,
        atol=REDUCED_ATOL,
        events=[wrap(e) for e in stop_events] + [fold],
    )

    # Resample along the accepted steps with a fresh continuation
    sampler = BranchTracker(branch, u0)
    rows = []
    for y in sol.y.T:
        s = _state(y, kind, start)
        u = _project(p, kind, s, sampler)
        w = u if kind is ReducedKind.STANDING_A else s.w
        rows.append((u, 0.0, w, s.v_w, s.z, s.v_z))
    samples = np.array(rows)
    end = _state(sol.y[:, -1], kind, start)
    if kind is ReducedKind.STANDING_A:
        end = end._replace(w=samples[-1, 0])

    fired = [i for i, t in enumerate(sol.t_events) if t.size]
    if fired and fired[0] == len(stop_events):
        raise FoldCollision(
            f"{kind.value} arc on the {branch.value} branch reached a fold"
            f" at w={end.w!r}, z={end.z!r}"
        )
    stop = stop_events[fired[0]].name if fired else None
    logger.debug(
        f"reduced_flow {kind.value}/{branch.value}: {len(samples)} samples, stop={stop}"
    )
    return Arc(samples=samples, stop=stop, end=end, end_u=float(samples[-1, 0]), branch=branch)

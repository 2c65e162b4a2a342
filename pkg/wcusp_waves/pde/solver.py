"""
Method-of-lines integration of the three-field reaction-diffusion system

    τ_u u_t = D_u u_xx + g(u, λ+w, α+z, β, γ) + Pert(t, x)
    τ_w w_t = D_w w_xx + u − w
    τ_z z_t = D_z z_xx + u − z

on a cell-centered grid with no-flux boundaries. Diffusion is implicit
(one tridiagonal solve per diffusing field), reaction explicit with a
Heun corrector whose mismatch drives the step size.
"""

__all__ = [
    "FIELDS",
    "SpaceTimeRecord",
    "reaction_rhs",
    "reaction_jacobian",
    "homogeneous_rest",
    "Simulator",
    "simulate",
]

from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import solve_banded

from ..config.logging import get_logger
from ..config.settings import BOUNDING_BOX, DT_GROWTH, DT_MIN
from ..core.unfolding import eval_gwcusp, homogeneous_rest_roots
from ..models.params import ScaleParams, SimConfig, SolverStats, UnfoldingParams
from ..shared.errors import BlowUp, NoStableRest, StepRejected

logger = get_logger(__name__)

FIELDS = ("u", "w", "z")


class SpaceTimeRecord(NamedTuple):
    times: np.ndarray
    # (frames, 3, n): u, w, z per output time
    frames: np.ndarray
    config: SimConfig
    solver_stats: SolverStats

    @property
    def x(self) -> np.ndarray:
        return self.config.grid.centers

    @property
    def u(self) -> np.ndarray:
        return self.frames[:, 0, :]

    @property
    def w(self) -> np.ndarray:
        return self.frames[:, 1, :]

    @property
    def z(self) -> np.ndarray:
        return self.frames[:, 2, :]


def reaction_rhs(u, w, z, params: UnfoldingParams, scales: ScaleParams):
    """Pointwise time derivatives of (u, w, z) without diffusion or forcing."""
    g = eval_gwcusp(u, params._replace(lam=params.lam + w, alpha=params.alpha + z))
    return g / scales.tau_u, (u - w) / scales.tau_w, (u - z) / scales.tau_z


def reaction_jacobian(u: float, params: UnfoldingParams, scales: ScaleParams) -> np.ndarray:
    """Jacobian of `reaction_rhs` at the homogeneous state u = w = z."""
    lam = params.lam + u
    g_u = -3 * u**2 + params.beta + params.gamma * lam
    g_lam = -2 * lam + params.gamma * u
    return np.array(
        [
            [g_u / scales.tau_u, g_lam / scales.tau_u, -1 / scales.tau_u],
            [1 / scales.tau_w, -1 / scales.tau_w, 0.0],
            [1 / scales.tau_z, 0.0, -1 / scales.tau_z],
        ]
    )


def homogeneous_rest(params: UnfoldingParams, scales: ScaleParams) -> Tuple[float, float, float]:
    """The lowest homogeneous state u = w = z whose reaction linearization is stable."""
    for u in homogeneous_rest_roots(params):
        leading = np.max(np.linalg.eigvals(reaction_jacobian(u, params, scales)).real)
        if leading < 0:
            return u, u, u
        logger.debug(f"homogeneous state u={u!r} unstable (leading eigenvalue {leading!r})")
    raise NoStableRest(f"no stable homogeneous rest state for {params}")


class Simulator:
    """
    Owns the discretization of one SimConfig. `step` advances a (3, n) state
    by one IMEX-Heun step; `run` drives adaptive stepping and records frames.
    """

    def __init__(self, config: SimConfig):
        self.config = config
        self.x = config.grid.centers
        self.stats = SolverStats()
        scales = config.scales
        inv_dx2 = 1.0 / config.grid.dx**2
        # Per-field diffusion rate D/τ/dx²; fields with D = 0 skip the solve
        self.rates = [
            scales.D_u / scales.tau_u * inv_dx2,
            scales.D_w / scales.tau_w * inv_dx2,
            scales.D_z / scales.tau_z * inv_dx2,
        ]
        self.window = config.perturbation.amplitude * config.perturbation.window(self.x)

    def _laplacian_bands(self, rate: float, dt: float) -> np.ndarray:
        """Banded form of I − dt·rate·L with ghost-cell Neumann rows."""
        n = self.config.grid.n
        k = dt * rate
        ab = np.zeros((3, n))
        ab[0, 1:] = -k
        ab[2, :-1] = -k
        ab[1, :] = 1 + 2 * k
        ab[1, 0] = ab[1, -1] = 1 + k
        return ab

    def _diffuse(self, rhs: np.ndarray, dt: float) -> np.ndarray:
        out = rhs.copy()
        for i, rate in enumerate(self.rates):
            if rate > 0:
                out[i] = solve_banded((1, 1), self._laplacian_bands(rate, dt), rhs[i])
                self.stats = self.stats._replace(linear_solves=self.stats.linear_solves + 1)
        return out

    def _reaction(self, state: np.ndarray, forced: bool) -> np.ndarray:
        if self.config.reaction:
            du, dw, dz = reaction_rhs(*state, self.config.params, self.config.scales)
            rates = np.array([du, dw, dz])
        else:
            rates = np.zeros_like(state)
        if forced:
            rates[0] += self.window / self.config.scales.tau_u
        return rates

    def step(self, state: np.ndarray, t: float, dt: float) -> Tuple[np.ndarray, float]:
        """
        One step of size dt from time t. Returns the new state and the
        predictor/corrector mismatch; raises StepRejected when the mismatch
        exceeds the step tolerance or the state leaves the bounding box.
        """
        # the forcing window is sampled once per step, at its midpoint
        forced = self.config.perturbation.active(t + dt / 2)
        r0 = self._reaction(state, forced)
        predictor = self._diffuse(state + dt * r0, dt)
        r1 = self._reaction(predictor, forced)
        corrector = self._diffuse(state + 0.5 * dt * (r0 + r1), dt)

        mismatch = float(np.max(np.abs(corrector - predictor)))
        if not np.all(np.isfinite(corrector)) or np.max(np.abs(corrector)) > BOUNDING_BOX:
            raise StepRejected(f"state left the bounding box at t={t!r}, dt={dt!r}")
        if mismatch > self.config.step_tol:
            raise StepRejected(f"corrector mismatch {mismatch!r} at t={t!r}, dt={dt!r}")
        return corrector, mismatch

    def initial_state(self) -> np.ndarray:
        initial = self.config.initial
        if initial is not None:
            return np.array([initial.u, initial.w, initial.z], dtype=float)
        rest = homogeneous_rest(self.config.params, self.config.scales)
        return np.repeat(np.array(rest)[:, None], self.config.grid.n, axis=1)

    def _breakpoints(self, out_times: np.ndarray) -> np.ndarray:
        pert = self.config.perturbation
        extra = [t for t in (pert.t_lo, pert.t_hi) if 0 < t < self.config.t_end]
        points = np.unique(np.concatenate([out_times, extra]))
        keep = np.concatenate([[True], np.diff(points) > 1e-12 * max(1.0, self.config.t_end)])
        return points[keep]

    def run(self, state: Optional[np.ndarray] = None) -> SpaceTimeRecord:
        config = self.config
        if state is None:
            state = self.initial_state()
        n_out = int(round(config.t_end / config.dt_out))
        out_times = config.dt_out * np.arange(n_out + 1)
        out_times[-1] = config.t_end
        frames: List[np.ndarray] = [state.copy()]

        t = 0.0
        dt = min(config.scales.tau_u / 10, config.dt_max)
        next_frame = 1
        for stop in self._breakpoints(out_times)[1:]:
            while t < stop:
                h = min(dt, stop - t)
                try:
                    state, mismatch = self.step(state, t, h)
                except StepRejected as e:
                    self.stats = self.stats._replace(rejected=self.stats.rejected + 1)
                    dt = h / 2
                    if dt < DT_MIN:
                        raise BlowUp(f"step size fell below {DT_MIN} at t={t!r}: {e}")
                    logger.debug(f"rejected: {e}; retrying with dt={dt!r}")
                    continue
                t = stop if stop - t - h <= 1e-12 * max(1.0, stop) else t + h
                self.stats = self.stats._replace(steps=self.stats.steps + 1)
                if mismatch < config.step_tol / 4 and h == dt:
                    dt = min(dt * DT_GROWTH, config.dt_max)
            if next_frame < len(out_times) and np.isclose(stop, out_times[next_frame]):
                frames.append(state.copy())
                next_frame += 1

        logger.info(
            f"simulated {config.t_end} time units: {self.stats.steps} steps, "
            f"{self.stats.rejected} rejected"
        )
        return SpaceTimeRecord(
            times=out_times,
            frames=np.array(frames),
            config=config,
            solver_stats=self.stats,
        )


def simulate(config: SimConfig) -> SpaceTimeRecord:
    """Integrate `config` from its initial state (homogeneous rest by default) to t_end."""
    return Simulator(config).run()

"""Classify a space-time record into the wave patterns of the three-field model."""

__all__ = [
    "FrontTrack",
    "EdgeMotion",
    "track_fronts",
    "measure_wave_speed",
    "classify_pattern",
    "quasi_steady_mismatch",
    "modulated_config",
    "modulation_run",
]

import math
from typing import Dict, NamedTuple, Tuple

import numpy as np
from scipy.signal import find_peaks

from ..config.logging import get_logger
from ..config.settings import (
    ACTIVITY_MIN_AMPLITUDE,
    DRIFT_DX_FACTOR,
    FINAL_WINDOW_FRACTION,
    PROMINENCE_FRACTION,
    SPEED_CV_MAX,
    STATIONARITY_THRESHOLD,
    TRAVEL_DX_FACTOR,
    TRAVEL_WOBBLE_RATIO,
)
from ..models.params import PatternKind, PatternReport, SimConfig
from ..shared.errors import DomainError, Inconclusive, NoFront
from .solver import SpaceTimeRecord, homogeneous_rest, simulate

logger = get_logger(__name__)

_MODULATED = ("lam", "alpha", "beta")


class FrontTrack(NamedTuple):
    """Outermost level-set crossings per frame; NaN where nothing is excited."""

    level: float
    amplitude: float
    left: np.ndarray
    right: np.ndarray


def _crossing(x: np.ndarray, u: np.ndarray, i: int, j: int, level: float) -> float:
    """Linear interpolation of the level crossing between cells i and j."""
    if u[i] == u[j]:
        return float(x[i])
    return float(x[i] + (level - u[i]) * (x[j] - x[i]) / (u[j] - u[i]))


def track_fronts(record: SpaceTimeRecord) -> FrontTrack:
    u_rest = homogeneous_rest(record.config.params, record.config.scales)[0]
    u_max = float(np.max(record.u))
    amplitude = u_max - u_rest
    level = u_rest + amplitude / 2
    x = record.x
    left = np.full(len(record.times), np.nan)
    right = np.full(len(record.times), np.nan)
    if amplitude < ACTIVITY_MIN_AMPLITUDE:
        return FrontTrack(level=level, amplitude=amplitude, left=left, right=right)

    for k, u in enumerate(record.u):
        excited = np.flatnonzero(u > level)
        if excited.size == 0:
            continue
        lo, hi = excited[0], excited[-1]
        left[k] = x[0] if lo == 0 else _crossing(x, u, lo - 1, lo, level)
        right[k] = x[-1] if hi == len(x) - 1 else _crossing(x, u, hi, hi + 1, level)
    return FrontTrack(level=level, amplitude=amplitude, left=left, right=right)


def _interior(positions: np.ndarray, record: SpaceTimeRecord) -> np.ndarray:
    """Frames after the forcing whose front lies clear of the boundaries."""
    grid = record.config.grid
    margin = TRAVEL_DX_FACTOR * grid.dx
    return (
        np.isfinite(positions)
        & (record.times >= record.config.perturbation.t_hi)
        & (positions > grid.x0 + margin)
        & (positions < grid.x1 - margin)
    )


class EdgeMotion(NamedTuple):
    """
    Least-squares motion of one front edge over the frames where it is tracked.
    `spread` is the robust (MAD-based) standard deviation of the slopes of ten
    consecutive sub-windows; `wobble` the largest departure from the fitted line.
    """

    velocity: float = math.nan
    spread: float = math.nan
    span: float = 0.0
    wobble: float = math.nan

    @property
    def displacement(self) -> float:
        return abs(self.velocity) * self.span


def _edge_motion(times: np.ndarray, positions: np.ndarray) -> EdgeMotion:
    if len(times) < 3:
        return EdgeMotion()
    velocity, intercept = np.polyfit(times, positions, 1)
    wobble = float(np.max(np.abs(positions - (velocity * times + intercept))))
    chunks = [c for c in np.array_split(np.arange(len(times)), 10) if len(c) >= 2]
    window_slopes = np.array(
        [
            (positions[c[-1]] - positions[c[0]]) / (times[c[-1]] - times[c[0]]) for c in chunks
        ]
    )
    spread = 0.0
    if len(window_slopes) > 1:
        spread = float(1.4826 * np.median(np.abs(window_slopes - np.median(window_slopes))))
    return EdgeMotion(
        velocity=float(velocity),
        spread=spread,
        span=float(times[-1] - times[0]),
        wobble=wobble,
    )


def _leading_edge(record: SpaceTimeRecord, track: FrontTrack) -> EdgeMotion:
    best = EdgeMotion()
    for positions in (track.left, track.right):
        valid = _interior(positions, record)
        candidate = _edge_motion(record.times[valid], positions[valid])
        if np.isfinite(candidate.velocity) and (
            not np.isfinite(best.velocity) or abs(candidate.velocity) > abs(best.velocity)
        ):
            best = candidate
    return best


def _to_wave_units(velocity: float, config: SimConfig) -> float:
    """Grid velocity dx/dt as the layer speed c of the ansatz (x/√D_u + c·t/τ_u)."""
    return -velocity * config.scales.tau_u / math.sqrt(config.scales.D_u)


def measure_wave_speed(record: SpaceTimeRecord) -> Tuple[float, float]:
    """(c_pde, stddev) of the leading front, in the units of find_cstar."""
    track = track_fronts(record)
    motion = _leading_edge(record, track)
    if not np.isfinite(motion.velocity):
        raise NoFront("no front crosses the interior of the domain")
    scale = record.config.scales.tau_u / math.sqrt(record.config.scales.D_u)
    return _to_wave_units(motion.velocity, record.config), motion.spread * scale


def _stationarity(record: SpaceTimeRecord) -> float:
    """Mean relative L² change of u per unit time over the final window."""
    start = int(len(record.times) * (1 - FINAL_WINDOW_FRACTION))
    start = min(start, len(record.times) - 2)
    u, t = record.u[start:], record.times[start:]
    if len(t) < 2:
        return 0.0
    drift = np.linalg.norm(np.diff(u, axis=0), axis=1) / np.diff(t)
    norms = np.maximum(np.linalg.norm(u[:-1], axis=1), 1e-300)
    return float(np.mean(drift / norms))


def _count_peaks(signal: np.ndarray, track: FrontTrack) -> int:
    peaks, _ = find_peaks(
        signal, height=track.level, prominence=PROMINENCE_FRACTION * track.amplitude
    )
    # a maximum pinned to the first sample is still a spike
    edge = signal[0] > track.level and signal[0] > signal[1]
    return len(peaks) + int(edge)


def _swept_spikes(record: SpaceTimeRecord, track: FrontTrack, positions: np.ndarray) -> int:
    """Spikes in u(t) at the midpoint of the region the front swept."""
    valid = _interior(positions, record)
    if not np.any(valid):
        return 0
    center_x = 0.5 * (np.min(positions[valid]) + np.max(positions[valid]))
    cell = int(np.argmin(np.abs(record.x - center_x)))
    return _count_peaks(record.u[:, cell], track)


def quasi_steady_mismatch(record: SpaceTimeRecord) -> float:
    """
    max |w − u| in the final frame outside the oscillatory core: the excited
    region widened by its own half-width on either side.
    """
    track = track_fronts(record)
    u, w, x = record.u[-1], record.w[-1], record.x
    excited = np.flatnonzero(u > track.level)
    if excited.size == 0:
        return float(np.max(np.abs(w - u)))
    lo, hi = x[excited[0]], x[excited[-1]]
    pad = 0.5 * (hi - lo)
    outside = (x < lo - pad) | (x > hi + pad)
    if not np.any(outside):
        return 0.0
    return float(np.max(np.abs(w - u)[outside]))


def classify_pattern(record: SpaceTimeRecord, strict: bool = False) -> PatternReport:
    """
    Decide the pattern kind from front tracking on the mid-level set
    u = (u_rest + u_max)/2, the stationarity of the final frames and the
    spike count. Undecidable records come back as `other` with their
    diagnostics, or raise Inconclusive when `strict`.
    """
    dx = record.config.grid.dx
    track = track_fronts(record)
    stationarity = _stationarity(record)
    diagnostics: Dict[str, float] = {
        "amplitude": track.amplitude,
        "level": track.level,
        "travel_threshold": TRAVEL_DX_FACTOR * dx,
        "drift_threshold": DRIFT_DX_FACTOR * dx,
        "stationarity_threshold": STATIONARITY_THRESHOLD,
        "prominence_fraction": PROMINENCE_FRACTION,
    }

    def report(kind: PatternKind, **kwargs) -> PatternReport:
        logger.info(f"classified record as {kind.value} ({kwargs})")
        return PatternReport(
            kind=kind,
            stationarity=stationarity,
            diagnostics={
                k: (float(v) if np.isfinite(v) else None) for k, v in diagnostics.items()
            },
            **kwargs,
        )

    if track.amplitude < ACTIVITY_MIN_AMPLITUDE or np.all(np.isnan(track.right)):
        return report(PatternKind.REST)

    motion = _leading_edge(record, track)
    diagnostics.update(
        velocity=motion.velocity,
        velocity_spread=motion.spread,
        tracked_span=motion.span,
        edge_wobble=motion.wobble,
    )
    # net advance must dominate the edge's excursions about its fitted line
    if (
        np.isfinite(motion.velocity)
        and motion.displacement > TRAVEL_DX_FACTOR * dx
        and motion.displacement > TRAVEL_WOBBLE_RATIO * motion.wobble
    ):
        edge = track.right if motion.velocity > 0 else track.left
        spikes = _swept_spikes(record, track, edge)
        diagnostics["swept_spikes"] = spikes
        # a burst's edge jumps forward spike by spike; only a lone pulse must move steadily
        if spikes >= 2 or motion.spread < SPEED_CV_MAX * abs(motion.velocity):
            scale = record.config.scales.tau_u / math.sqrt(record.config.scales.D_u)
            kind = PatternKind.TRAVELING_BURST if spikes >= 2 else PatternKind.TRAVELING_PULSE
            return report(
                kind,
                wave_speed=_to_wave_units(motion.velocity, record.config),
                speed_stddev=motion.spread * scale,
                spikes_per_burst=max(spikes, 1),
            )

    start = int(len(record.times) * (1 - FINAL_WINDOW_FRACTION))
    final_right = track.right[start:]
    if np.all(np.isnan(final_right)):
        # activity died out without traveling
        return report(PatternKind.REST)
    final_right = final_right[np.isfinite(final_right)]
    drift = float(np.max(final_right) - np.min(final_right))
    diagnostics["front_drift"] = drift
    if drift < DRIFT_DX_FACTOR * dx and stationarity < STATIONARITY_THRESHOLD:
        spikes = _count_peaks(record.u[-1], track)
        kind = PatternKind.STANDING_BURST if spikes >= 2 else PatternKind.STANDING_PULSE
        diagnostics["quasi_steady_mismatch"] = quasi_steady_mismatch(record)
        return report(kind, spikes_per_burst=max(spikes, 1))

    # breathing: the front oscillates about a fixed mean
    half = track.right[len(record.times) // 2 :]
    half_t = record.times[len(record.times) // 2 :][np.isfinite(half)]
    half = half[np.isfinite(half)]
    if len(half) >= 3:
        trend = np.polyfit(half_t, half, 1)[0] * (half_t[-1] - half_t[0])
        swing = 0.5 * float(np.max(half) - np.min(half))
        diagnostics.update(breathing_swing=swing, breathing_trend=float(trend))
        if swing > DRIFT_DX_FACTOR * dx and abs(trend) < swing:
            return report(PatternKind.BREATHING)

    if strict:
        raise Inconclusive(diagnostics)
    return report(PatternKind.OTHER)


def modulated_config(base: SimConfig, overrides: Dict[str, float]) -> SimConfig:
    unknown = set(overrides) - set(_MODULATED)
    if unknown:
        raise DomainError(f"modulation may only touch {_MODULATED}, got {sorted(unknown)}")
    return base._replace(params=base.params._replace(**overrides))


def modulation_run(
    base: SimConfig, overrides: Dict[str, float]
) -> Tuple[PatternReport, PatternReport]:
    """Run `base` and `base` with (λ, α, β) overridden; return both reports."""
    modulated = modulated_config(base, overrides)
    return classify_pattern(simulate(base)), classify_pattern(simulate(modulated))

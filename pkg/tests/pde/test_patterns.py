import math

import numpy as np
import pytest

from wcusp_waves.models import Grid1D, PatternKind, SolverStats
from wcusp_waves.pde import (
    SpaceTimeRecord,
    classify_pattern,
    homogeneous_rest,
    measure_wave_speed,
    modulated_config,
    modulation_run,
    quasi_steady_mismatch,
    track_fronts,
)
from wcusp_waves.shared.errors import DomainError, Inconclusive, NoFront

from ..utils import small_config

TIMES = np.linspace(0.0, 1.0, 101)


@pytest.fixture
def config():
    return small_config(grid=Grid1D(x0=0.0, x1=1.0, n=200), t_end=1.0)


def make_record(config, u_of_t) -> SpaceTimeRecord:
    """A record whose u is `u_rest + u_of_t(x, t)`; w and z follow u."""
    u_rest = homogeneous_rest(config.params, config.scales)[0]
    x = config.grid.centers
    u = np.array([u_rest + u_of_t(x, t) for t in TIMES])
    frames = np.stack([u, u, np.full_like(u, u_rest)], axis=1)
    return SpaceTimeRecord(times=TIMES, frames=frames, config=config, solver_stats=SolverStats())


def bump(x, center, width=0.05):
    return np.exp(-(((x - center) / width) ** 2))


def test_rest(config):
    record = make_record(config, lambda x, t: 0.0 * x)
    report = classify_pattern(record)
    assert report.kind is PatternKind.REST
    assert report.wave_speed is None
    assert np.all(np.isnan(track_fronts(record).right))
    with pytest.raises(NoFront):
        measure_wave_speed(record)


def test_traveling_front(config):
    velocity = 0.5
    record = make_record(
        config, lambda x, t: 0.5 * (1 - np.tanh((x - 0.1 - velocity * t) / 0.02))
    )
    report = classify_pattern(record)
    expected = -velocity * config.scales.tau_u / math.sqrt(config.scales.D_u)
    assert report.kind is PatternKind.TRAVELING_PULSE
    assert report.spikes_per_burst == 1
    assert report.wave_speed == pytest.approx(expected, rel=1e-2)
    assert report.speed_stddev < 0.1 * abs(expected)

    speed, _ = measure_wave_speed(record)
    assert speed == pytest.approx(expected, rel=1e-2)


def test_traveling_burst_with_uneven_edge(config):
    """Two spikes moving right while the whole group surges and lags."""

    def burst(x, t):
        center = 0.2 + 0.5 * t + 0.012 * np.sin(10 * np.pi * t)
        return bump(x, center, 0.03) + bump(x, center - 0.1, 0.03)

    record = make_record(config, burst)
    report = classify_pattern(record)
    assert report.kind is PatternKind.TRAVELING_BURST
    assert report.spikes_per_burst == 2
    expected = -0.5 * config.scales.tau_u / math.sqrt(config.scales.D_u)
    assert report.wave_speed == pytest.approx(expected, rel=0.05)

    # the edge speed varies by far more than a lone pulse is allowed
    diagnostics = report.diagnostics
    assert diagnostics["velocity_spread"] > 0.1 * abs(diagnostics["velocity"])
    assert diagnostics["swept_spikes"] == 2
    assert diagnostics["edge_wobble"] < 0.05


def test_breathing_front(config):
    """A plateau whose right edge swings about a fixed mean."""

    def breathing(x, t):
        right = 0.6 + 0.1 * np.cos(8 * np.pi * t)
        return 0.5 * (np.tanh((x - 0.3) / 0.01) - np.tanh((x - right) / 0.01))

    record = make_record(config, breathing)
    report = classify_pattern(record)
    assert report.kind is PatternKind.BREATHING
    assert report.wave_speed is None
    assert report.diagnostics["breathing_swing"] == pytest.approx(0.1, rel=0.05)
    assert abs(report.diagnostics["breathing_trend"]) < report.diagnostics["breathing_swing"]


def test_standing_pulse(config):
    record = make_record(config, lambda x, t: bump(x, 0.5))
    report = classify_pattern(record)
    assert report.kind is PatternKind.STANDING_PULSE
    assert report.spikes_per_burst == 1
    assert report.stationarity == 0.0
    # w = u everywhere in this record
    assert quasi_steady_mismatch(record) == 0.0
    assert report.diagnostics["quasi_steady_mismatch"] == 0.0


def test_standing_burst(config):
    record = make_record(config, lambda x, t: bump(x, 0.4, 0.03) + bump(x, 0.6, 0.03))
    report = classify_pattern(record)
    assert report.kind is PatternKind.STANDING_BURST
    assert report.spikes_per_burst == 2


def test_undecided_record(config):
    def plateau(x, t):
        height = 1.8 + 0.2 * np.sin(20 * t)
        return 0.5 * height * (np.tanh((x - 0.3) / 0.01) - np.tanh((x - 0.7) / 0.01))

    record = make_record(config, plateau)
    report = classify_pattern(record)
    assert report.kind is PatternKind.OTHER
    assert report.stationarity > 1e-3
    with pytest.raises(Inconclusive) as e:
        classify_pattern(record, strict=True)
    assert "stationarity_threshold" in e.value.diagnostics


def test_modulated_config(sim_config):
    modulated = modulated_config(sim_config, {"lam": 0.2, "beta": 0.4})
    assert modulated.params.lam == 0.2
    assert modulated.params.beta == 0.4
    assert modulated.params.alpha == sim_config.params.alpha
    assert modulated.grid == sim_config.grid

    with pytest.raises(DomainError):
        modulated_config(sim_config, {"gamma": 0.1})
    with pytest.raises(DomainError):
        modulation_run(sim_config, {"tau_u": 1.0})

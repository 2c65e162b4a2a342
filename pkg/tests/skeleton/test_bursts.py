import importlib
from types import SimpleNamespace

import numpy as np
import pytest

from wcusp_waves.config.settings import (
    MANIFOLD_TOL,
    SEAM_TOL,
    SPIKE_SWEEP_EPS_RANGE,
    SPIKE_SWEEP_POINTS,
)
from wcusp_waves.models import Direction, UnfoldingParams
from wcusp_waves.shared.errors import DomainError, LemmaConditionFailed
from wcusp_waves.skeleton import (
    build_front_wavetrain_skeleton,
    build_standing_burst_skeleton,
    build_standing_pulse_skeleton,
    build_traveling_burst_skeleton,
    is_non_increasing,
    spike_adding_sweep,
)


def assert_continuous(orbit, p):
    assert orbit.max_seam_gap() <= SEAM_TOL
    assert orbit.max_manifold_residual(p) <= MANIFOLD_TOL


def test_traveling_burst(fig8_params):
    orbit = build_traveling_burst_skeleton(fig8_params, 0.05)
    assert orbit.closed and not orbit.symmetric
    assert orbit.spike_count >= 1
    assert orbit.c == pytest.approx(0.3607, abs=2e-3)
    assert_continuous(orbit, fig8_params)

    directions = [jump.direction for jump in orbit.jumps]
    assert directions[0] is Direction.UP
    assert directions.count(Direction.UP) == orbit.spike_count
    assert all(a is not b for a, b in zip(directions[:-1], directions[1:]))
    assert orbit.jumps[0].base_u == pytest.approx(orbit.z_rest, abs=1e-9)

    # the burst ends back at rest
    assert abs(orbit.end[2] - orbit.z_rest) + abs(orbit.end[4]) <= 1e-2


def test_traveling_burst_needs_mirrored_diagram(standing_params):
    with pytest.raises(LemmaConditionFailed) as e:
        build_traveling_burst_skeleton(standing_params, 0.05)
    assert e.value.condition == "mirrored_hysteresis"


def test_traveling_burst_needs_gamma_zero():
    with pytest.raises(DomainError):
        build_traveling_burst_skeleton(UnfoldingParams(0.32, -0.08, 1 / 3, 0.1), 0.05)


def test_front_wavetrain(fig8_params):
    orbit = build_front_wavetrain_skeleton(fig8_params)
    assert orbit.spike_count == 2
    assert [j.direction for j in orbit.jumps] == [
        Direction.UP,
        Direction.DOWN,
        Direction.UP,
        Direction.DOWN,
    ]
    assert_continuous(orbit, fig8_params)


def test_standing_pulse(standing_params):
    orbit = build_standing_pulse_skeleton(standing_params)
    assert orbit.symmetric and orbit.closed
    assert orbit.spike_count == 1
    assert orbit.c == 0.0
    assert len(orbit.segments) == 6
    assert_continuous(orbit, standing_params)
    # the reflected half mirrors the first
    np.testing.assert_allclose(orbit.start[[0, 2]], orbit.end[[0, 2]], atol=1e-12)
    assert [j.direction for j in orbit.jumps] == [Direction.UP, Direction.DOWN]


def test_standing_burst_needs_unique_rest(fig8_params):
    with pytest.raises(LemmaConditionFailed) as e:
        build_standing_burst_skeleton(fig8_params, 0.1)
    assert e.value.condition == "unique_fixed_point"


def test_spike_adding_sweep_default_grid(fig8_params, monkeypatch):
    bursts = importlib.import_module("wcusp_waves.skeleton.bursts")
    seen = []

    def count_spikes(p, eps, c_star=None):
        seen.append(eps)
        return SimpleNamespace(spike_count=max(1, int(0.2 / eps)))

    monkeypatch.setattr(bursts, "build_traveling_burst_skeleton", count_spikes)
    sweep = spike_adding_sweep(fig8_params)
    expected = np.geomspace(*SPIKE_SWEEP_EPS_RANGE, SPIKE_SWEEP_POINTS)
    np.testing.assert_allclose(seen, expected)
    assert sweep.eps_us_tilde.tolist() == pytest.approx(expected.tolist())
    assert (sweep.status == "ok").all()
    assert is_non_increasing(sweep)


@pytest.mark.slow
def test_standing_burst(standing_params):
    orbit = build_standing_burst_skeleton(standing_params, 0.1, samples=24)
    assert orbit.symmetric and orbit.closed
    assert orbit.spike_count >= 1
    assert_continuous(orbit, standing_params)


@pytest.mark.slow
def test_spike_adding_sweep(fig8_params):
    # the CI-profile sweep
    sweep = spike_adding_sweep(fig8_params, np.geomspace(0.05, 1.0, 4))
    assert list(sweep.columns) == ["eps_us_tilde", "spike_count", "status"]
    ok = sweep[sweep.status == "ok"]
    assert len(ok) >= 2
    assert is_non_increasing(sweep)
    assert ok.spike_count.iloc[-1] == 1

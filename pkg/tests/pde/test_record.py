import numpy as np
import pandas as pd

from wcusp_waves.models import SolverStats
from wcusp_waves.pde import SpaceTimeRecord, export_csv, read_record, write_pgm, write_record


def make_record(config) -> SpaceTimeRecord:
    times = np.linspace(0.0, config.t_end, 6)
    x = config.grid.centers
    frames = np.stack([np.stack([np.sin(x + t), np.cos(x + t), x * t]) for t in times])
    return SpaceTimeRecord(
        times=times,
        frames=frames,
        config=config,
        solver_stats=SolverStats(steps=10, rejected=1, linear_solves=20),
    )


def test_write_read_record(tmp_path, sim_config):
    record = make_record(sim_config)
    paths = write_record(record, str(tmp_path))
    assert [p.rsplit("/", 1)[-1] for p in paths] == ["metadata.json", "u.f64", "w.f64", "z.f64"]

    loaded = read_record(str(tmp_path))
    np.testing.assert_array_equal(loaded.frames, record.frames)
    np.testing.assert_array_equal(loaded.times, record.times)
    assert loaded.config == sim_config
    assert loaded.solver_stats == record.solver_stats


def test_export_csv(tmp_path, sim_config):
    record = make_record(sim_config)
    path = export_csv(record, str(tmp_path / "record.csv"))
    frame = pd.read_csv(path, float_precision="round_trip")
    assert list(frame.columns) == ["t", "x", "u", "w", "z"]
    assert len(frame) == 6 * 64
    # %.17g is exact once parsed back with round-trip precision
    np.testing.assert_array_equal(frame.u.to_numpy(), record.u.ravel())


def test_write_pgm(tmp_path, sim_config):
    record = make_record(sim_config)
    path = write_pgm(record, str(tmp_path / "u.pgm"))
    with open(path, "rb") as f:
        data = f.read()
    header = b"P5\n64 6\n255\n"
    assert data.startswith(header)
    pixels = np.frombuffer(data[len(header) :], dtype=np.uint8)
    assert pixels.size == 6 * 64
    assert pixels.min() == 0 and pixels.max() == 255


def test_write_pgm_flat_record(tmp_path, sim_config):
    record = make_record(sim_config)
    record = record._replace(frames=np.zeros_like(record.frames))
    with open(write_pgm(record, str(tmp_path / "u.pgm")), "rb") as f:
        assert set(f.read()[len(b"P5\n64 6\n255\n") :]) == {0}

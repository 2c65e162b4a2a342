"""On-disk formats for space-time records."""

__all__ = ["write_record", "read_record", "export_csv", "write_pgm"]

import json
import os
from typing import List

import numpy as np
import pandas as pd

from ..config.logging import get_logger
from ..config.settings import RECORD_SCHEMA_VERSION
from ..models.schemas import RecordMetadataSchema
from .solver import FIELDS, SpaceTimeRecord

logger = get_logger(__name__)

METADATA_FILE = "metadata.json"
# raw little-endian float64, one row per frame, one column per cell
_RAW_DTYPE = "<f8"


def _field_path(directory: str, field: str) -> str:
    return os.path.join(directory, f"{field}.f64")


def write_record(record: SpaceTimeRecord, directory: str) -> List[str]:
    """Write the metadata JSON and one raw matrix per field; returns the paths."""
    os.makedirs(directory, exist_ok=True)
    paths = []
    for i, field in enumerate(FIELDS):
        path = _field_path(directory, field)
        np.ascontiguousarray(record.frames[:, i, :], dtype=_RAW_DTYPE).tofile(path)
        paths.append(path)

    metadata = RecordMetadataSchema().dump(
        {
            "schema_version": RECORD_SCHEMA_VERSION,
            "config": record.config,
            "times": record.times,
            "solver_stats": record.solver_stats,
            "fields_": list(FIELDS),
            "shape": list(record.frames[:, 0, :].shape),
        }
    )
    meta_path = os.path.join(directory, METADATA_FILE)
    with open(meta_path, "w") as f:
        json.dump(metadata, f, indent=2)
    logger.info(f"wrote record ({len(record.times)} frames) to {directory}")
    return [meta_path] + paths


def read_record(directory: str) -> SpaceTimeRecord:
    with open(os.path.join(directory, METADATA_FILE)) as f:
        metadata = RecordMetadataSchema().load(json.load(f))
    shape = tuple(metadata["shape"])
    fields = [
        np.fromfile(_field_path(directory, field), dtype=_RAW_DTYPE).reshape(shape)
        for field in metadata["fields_"]
    ]
    return SpaceTimeRecord(
        times=np.asarray(metadata["times"]),
        frames=np.stack(fields, axis=1),
        config=metadata["config"],
        solver_stats=metadata["solver_stats"],
    )


def export_csv(record: SpaceTimeRecord, path: str) -> str:
    """Long-format table with one row per (t, x)."""
    n_frames, n = record.u.shape
    frame = pd.DataFrame(
        {
            "t": np.repeat(record.times, n),
            "x": np.tile(record.x, n_frames),
            "u": record.u.ravel(),
            "w": record.w.ravel(),
            "z": record.z.ravel(),
        }
    )
    frame.to_csv(path, index=False, float_format="%.17g")
    return path


def write_pgm(record: SpaceTimeRecord, path: str) -> str:
    """Binary (P5) graymap of u: width = cells, height = frames, min→0 and max→255."""
    u = record.u
    lo, hi = float(np.min(u)), float(np.max(u))
    scaled = np.zeros_like(u) if hi == lo else (u - lo) / (hi - lo)
    pixels = np.round(scaled * 255).astype(np.uint8)
    n_frames, n = pixels.shape
    with open(path, "wb") as f:
        f.write(f"P5\n{n} {n_frames}\n255\n".encode("ascii"))
        f.write(pixels.tobytes())
    return path

"""Singular orbits: ordered slow arcs and fast jumps, plus their file format."""

__all__ = [
    "SegmentKind",
    "Segment",
    "SingularOrbit",
    "arc_segment",
    "jump_segment",
    "reflect_segments",
    "write_orbit",
    "ORBIT_COLUMNS",
]

import json
import os
from enum import Enum as EnumBaseClass
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..config.logging import get_logger
from ..core.unfolding import eval_gwcusp
from ..models.params import Direction, UnfoldingParams
from ..models.schemas import OrbitSidecarSchema
from .fronts import HeteroclinicJump

logger = get_logger(__name__)

ORBIT_COLUMNS = ["u", "v_u", "w", "v_w", "z", "v_z"]


class SegmentKind(EnumBaseClass):
    SLOW_ARC = "slow_arc"
    FAST_JUMP = "fast_jump"


class Segment(NamedTuple):
    kind: SegmentKind
    # (n, 6) rows of (u, v_u, w, v_w, z, v_z), z measured from rest
    samples: np.ndarray
    branch: str


class SingularOrbit(NamedTuple):
    segments: Tuple[Segment, ...]
    spike_count: int
    closed: bool
    symmetric: bool
    z_rest: float = 0.0
    c: float = 0.0
    jumps: Tuple[HeteroclinicJump, ...] = ()

    @property
    def start(self) -> np.ndarray:
        return self.segments[0].samples[0]

    @property
    def end(self) -> np.ndarray:
        return self.segments[-1].samples[-1]

    def max_seam_gap(self) -> float:
        gaps = [
            np.max(np.abs(a.samples[-1] - b.samples[0]))
            for a, b in zip(self.segments[:-1], self.segments[1:])
        ]
        return float(max(gaps)) if gaps else 0.0

    def max_manifold_residual(self, p: UnfoldingParams) -> float:
        """Largest |g| over the slow-arc samples."""
        worst = 0.0
        for seg in self.segments:
            if seg.kind is not SegmentKind.SLOW_ARC:
                continue
            u, w, z = seg.samples[:, 0], seg.samples[:, 2], seg.samples[:, 4]
            residual = eval_gwcusp(u, p._replace(lam=p.lam + w, alpha=p.alpha + z))
            worst = max(worst, float(np.max(np.abs(residual))))
        return worst

    def to_frame(self) -> pd.DataFrame:
        """One row per sample; the z column is absolute (z_rest added back)."""
        frames = []
        for i, seg in enumerate(self.segments):
            frame = pd.DataFrame(seg.samples, columns=ORBIT_COLUMNS)
            frame["z"] += self.z_rest
            frame.insert(0, "branch", seg.branch)
            frame.insert(0, "kind", seg.kind.value)
            frame.insert(0, "segment_index", i)
            frames.append(frame)
        return pd.concat(frames, ignore_index=True)


def arc_segment(samples: np.ndarray, branch: str) -> Segment:
    return Segment(kind=SegmentKind.SLOW_ARC, samples=samples, branch=branch)


def jump_segment(jump: HeteroclinicJump, v_w: float = 0.0, v_z: float = 0.0) -> Segment:
    n = len(jump.profile)
    samples = np.column_stack(
        [
            jump.profile[:, 0],
            jump.profile[:, 1],
            np.full(n, jump.w),
            np.full(n, v_w),
            np.full(n, jump.z),
            np.full(n, v_z),
        ]
    )
    return Segment(kind=SegmentKind.FAST_JUMP, samples=samples, branch=jump.direction.value)


_FLIP = np.array([1.0, -1.0, 1.0, -1.0, 1.0, -1.0])


def reflect_segments(segments: Sequence[Segment]) -> List[Segment]:
    """
    The mirror half of a symmetric orbit: (u, v_u, w, v_w, z, v_z)(ξ) ↦
    (u, −v_u, w, −v_w, z, −v_z)(−ξ). Up-jumps come back as down-jumps.
    """
    mirrored = []
    for seg in reversed(segments):
        branch = seg.branch
        if seg.kind is SegmentKind.FAST_JUMP:
            branch = (
                Direction.DOWN.value if branch == Direction.UP.value else Direction.UP.value
            )
        mirrored.append(seg._replace(samples=seg.samples[::-1] * _FLIP, branch=branch))
    return mirrored


def write_orbit(
    orbit: SingularOrbit, directory: str, checks: Optional[dict] = None
) -> Tuple[str, str]:
    """Write `orbit.csv` and its JSON sidecar into `directory`."""
    os.makedirs(directory, exist_ok=True)
    csv_path = os.path.join(directory, "orbit.csv")
    json_path = os.path.join(directory, "orbit.json")
    orbit.to_frame().to_csv(csv_path, index=False, float_format="%.17g")

    sidecar = OrbitSidecarSchema().dump(
        {
            "spike_count": orbit.spike_count,
            "c_star": orbit.c,
            "closed": orbit.closed,
            "symmetric": orbit.symmetric,
            "z_rest": orbit.z_rest,
            "jumps": [jump._asdict() for jump in orbit.jumps],
            "checks": checks or {},
        }
    )
    with open(json_path, "w") as f:
        json.dump(sidecar, f, indent=2, sort_keys=True)
    logger.info(f"wrote orbit with {len(orbit.segments)} segments to {directory}")
    return csv_path, json_path

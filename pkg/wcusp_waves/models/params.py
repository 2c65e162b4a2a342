"""Parameter and configuration types shared across the package."""

__all__ = [
    "UnfoldingParams",
    "ScaleParams",
    "Grid1D",
    "Perturbation",
    "InitialFields",
    "SimConfig",
    "Direction",
    "PatternKind",
    "Command",
    "SolverStats",
    "PatternReport",
    "ExperimentManifest",
    "FigurePanel",
    "FigureConfig",
]

import math
from enum import Enum as EnumBaseClass
from typing import Dict, NamedTuple, Optional, Tuple

import numpy as np


class UnfoldingParams(NamedTuple):
    """
    Coordinates (λ, α, β, γ) of the winged-cusp unfolding
    g(u, λ, α, β, γ) = −u³ − λ² − α + βu + γuλ.

    `lam` is serialized under the key "lambda".
    """

    lam: float
    alpha: float
    beta: float
    gamma: float

    def shifted(self, dz: float) -> "UnfoldingParams":
        """The same unfolding seen at ultraslow value `dz` (α̃ = α + dz)."""
        return self._replace(alpha=self.alpha + dz)


class ScaleParams(NamedTuple):
    tau_u: float
    tau_w: float
    tau_z: float
    D_u: float
    D_w: float
    D_z: float

    @property
    def eps_s(self) -> float:
        return self.tau_u / self.tau_w

    @property
    def eps_us(self) -> float:
        return self.tau_u / self.tau_z

    @property
    def delta_l(self) -> float:
        return math.sqrt(self.D_u / self.D_w) if self.D_w > 0 else math.inf

    @property
    def delta_ul(self) -> float:
        return math.sqrt(self.D_u / self.D_z) if self.D_z > 0 else math.inf


class Grid1D(NamedTuple):
    """A uniform cell-centered grid of `n` cells on [x0, x1]."""

    x0: float
    x1: float
    n: int

    @property
    def dx(self) -> float:
        return (self.x1 - self.x0) / self.n

    @property
    def centers(self) -> np.ndarray:
        return self.x0 + (np.arange(self.n) + 0.5) * self.dx


class Perturbation(NamedTuple):
    """Source term `amplitude` on x_lo < x < x_hi while t_lo < t < t_hi."""

    x_lo: float
    x_hi: float
    t_lo: float
    t_hi: float
    amplitude: float = 1.0

    def window(self, x: np.ndarray) -> np.ndarray:
        return ((x > self.x_lo) & (x < self.x_hi)).astype(float)

    def active(self, t: float) -> bool:
        return self.t_lo < t < self.t_hi


class InitialFields(NamedTuple):
    u: np.ndarray
    w: np.ndarray
    z: np.ndarray


class SimConfig(NamedTuple):
    grid: Grid1D
    scales: ScaleParams
    params: UnfoldingParams
    t_end: float
    dt_out: float
    dt_max: float
    perturbation: Perturbation
    # None means "start from the homogeneous rest state"
    initial: Optional[InitialFields] = None
    reaction: bool = True
    step_tol: float = 1e-3


class Direction(EnumBaseClass):
    UP = "up"
    DOWN = "down"


class PatternKind(EnumBaseClass):
    REST = "rest"
    TRAVELING_PULSE = "traveling_pulse"
    TRAVELING_BURST = "traveling_burst"
    STANDING_PULSE = "standing_pulse"
    STANDING_BURST = "standing_burst"
    BREATHING = "breathing"
    OTHER = "other"

    @property
    def is_traveling(self) -> bool:
        return self in (PatternKind.TRAVELING_PULSE, PatternKind.TRAVELING_BURST)

    @property
    def is_standing(self) -> bool:
        return self in (PatternKind.STANDING_PULSE, PatternKind.STANDING_BURST)


class Command(EnumBaseClass):
    CLASSIFY = "classify"
    SKELETON = "skeleton"
    SHOOT = "shoot"
    SIMULATE = "simulate"
    MODULATE = "modulate"
    FIGURE = "figure"


class SolverStats(NamedTuple):
    steps: int = 0
    rejected: int = 0
    linear_solves: int = 0


class PatternReport(NamedTuple):
    kind: PatternKind
    stationarity: float
    wave_speed: Optional[float] = None
    speed_stddev: Optional[float] = None
    spikes_per_burst: Optional[int] = None
    # thresholds used and intermediate measurements
    diagnostics: Dict[str, float] = {}


class ExperimentManifest(NamedTuple):
    name: str
    command: Command
    output_dir: str
    config_paths: Tuple[str, ...] = ()
    artifacts: Tuple[str, ...] = ()
    version: str = ""
    deterministic: bool = True


class FigurePanel(NamedTuple):
    """One simulation of a figure: overrides on the figure's base setup."""

    name: str
    # None records the panel without asserting its kind
    expected_kind: Optional[PatternKind]
    beta: Optional[float] = None
    # offsets from the pitchfork values (keys "lam", "alpha")
    pitchfork_offsets: Optional[Dict[str, float]] = None
    scale_overrides: Dict[str, float] = {}


class FigureConfig(NamedTuple):
    id: str
    title: str
    beta: float
    pitchfork_offsets: Dict[str, float]
    grid: Grid1D
    ci_n: int
    scales: ScaleParams
    t_end: float
    dt_out: float
    dt_max: float
    perturbation: Perturbation
    panels: Tuple[FigurePanel, ...]

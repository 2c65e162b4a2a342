__all__ = [
    "BaseSchema",
    "UnfoldingParamsSchema",
    "ScaleParamsSchema",
    "Grid1DSchema",
    "PerturbationSchema",
    "InitialFieldsSchema",
    "SimConfigSchema",
    "SolverStatsSchema",
    "RecordMetadataSchema",
    "PatternReportSchema",
    "JumpSchema",
    "OrbitSidecarSchema",
    "ExperimentManifestSchema",
    "FigurePanelSchema",
    "FigureConfigSchema",
    "FigureConfigListSchema",
    "SKELETON_KINDS",
    "SkeletonRequestSchema",
]

import numpy as np
from marshmallow import (
    RAISE,
    Schema,
    ValidationError,
    fields,
    post_load,
    validate,
    validates_schema,
)

from .params import (
    Command,
    Direction,
    ExperimentManifest,
    FigureConfig,
    FigurePanel,
    Grid1D,
    InitialFields,
    PatternKind,
    PatternReport,
    Perturbation,
    ScaleParams,
    SimConfig,
    SolverStats,
    UnfoldingParams,
)

_POSITIVE = validate.Range(min=0, min_inclusive=False)
_NONNEGATIVE = validate.Range(min=0)


class BaseSchema(Schema):
    class Meta:
        ordered = True
        unknown = RAISE

    # NamedTuple type built by `post_load`; None keeps the loaded dict
    __model__ = None

    @post_load
    def make_object(self, data, **kwargs):
        if self.__model__ is None:
            return data
        return self.__model__(**data)


class _ListMetadata(BaseSchema):
    total = fields.Int(required=True)


def _make_list_schema(schema: BaseSchema):
    class ListSchema(BaseSchema):
        _items = fields.List(fields.Nested(schema), required=True)
        _meta = fields.Nested(_ListMetadata(), required=True)

    return ListSchema


class UnfoldingParamsSchema(BaseSchema):
    __model__ = UnfoldingParams

    lam = fields.Float(data_key="lambda", required=True, allow_nan=False)
    alpha = fields.Float(required=True, allow_nan=False)
    beta = fields.Float(required=True, allow_nan=False)
    gamma = fields.Float(required=True, allow_nan=False)


class ScaleParamsSchema(BaseSchema):
    __model__ = ScaleParams

    tau_u = fields.Float(required=True, validate=_POSITIVE)
    tau_w = fields.Float(required=True, validate=_POSITIVE)
    tau_z = fields.Float(required=True, validate=_POSITIVE)
    D_u = fields.Float(required=True, validate=_POSITIVE)
    D_w = fields.Float(required=True, validate=_NONNEGATIVE)
    D_z = fields.Float(required=True, validate=_NONNEGATIVE)

    @validates_schema
    def validate_hierarchy(self, data, **kwargs):
        """ε_us ≤ ε_s, and δ_ul ≤ δ_l whenever δ_ul is finite."""
        if data["tau_z"] < data["tau_w"]:
            raise ValidationError("tau_z must be at least tau_w (eps_us <= eps_s)", "tau_z")
        if data["D_z"] > 0 and data["D_w"] > data["D_z"]:
            raise ValidationError("D_z must be at least D_w (delta_ul <= delta_l)", "D_z")
        if data["D_z"] == 0 and data["D_w"] > 0:
            raise ValidationError("D_z = 0 with D_w > 0 makes delta_ul exceed delta_l", "D_z")


class Grid1DSchema(BaseSchema):
    __model__ = Grid1D

    x0 = fields.Float(required=True)
    x1 = fields.Float(required=True)
    n = fields.Int(required=True, validate=validate.Range(min=16))

    @validates_schema
    def validate_extent(self, data, **kwargs):
        if data["x1"] <= data["x0"]:
            raise ValidationError("x1 must exceed x0", "x1")


class PerturbationSchema(BaseSchema):
    __model__ = Perturbation

    x_lo = fields.Float(required=True)
    x_hi = fields.Float(required=True)
    t_lo = fields.Float(required=True, validate=_NONNEGATIVE)
    t_hi = fields.Float(required=True)
    amplitude = fields.Float(load_default=1.0)

    @validates_schema
    def validate_window(self, data, **kwargs):
        if data["x_hi"] <= data["x_lo"] or data["t_hi"] <= data["t_lo"]:
            raise ValidationError("perturbation window is empty")


class _ArrayField(fields.List):
    def __init__(self, **kwargs):
        super().__init__(fields.Float(), **kwargs)

    def _deserialize(self, value, attr, data, **kwargs):
        return np.asarray(super()._deserialize(value, attr, data, **kwargs), dtype=float)


class InitialFieldsSchema(BaseSchema):
    __model__ = InitialFields

    u = _ArrayField(required=True)
    w = _ArrayField(required=True)
    z = _ArrayField(required=True)


class SimConfigSchema(BaseSchema):
    __model__ = SimConfig

    grid = fields.Nested(Grid1DSchema, required=True)
    scales = fields.Nested(ScaleParamsSchema, required=True)
    params = fields.Nested(UnfoldingParamsSchema, required=True)
    t_end = fields.Float(required=True, validate=_POSITIVE)
    dt_out = fields.Float(required=True, validate=_POSITIVE)
    dt_max = fields.Float(required=True, validate=_POSITIVE)
    perturbation = fields.Nested(PerturbationSchema, required=True)
    # absent or null means "homogeneous rest"
    initial = fields.Nested(InitialFieldsSchema, allow_none=True, load_default=None)
    reaction = fields.Bool(load_default=True)
    step_tol = fields.Float(load_default=1e-3, validate=_POSITIVE)

    @validates_schema
    def validate_config(self, data, **kwargs):
        grid, pert = data["grid"], data["perturbation"]
        if pert.x_lo < grid.x0 or pert.x_hi > grid.x1:
            raise ValidationError("perturbation window leaves the domain", "perturbation")
        if pert.t_hi > data["t_end"]:
            raise ValidationError("perturbation outlasts the run", "perturbation")
        initial = data.get("initial")
        if initial is not None and any(len(f) != grid.n for f in initial):
            raise ValidationError("initial fields must have one value per cell", "initial")


class SolverStatsSchema(BaseSchema):
    __model__ = SolverStats

    steps = fields.Int(required=True)
    rejected = fields.Int(required=True)
    linear_solves = fields.Int(required=True)


class RecordMetadataSchema(BaseSchema):
    schema_version = fields.Str(required=True)
    config = fields.Nested(SimConfigSchema, required=True)
    times = fields.List(fields.Float(), required=True)
    solver_stats = fields.Nested(SolverStatsSchema, required=True)
    fields_ = fields.List(fields.Str(), data_key="fields", required=True)
    shape = fields.List(fields.Int(), required=True)


class PatternReportSchema(BaseSchema):
    __model__ = PatternReport

    kind = fields.Enum(PatternKind, by_value=True, required=True)
    stationarity = fields.Float(required=True)
    wave_speed = fields.Float(allow_none=True, load_default=None)
    speed_stddev = fields.Float(allow_none=True, load_default=None)
    spikes_per_burst = fields.Int(allow_none=True, load_default=None)
    diagnostics = fields.Dict(keys=fields.Str(), values=fields.Raw(), load_default=dict)


class JumpSchema(BaseSchema):
    w = fields.Float(required=True)
    z = fields.Float(required=True)
    c = fields.Float(required=True)
    direction = fields.Enum(Direction, by_value=True, required=True)
    base_u = fields.Float(required=True)
    land_u = fields.Float(required=True)
    profile = fields.Raw(load_only=True)


class OrbitSidecarSchema(BaseSchema):
    spike_count = fields.Int(required=True)
    c_star = fields.Float(required=True)
    closed = fields.Bool(required=True)
    symmetric = fields.Bool(required=True)
    z_rest = fields.Float(required=True)
    jumps = fields.List(fields.Nested(JumpSchema), required=True)
    checks = fields.Dict(keys=fields.Str(), values=fields.Raw(), load_default=dict)


class ExperimentManifestSchema(BaseSchema):
    __model__ = ExperimentManifest

    name = fields.Str(required=True)
    command = fields.Enum(Command, by_value=True, required=True)
    output_dir = fields.Str(required=True)
    config_paths = fields.List(fields.Str(), load_default=list)
    artifacts = fields.List(fields.Str(), load_default=list)
    version = fields.Str(load_default="")
    deterministic = fields.Bool(load_default=True)

    @post_load
    def make_object(self, data, **kwargs):
        data["config_paths"] = tuple(data["config_paths"])
        data["artifacts"] = tuple(data["artifacts"])
        return ExperimentManifest(**data)


class _PitchforkOffsetsSchema(BaseSchema):
    lam = fields.Float(data_key="lambda", required=True)
    alpha = fields.Float(required=True)


class FigurePanelSchema(BaseSchema):
    __model__ = FigurePanel

    name = fields.Str(required=True)
    expected_kind = fields.Enum(PatternKind, by_value=True, required=True, allow_none=True)
    beta = fields.Float(allow_none=True, load_default=None)
    pitchfork_offsets = fields.Nested(
        _PitchforkOffsetsSchema, allow_none=True, load_default=None
    )
    scale_overrides = fields.Dict(
        keys=fields.Str(validate=validate.OneOf(ScaleParams._fields)),
        values=fields.Float(),
        load_default=dict,
    )


class FigureConfigSchema(BaseSchema):
    __model__ = FigureConfig

    id = fields.Str(required=True)
    title = fields.Str(required=True)
    beta = fields.Float(required=True)
    pitchfork_offsets = fields.Nested(_PitchforkOffsetsSchema, required=True)
    grid = fields.Nested(Grid1DSchema, required=True)
    ci_n = fields.Int(required=True, validate=validate.Range(min=16))
    scales = fields.Nested(ScaleParamsSchema, required=True)
    t_end = fields.Float(required=True, validate=_POSITIVE)
    dt_out = fields.Float(required=True, validate=_POSITIVE)
    dt_max = fields.Float(required=True, validate=_POSITIVE)
    perturbation = fields.Nested(PerturbationSchema, required=True)
    panels = fields.List(
        fields.Nested(FigurePanelSchema), required=True, validate=validate.Length(min=1)
    )

    @post_load
    def make_object(self, data, **kwargs):
        data["panels"] = tuple(data["panels"])
        return FigureConfig(**data)


FigureConfigListSchema = _make_list_schema(FigureConfigSchema())


SKELETON_KINDS = ("traveling", "standing", "wavetrain", "standing_pulse")


class SkeletonRequestSchema(BaseSchema):
    """
    Input of the `skeleton` command. Parameters come either inline (in the
    lemma frame unless `frame` is "pde") or from a figure panel, whose
    parameters are always PDE parameters.
    """

    kind = fields.Str(required=True, validate=validate.OneOf(SKELETON_KINDS))
    frame = fields.Str(load_default="lemma", validate=validate.OneOf(["lemma", "pde"]))
    params = fields.Nested(UnfoldingParamsSchema, allow_none=True, load_default=None)
    figure = fields.Str(allow_none=True, load_default=None)
    panel = fields.Str(allow_none=True, load_default=None)
    eps_us_tilde = fields.Float(allow_none=True, load_default=None, validate=_POSITIVE)
    delta_ul_tilde = fields.Float(allow_none=True, load_default=None, validate=_POSITIVE)
    z_bar = fields.Float(load_default=0.0)

    @validates_schema
    def validate_request(self, data, **kwargs):
        if (data["params"] is None) == (data["figure"] is None):
            raise ValidationError("give exactly one of params or figure")
        if data["kind"] == "traveling" and data["eps_us_tilde"] is None:
            raise ValidationError("traveling skeletons need eps_us_tilde", "eps_us_tilde")
        if data["kind"] == "standing" and data["delta_ul_tilde"] is None:
            raise ValidationError("standing skeletons need delta_ul_tilde", "delta_ul_tilde")

"""
Experiment configuration models.

One ``BaseModel`` per top-level section of the JSON config; unknown keys are
rejected with their full key path and missing keys take the defaults below.
"""
from dataclasses import fields
from pathlib import Path, PurePath
from typing import Any, Optional, Union, get_args, get_origin, get_type_hints
from datamodel import BaseModel, Column
from datamodel.exceptions import ValidationError
from .conf import (
    DEFAULT_EPSILON,
    DEFAULT_ETA_FRACTIONS,
    GL_ORDER,
    QUAD_MAX_DEPTH,
    QUAD_RTOL,
    TAIL_TOL,
    THERMAL_IMAGES,
    WPROBE_OUTPUT_DIR
)
from .exceptions import ConfigError
from .libs.json import json_decoder


class DetectorSection(BaseModel):
    gap: float = Column(required=False, default=1.0)
    coupling: float = Column(required=False, default=0.01)

    class Meta:
        strict = True
        frozen = False


class FieldSection(BaseModel):
    """Scalar field; ``model`` picks closed forms, mode integrals or ``auto``."""
    mass: float = Column(required=False, default=0.0)
    dim: int = Column(required=False, default=3)
    normalization: str = Column(required=False, default="canonical")
    ir_cutoff: Optional[float] = None
    model: str = Column(required=False, default="auto")

    class Meta:
        strict = True
        frozen = False


class StateSection(BaseModel):
    kind: str = Column(required=False, default="vacuum")
    beta: Optional[float] = None
    omega: Optional[float] = None
    n: int = Column(required=False, default=0)

    class Meta:
        strict = True
        frozen = False


class TrajectorySection(BaseModel):
    kind: str = Column(required=False, default="inertial")
    a: Optional[float] = None
    v: float = Column(required=False, default=0.0)

    class Meta:
        strict = True
        frozen = False


class CombSection(BaseModel):
    shape: str = Column(required=False, default="gaussian")
    sharpness: float = Column(required=False, default=1.0)
    eta: float = Column(required=False, default=0.05)
    tau0: float = Column(required=False, default=0.0)
    zeta: float = Column(required=False, default=1.0)
    teeth: int = Column(required=False, default=2)

    class Meta:
        strict = True
        frozen = False


class ProtocolSection(BaseModel):
    zeta_grid: list = Column(required=False, default_factory=lambda: [0.5, 1.0, 2.0])
    tau0: float = Column(required=False, default=0.0)
    k_even: int = Column(required=False, default=1)
    k_quarter: int = Column(required=False, default=1)
    route: str = Column(required=False, default="measured")
    eta_fractions: list = Column(required=False, default_factory=lambda: list(DEFAULT_ETA_FRACTIONS))

    class Meta:
        strict = True
        frozen = False


class SweepSection(BaseModel):
    etas: list = Column(required=False, default_factory=lambda: [0.2, 0.1, 0.05, 0.025])
    extrapolation_order: Optional[int] = None

    class Meta:
        strict = True
        frozen = False


class ScalingSection(BaseModel):
    dims: list = Column(required=False, default_factory=lambda: [3])
    eta_min: float = Column(required=False, default=0.01)
    eta_max: float = Column(required=False, default=0.1)
    points: int = Column(required=False, default=8)
    normalization: str = Column(required=False, default="as_printed")

    class Meta:
        strict = True
        frozen = False


class QuadratureSection(BaseModel):
    tol: float = Column(required=False, default=QUAD_RTOL)
    max_depth: int = Column(required=False, default=QUAD_MAX_DEPTH)
    order: int = Column(required=False, default=GL_ORDER)
    tail_tol: float = Column(required=False, default=TAIL_TOL)
    method: str = Column(required=False, default="auto")

    class Meta:
        strict = True
        frozen = False


class RegulatorSection(BaseModel):
    epsilon: float = Column(required=False, default=DEFAULT_EPSILON)
    images: int = Column(required=False, default=THERMAL_IMAGES)

    class Meta:
        strict = True
        frozen = False


class OutputSection(BaseModel):
    directory: str = Column(required=False, default=WPROBE_OUTPUT_DIR)
    stem: str = Column(required=False, default="wprobe")

    class Meta:
        strict = True
        frozen = False


class RunManifest(BaseModel):
    """What a CLI run produced; every written file is listed in ``outputs``."""
    command: str = Column(required=True)
    version: str = Column(required=True)
    config: dict = Column(required=False, default_factory=dict)
    duration: float = Column(required=False, default=0.0)
    outputs: list = Column(required=False, default_factory=list)
    errors: dict = Column(required=False, default_factory=dict)

    class Meta:
        strict = True
        frozen = False

    def snapshot(self) -> dict[str, Any]:
        return {
            "command": self.command,
            "version": self.version,
            "config": self.config,
            "duration": self.duration,
            "outputs": list(self.outputs),
            "errors": dict(self.errors),
        }


SECTIONS: dict[str, type[BaseModel]] = {
    "detector": DetectorSection,
    "field": FieldSection,
    "state": StateSection,
    "trajectory": TrajectorySection,
    "comb": CombSection,
    "protocol": ProtocolSection,
    "sweep": SweepSection,
    "scaling": ScalingSection,
    "quadrature": QuadratureSection,
    "regulator": RegulatorSection,
    "output": OutputSection,
}

# JSON key -> model field, per section.
ALIASES: dict[str, dict[str, str]] = {
    "detector": {"lambda": "coupling"},
}

# element type of list-valued keys.
LIST_ELEMENTS: dict[str, type] = {
    "protocol.zeta_grid": float,
    "protocol.eta_fractions": float,
    "sweep.etas": float,
    "scaling.dims": int,
}


def _coerce(path: str, value: Any, annotation: Any) -> Any:
    if get_origin(annotation) is Union:
        if value is None:
            return None
        annotation = next(a for a in get_args(annotation) if a is not type(None))
    if value is None:
        raise ConfigError(f"{path}: null is not allowed here", key=path)
    if annotation is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{path}: expected a number, got {value!r}", key=path)
        return float(value)
    if annotation is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
            raise ConfigError(f"{path}: expected an integer, got {value!r}", key=path)
        return int(value)
    if annotation is str and not isinstance(value, str):
        raise ConfigError(f"{path}: expected a string, got {value!r}", key=path)
    if annotation is list:
        if not isinstance(value, list):
            raise ConfigError(f"{path}: expected a list, got {value!r}", key=path)
        element = LIST_ELEMENTS.get(path)
        if element is None:
            return list(value)
        return [_coerce(f"{path}[{i}]", v, element) for i, v in enumerate(value)]
    return value


def _section(name: str, data: Any) -> BaseModel:
    model = SECTIONS[name]
    if not isinstance(data, dict):
        raise ConfigError(f"{name}: expected an object, got {data!r}", key=name)
    aliases = ALIASES.get(name, {})
    hints = get_type_hints(model)
    names = {f.name for f in fields(model)}
    kwargs = {}
    for key, value in data.items():
        attr = aliases.get(key, key)
        if attr not in names or (attr in aliases.values() and key not in aliases):
            raise ConfigError(f"Unknown configuration key '{name}.{key}'", key=f"{name}.{key}")
        kwargs[attr] = _coerce(f"{name}.{key}", value, hints[attr])
    try:
        return model(**kwargs)
    except ValidationError as ex:
        raise ConfigError(f"Invalid section '{name}': {ex.payload}", key=name) from ex
    except (TypeError, ValueError) as ex:
        raise ConfigError(f"Invalid section '{name}': {ex}", key=name) from ex


class ExperimentConfig:
    """Resolved experiment configuration: every section, defaults applied."""

    def __init__(self, data: Optional[dict] = None):
        data = {} if data is None else data
        if not isinstance(data, dict):
            raise ConfigError(f"configuration must be a JSON object, got {type(data).__name__}")
        for key in data:
            if key not in SECTIONS:
                raise ConfigError(f"Unknown configuration key '{key}'", key=key)
        self.given = set(data)
        for name in SECTIONS:
            setattr(self, name, _section(name, data.get(name, {})))

    def has(self, name: str) -> bool:
        """Whether the section was present in the input (rather than defaulted)."""
        return name in self.given

    def resolved(self) -> dict[str, Any]:
        """The configuration with defaults applied, under its JSON key names."""
        result = {}
        for name in SECTIONS:
            section = getattr(self, name)
            reverse = {v: k for k, v in ALIASES.get(name, {}).items()}
            result[name] = {
                reverse.get(f.name, f.name): getattr(section, f.name) for f in fields(section)
            }
        return result


def load_config(source: Union[str, PurePath, dict]) -> ExperimentConfig:
    """Build an :class:`ExperimentConfig` from a JSON file path or a parsed dict."""
    if isinstance(source, dict):
        return ExperimentConfig(source)
    path = Path(source)
    try:
        data = json_decoder(path.read_bytes())
    except FileNotFoundError as ex:
        raise ConfigError(f"Config file {path} not found", key=str(path)) from ex
    except ValueError as ex:
        raise ConfigError(f"Config file {path} is not valid JSON: {ex}", key=str(path)) from ex
    return ExperimentConfig(data)

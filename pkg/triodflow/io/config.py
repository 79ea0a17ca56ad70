"""Run configuration: a single JSON document validated against a schema."""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
from jsonschema import Draft7Validator
from jsonschema.exceptions import best_match

from ..anisotropy import Anisotropy
from ..config import ToolConfig
from ..errors import ConfigValidationError, ParseError
from ..flow.config import FlowConfig
from ..network import TriodNetwork
from ..reparam import to_constant_speed

logger = logging.getLogger(__name__)

_point = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

RUN_CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "anisotropy": {
            "type": "object",
            "properties": {
                "family": {"enum": ["isotropic", "fourier", "elliptic"]},
                "a": {"type": "number", "exclusiveMinimum": -1, "exclusiveMaximum": 1},
                "k": {"type": "integer", "minimum": 2},
                "theta0": {"type": "number"},
                "A": {"type": "array", "items": _point, "minItems": 2, "maxItems": 2},
            },
            "required": ["family"],
            "additionalProperties": False,
        },
        "endpoints": {"type": "array", "items": _point, "minItems": 3, "maxItems": 3},
        "initial": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["straight", "polylines"]},
                "junction": _point,
                "curves": {
                    "type": "array",
                    "items": {"type": "array", "items": _point, "minItems": 5},
                    "minItems": 3,
                    "maxItems": 3,
                },
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        "flow": {
            "type": "object",
            "properties": {
                "N": {"type": "integer", "minimum": 4},
                "cfl": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "t_max": {"type": "number", "exclusiveMinimum": 0},
                "L_min": {"type": "number", "exclusiveMinimum": 0},
                "K_max": {"type": "number", "exclusiveMinimum": 0},
                "newton_tol": {"type": "number", "exclusiveMinimum": 0},
                "newton_max_iter": {"type": "integer", "minimum": 1},
                "reparam_every": {"type": "integer", "minimum": 0},
                "delta_reg": {"type": "number", "exclusiveMinimum": 0},
                "a0_floor": {"type": "number", "exclusiveMinimum": 0},
                "admissibility_tol": {"type": "number", "exclusiveMinimum": 0},
                "strict": {"type": "boolean"},
                "fd_step": {"type": "number", "exclusiveMinimum": 0},
                "ellipticity_samples": {"type": "integer", "minimum": 360},
            },
            "additionalProperties": False,
        },
        "output": {
            "type": "object",
            "properties": {
                "csv": {"type": "string", "minLength": 1},
                "snapshots": {"type": ["string", "null"]},
                "snapshot_every": {"type": "integer", "minimum": 1},
                "svg_every": {"type": "integer", "minimum": 0},
                "svg_dir": {"type": ["string", "null"]},
            },
            "additionalProperties": False,
        },
    },
    "required": ["anisotropy", "endpoints"],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class InitialSpec:
    kind: str = "straight"
    junction: Optional[Tuple[float, float]] = None
    curves: Optional[Tuple] = None

    def to_dict(self):
        if self.kind == "polylines":
            return {"kind": "polylines", "curves": [[list(p) for p in c] for c in self.curves]}
        return {"kind": "straight", "junction": list(self.junction)}


@dataclass(frozen=True)
class OutputConfig:
    csv: str = "run.csv"
    snapshots: Optional[str] = None
    snapshot_every: int = 100
    svg_every: int = 0
    svg_dir: Optional[str] = None

    def to_dict(self):
        return {
            "csv": self.csv,
            "snapshots": self.snapshots,
            "snapshot_every": self.snapshot_every,
            "svg_every": self.svg_every,
            "svg_dir": self.svg_dir,
        }

    def paths(self, base_dir=None):
        """Resolve output locations against ``base_dir`` (or TRIODFLOW_OUTPUT_DIR)."""
        base = Path(ToolConfig.get("output_dir") or base_dir or ".")

        def resolve(p):
            p = Path(p)
            return p if p.is_absolute() else base / p

        csv_path = resolve(self.csv)
        snapshots = resolve(self.snapshots) if self.snapshots else None
        if self.svg_dir:
            svg_dir = resolve(self.svg_dir)
        else:
            svg_dir = csv_path.with_name(f"{csv_path.stem}_frames")
        return csv_path, snapshots, svg_dir


@dataclass(frozen=True)
class RunConfig:
    anisotropy: Anisotropy
    endpoints: Tuple[Tuple[float, float], ...]
    initial: InitialSpec = field(default_factory=InitialSpec)
    flow: FlowConfig = field(default_factory=FlowConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def to_dict(self):
        return {
            "anisotropy": self.anisotropy.to_dict(),
            "endpoints": [list(p) for p in self.endpoints],
            "initial": self.initial.to_dict(),
            "flow": self.flow.to_dict(),
            "output": self.output.to_dict(),
        }


def _point_tuple(p):
    return tuple(float(v) for v in p)


def _field_of(error):
    if error.validator == "required":
        missing = [name for name in error.validator_value if name not in error.instance]
        if missing:
            return missing[0]
    if error.validator == "additionalProperties":
        allowed = error.schema.get("properties", {})
        extra = [name for name in error.instance if name not in allowed]
        if extra:
            return extra[0]
    for part in reversed(error.path):
        if isinstance(part, str):
            return part
    return "config"


def config_from_dict(doc) -> RunConfig:
    error = best_match(Draft7Validator(RUN_CONFIG_SCHEMA).iter_errors(doc))
    if error is not None:
        name = _field_of(error)
        raise ConfigValidationError(name, f"invalid value for '{name}': {error.message}")

    flow = FlowConfig.from_dict(doc.get("flow", {}))
    anisotropy = Anisotropy.from_dict(doc["anisotropy"], check=True, samples=flow.ellipticity_samples)
    endpoints = tuple(_point_tuple(p) for p in doc["endpoints"])

    init = doc.get("initial", {"kind": "straight"})
    if init["kind"] == "straight":
        junction = init.get("junction")
        if junction is None:
            junction = np.mean(np.asarray(endpoints), axis=0)
        initial = InitialSpec("straight", junction=_point_tuple(junction))
    else:
        if "curves" not in init:
            raise ConfigValidationError("curves", "polyline initial data needs 'curves'")
        curves = tuple(tuple(_point_tuple(p) for p in c) for c in init["curves"])
        initial = InitialSpec("polylines", curves=curves)

    out = doc.get("output", {})
    output = OutputConfig(**out)
    targets = [p for p in (output.csv, output.snapshots, output.svg_dir) if p]
    if len(set(targets)) != len(targets):
        raise ConfigValidationError("output", "output paths must be distinct")
    return RunConfig(anisotropy, endpoints, initial, flow, output)


def parse_config(text) -> RunConfig:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(f"line {err.lineno}, column {err.colno}: {err.msg}", line=err.lineno) from err
    if not isinstance(doc, dict):
        raise ParseError("a run config must be a JSON object", line=1)
    return config_from_dict(doc)


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as err:
        raise ParseError(f"cannot read {path}: {err}") from err
    return parse_config(text)


def serialize_config(cfg: RunConfig) -> str:
    return json.dumps(cfg.to_dict(), sort_keys=True, indent=2)


def build_network(cfg: RunConfig) -> TriodNetwork:
    N = cfg.flow.N
    if cfg.initial.kind == "straight":
        return TriodNetwork.straight(cfg.initial.junction, cfg.endpoints, N)
    net = TriodNetwork.from_polylines(cfg.initial.curves, endpoints=cfg.endpoints)
    if any(c.N != N for c in net.curves):
        logger.info("Resampling initial polylines to N=%d", N)
        net = net.with_curves(to_constant_speed(c, N, kind="cubic", delta_reg=cfg.flow.delta_reg) for c in net.curves)
    return net

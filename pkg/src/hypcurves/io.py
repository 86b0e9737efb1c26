"""JSON schemas for inputs and reports, input loading, and run manifests."""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from . import __version__
from .kernel import FenchelNielsenMetric
from .surface import (CurveCycle, PantsDecomposition, StructureError, SurfaceTopology,
                      build_pants_graph, standard_decomposition)


class InputError(ValueError):
    """Invalid user input; ``pointer`` locates the offending value."""

    def __init__(self, message: str, pointer: str = "", source: str = ""):
        self.pointer = pointer
        self.source = source
        where = f"{source}:" if source else ""
        super().__init__(f"{where}{pointer or '/'}: {message}")


_int0 = {"type": "integer", "minimum": 0}
_slot = {"type": "array", "items": [_int0, {"type": "integer", "minimum": 0, "maximum": 2}],
         "minItems": 2, "maxItems": 2}

METRIC_SCHEMA = {
    "type": "object",
    "required": ["lengths"],
    "properties": {
        "lengths": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}},
        "twists": {"type": "object", "additionalProperties": {"type": "number"}},
    },
}

TOPOLOGY_SCHEMA = {
    "type": "object",
    "required": ["genus", "boundary", "cusps"],
    "properties": {"genus": _int0, "boundary": _int0, "cusps": _int0, "metric": METRIC_SCHEMA},
}

PANTS_SCHEMA = {
    "type": "object",
    "required": ["pants"],
    "properties": {
        "pants": {"type": "integer", "minimum": 1},
        "gluings": {"type": "array", "items": {"type": "array", "items": _slot,
                                               "minItems": 2, "maxItems": 2}},
        "free": {"type": "array", "items": {
            "type": "object", "required": ["pants", "slot"],
            "properties": {"pants": _int0, "slot": {"type": "integer", "minimum": 0, "maximum": 2},
                           "kind": {"enum": ["boundary", "cusp"]}}}},
        "metric": METRIC_SCHEMA,
    },
}

SURFACE_SCHEMA = {"oneOf": [TOPOLOGY_SCHEMA, PANTS_SCHEMA]}

STEP_SCHEMA = {"type": "array", "minItems": 2, "maxItems": 2,
               "items": [{"type": "string", "pattern": "^e[0-9]+$"}, {"enum": ["+", "-"]}]}

CURVE_SCHEMA = {
    "type": "object",
    "required": ["steps"],
    "properties": {"id": {"type": "string"},
                   "steps": {"type": "array", "minItems": 1, "items": STEP_SCHEMA}},
}

CORPUS_SCHEMA = {
    "type": "object",
    "required": ["curves"],
    "properties": {"curves": {"type": "array", "items": CURVE_SCHEMA}},
}

MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["command", "inputs", "seed", "version", "tolerances", "outputs", "digest"],
    "properties": {
        "command": {"type": "string"},
        "inputs": {"type": "object", "additionalProperties": {"type": "string"}},
        "seed": {"type": "integer"},
        "version": {"type": "string"},
        "tolerances": {"type": "object"},
        "outputs": {"type": "array", "items": {"type": "string"}},
        "digest": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
    },
}

_num_or_null = {"type": ["number", "null"]}

ANALYZE_REPORT_SCHEMA = {
    "type": "object",
    "required": ["manifest", "curve", "k", "intersection", "decomposition", "ratios"],
    "properties": {
        "manifest": MANIFEST_SCHEMA,
        "curve": CURVE_SCHEMA,
        "k": _int0,
        "intersection": {"type": "object"},
        "decomposition": {"type": "object"},
        "ratios": {"type": ["object", "null"]},
    },
}

VERIFICATION_SCHEMA = {
    "type": "object",
    "required": ["k", "trivial", "exact_length", "analytic_bound", "systole", "ok", "metric"],
    "properties": {
        "id": {"type": "string"},
        "k": _int0, "trivial": {"type": "boolean"}, "ok": {"type": "boolean"},
        "exact_length": {"type": "number"}, "analytic_bound": _num_or_null,
        "representative_length": _num_or_null,
        "ratio": _num_or_null, "systole": {"type": "number"},
        "systole_times_2_sqrt_k": _num_or_null,
        "metric": METRIC_SCHEMA, "metric_for_curve": METRIC_SCHEMA,
    },
}

VERIFY_REPORT_SCHEMA = {
    "type": "object",
    "required": ["manifest", "reports", "summary"],
    "properties": {
        "manifest": MANIFEST_SCHEMA,
        "reports": {"type": "array", "items": VERIFICATION_SCHEMA},
        "summary": {"type": "object", "required": ["curves", "failures", "empirical_C3"],
                    "properties": {"curves": _int0, "failures": _int0,
                                   "empirical_C3": _num_or_null,
                                   "min_systole_times_2_sqrt_k": _num_or_null}},
    },
}

INTERSECT_REPORT_SCHEMA = {
    "type": "object",
    "required": ["manifest", "k", "methods", "agree"],
    "properties": {"manifest": MANIFEST_SCHEMA, "k": {"type": ["integer", "null"]},
                   "methods": {"type": "object"}, "agree": {"type": "boolean"}},
}

DEG_REPORT_SCHEMA = {
    "type": "object",
    "required": ["manifest", "deg", "ceiling"],
    "properties": {"manifest": MANIFEST_SCHEMA, "deg": {"type": ["integer", "null"]},
                   "ceiling": {"type": "integer", "minimum": 1}},
}

REPORT_SCHEMAS = {
    "analyze": ANALYZE_REPORT_SCHEMA,
    "build-metric": {"allOf": [VERIFICATION_SCHEMA,
                               {"required": ["manifest"], "properties": {"manifest": MANIFEST_SCHEMA}}]},
    "verify": VERIFY_REPORT_SCHEMA,
    "intersect": INTERSECT_REPORT_SCHEMA,
    "deg": DEG_REPORT_SCHEMA,
}


def pointer(path) -> str:
    return "".join(f"/{p}" for p in path)


def validate(data, schema: dict, source: str = "") -> None:
    """Raise InputError at the deepest failing location."""
    errors = sorted(jsonschema.Draft7Validator(schema).iter_errors(data),
                    key=lambda e: (-len(e.absolute_path), e.message))
    if not errors:
        return
    err = errors[0]
    # for oneOf, report the branch that got furthest
    while err.context:
        err = max(err.context, key=lambda e: len(e.absolute_path))
    raise InputError(err.message, pointer(err.absolute_path), source)


def load_json(path, schema: dict | None = None):
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read: {exc.strerror}", "", str(path)) from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} (line {exc.lineno})", "", str(path)) from None
    if schema is not None:
        validate(data, schema, str(path))
    return data


def surface_from_json(data: dict, source: str = ""):
    """(pants graph, metric data or None) for a surface file.

    The metric is returned as its JSON dict, since cusp sources carry zero lengths.
    """
    validate(data, SURFACE_SCHEMA, source)
    try:
        if "genus" in data:
            pd = standard_decomposition(SurfaceTopology(data["genus"], data["boundary"],
                                                        data["cusps"]))
        else:
            pd = PantsDecomposition.from_json(data)
        g = build_pants_graph(pd)
    except (StructureError, ValueError) as exc:
        raise InputError(str(exc), "", source) from None
    metric = data.get("metric")
    if metric is not None:
        missing = sorted({c.id for c in pd.cuffs} - set(metric["lengths"]))
        if missing:
            raise InputError(f"no length for cuff {missing[0]}", "/metric/lengths", source)
    return g, metric


def metric_from_json(data: dict, source: str = "") -> FenchelNielsenMetric:
    if any(v <= 0 for v in data["lengths"].values()):
        bad = sorted(c for c, v in data["lengths"].items() if v <= 0)[0]
        raise InputError("length must be positive here", f"/metric/lengths/{bad}", source)
    return FenchelNielsenMetric.from_json(data)


def curve_from_json(data: dict, g, source: str = "", base: str = "") -> CurveCycle:
    """A validated cycle in ``g``; bad steps are reported by JSON pointer."""
    validate(data, CURVE_SCHEMA, source)
    n_edges = len(g.edges)
    for i, (name, _) in enumerate(data["steps"]):
        if int(name[1:]) >= n_edges:
            raise InputError(f"unknown edge {name}", f"{base}/steps/{i}", source)
    c = CurveCycle.from_steps(data["steps"])
    diag = g.validate_cycle(c)
    if not diag.valid:
        at = f"{base}/steps/{diag.step}" if diag.step is not None else f"{base}/steps"
        raise InputError(diag.message, at, source)
    return c


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def canonical_json(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2, allow_nan=False) + "\n"


@dataclass
class RunManifest:
    command: str
    seed: int
    inputs: dict = field(default_factory=dict)          # name -> sha256 of the file bytes
    tolerances: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)
    version: str = __version__

    def body(self) -> dict:
        return {"command": self.command, "inputs": dict(sorted(self.inputs.items())),
                "seed": self.seed, "version": self.version,
                "tolerances": dict(sorted(self.tolerances.items())),
                "outputs": list(self.outputs)}

    @property
    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.body(), sort_keys=True).encode()).hexdigest()

    def to_json(self) -> dict:
        return {**self.body(), "digest": self.digest}

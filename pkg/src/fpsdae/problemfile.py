"""JSON problem files.

A problem file names the equations, the sizes ``n``, ``d``, ``r``, the field
mode, the initial coefficients ``c_0 ..`` (rational strings) and run options.
Structural checks are done with a JSON schema; expression and size checks
then go through :mod:`fpsdae.expr`.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import jsonschema

from .errors import FpsDaeError, ParseError, ValidationError
from .expr import Problem, parse
from .field import Field, parse_scalar, tolerances_from_env

SCHEMA_VERSION = 1

_scalar = {"type": ["string", "integer"]}
_vector = {"oneOf": [_scalar, {"type": "array", "items": _scalar, "minItems": 1}]}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "fpsdae problem file",
    "type": "object",
    "required": ["schema_version", "equations", "n", "initial"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "description": {"type": "string"},
        "equations": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "n": {"type": "integer", "minimum": 0},
        "d": {"type": "integer", "minimum": 1},
        "r": {"type": "integer", "minimum": 1},
        "field": {"enum": ["rational", "f64", "c64"]},
        "initial": {"type": "array", "items": _vector, "minItems": 1},
        "m": {
            "oneOf": [
                {"type": "integer", "minimum": 0},
                {
                    "type": "object",
                    "required": ["scan"],
                    "additionalProperties": False,
                    "properties": {
                        "scan": {"type": "array", "items": {"type": "integer", "minimum": 1},
                                 "minItems": 2, "maxItems": 2},
                    },
                },
            ]
        },
        "order": {"type": "integer", "minimum": 0},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "atol": {"type": "number", "exclusiveMinimum": 0},
                "rtol": {"type": "number", "minimum": 0},
                "free": {
                    "type": "object",
                    "patternProperties": {"^[0-9]+$": {"type": "array", "items": _scalar}},
                    "additionalProperties": False,
                },
                "path": {"enum": ["auto", "scalar", "system"]},
                "seed": {"type": "integer"},
                "samples": {"type": "array", "items": _scalar},
                "perturbation": {"type": "array", "items": {"type": "string"}},
                "verify_samples": {"type": "integer", "minimum": 0},
            },
        },
    },
}


class SchemaError(FpsDaeError):
    """The file is not valid JSON or does not match the problem schema."""


@dataclass
class ProblemFile:
    equations: list
    n: int
    d: int
    r: int
    field: Field
    initial: list
    m: int | None = None
    scan: tuple | None = None
    order: int = 10
    name: str = ""
    free: dict = dc_field(default_factory=dict)
    path: str = "auto"
    seed: int = 0
    samples: list = dc_field(default_factory=list)
    perturbation: list = dc_field(default_factory=list)
    verify_samples: int = 0

    def problem(self) -> Problem:
        return Problem.from_strings(self.equations, self.n, self.d, self.field)


def _vec(v, d: int, kind: str, where: str):
    items = v if isinstance(v, list) else [v]
    if len(items) != d:
        raise ValidationError(f"{where}: expected {d} components, got {len(items)}")
    return [parse_scalar(str(x), kind) for x in items]


def load_dict(data: dict, environ=None) -> ProblemFile:
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from exc
    d = data.get("d", 1)
    r = data.get("r", len(data["equations"]))
    if r != len(data["equations"]):
        raise ValidationError(f"r = {r} but {len(data['equations'])} equations given")
    kind = data.get("field", "rational")
    opts = data.get("options", {})
    env = tolerances_from_env(os.environ if environ is None else environ)
    atol = opts.get("atol", env.get("atol", 1e-12))
    rtol = opts.get("rtol", env.get("rtol", 1e-9))
    fld = Field(kind, atol, rtol)
    for k, src in enumerate(data["equations"]):
        try:
            parse(src, data["n"], d)
        except ParseError as exc:
            raise ParseError(f"equation {k}: {exc.message}", exc.line, exc.column) from exc
    initial = [_vec(v, d, kind, f"initial[{q}]") for q, v in enumerate(data["initial"])]
    m = data.get("m")
    scan = None
    if isinstance(m, dict):
        lo, hi = m["scan"]
        if lo > hi:
            raise ValidationError("m.scan must be [lo, hi] with lo <= hi")
        scan, m = (lo, hi), None
    free = {int(k): [parse_scalar(str(x), kind) for x in v] for k, v in opts.get("free", {}).items()}
    samples = [float(parse_scalar(str(x), "f64")) for x in opts.get("samples", [])]
    return ProblemFile(
        equations=list(data["equations"]), n=data["n"], d=d, r=r, field=fld, initial=initial,
        m=m, scan=scan, order=data.get("order", 10), name=data.get("name", ""), free=free,
        path=opts.get("path", "auto"), seed=opts.get("seed", 0), samples=samples,
        perturbation=list(opts.get("perturbation", [])), verify_samples=opts.get("verify_samples", 0),
    )


def load(path, environ=None) -> ProblemFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return load_dict(data, environ)

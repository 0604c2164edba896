"""JSON instance and plan files.

Both formats carry a schema tag and are written in a fixed field order with
``repr``-exact floats, so emitting a parsed canonical file reproduces it
byte for byte. Points are written as inline ``[x, y]`` pairs.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import fields
from typing import Optional

from .model import MissionInstance, VehicleParams, validate_instance
from .simulator import Plan, resimulate

INSTANCE_SCHEMA = "groundair.instance/1"
PLAN_SCHEMA = "groundair.plan/1"
PARAM_FIELDS = tuple(f.name for f in fields(VehicleParams))
RESIM_TOL = 1e-9


class FileFormatError(ValueError):
    """Malformed input file; ``line`` and ``field`` locate the problem when known."""

    def __init__(self, msg: str, line: Optional[int] = None, field: Optional[str] = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {msg}" if where else msg)


# -- emitting -----------------------------------------------------------------

def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot write non-finite number {x!r}")
    return repr(x)


def _pt(p) -> str:
    return f"[{_num(p[0])}, {_num(p[1])}]"


def _value(v) -> str:
    if v is None or isinstance(v, (bool, str, int)) and not isinstance(v, float):
        return json.dumps(v)
    if isinstance(v, float):
        return _num(v)
    if isinstance(v, tuple) and len(v) == 2 and all(isinstance(c, float) for c in v):
        return _pt(v)
    if isinstance(v, (list, tuple)) and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in v):
        return "[" + ", ".join(_num(c) if isinstance(c, float) else str(c) for c in v) + "]"
    raise TypeError(f"unsupported value {v!r}")


def _render(obj, indent=0) -> str:
    """Pretty-print nested dicts/lists of scalars; flat arrays stay on one line."""
    pad = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_render(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and obj and all(isinstance(v, (dict, list, tuple)) for v in obj):
        items = [pad + _render(v, indent + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    if isinstance(obj, list):
        return "[" + ", ".join(_render(v, indent + 1) for v in obj) + "]"
    return _value(obj)


def dump_instance(inst: MissionInstance) -> str:
    doc = {
        "schema": INSTANCE_SCHEMA,
        "start": inst.start,
        "sites": list(inst.sites),
        "params": {k: float(getattr(inst.params, k)) for k in PARAM_FIELDS},
        "levels": list(inst.levels),
    }
    return _render(doc) + "\n"


def instance_digest(inst: MissionInstance) -> str:
    return hashlib.sha256(dump_instance(inst).encode()).hexdigest()


# -- parsing ------------------------------------------------------------------

def _line_of(text: str, key: str) -> Optional[int]:
    needle = json.dumps(key) + ":"
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line.replace('" :', '":'):
            return i
    return None


def _loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FileFormatError(e.msg, line=e.lineno) from None
    if not isinstance(doc, dict):
        raise FileFormatError("top level must be a JSON object", line=1)
    return doc


def _get(doc, text, key, path=None):
    if key not in doc:
        raise FileFormatError("missing", field=path or key)
    return doc[key]


def _number(v, text, path, key) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise FileFormatError(f"expected a number, got {json.dumps(v)}", _line_of(text, key), path)
    return float(v)


def _point(v, text, path, key):
    if not isinstance(v, list) or len(v) != 2:
        raise FileFormatError("expected an [x, y] pair", _line_of(text, key), path)
    return (_number(v[0], text, path, key), _number(v[1], text, path, key))


def parse_instance(text: str, validate: bool = True) -> MissionInstance:
    doc = _loads(text)
    schema = _get(doc, text, "schema")
    if schema != INSTANCE_SCHEMA:
        raise FileFormatError(f"unknown schema {schema!r} (expected {INSTANCE_SCHEMA!r})",
                              _line_of(text, "schema"), "schema")
    start = _point(_get(doc, text, "start"), text, "start", "start")
    raw_sites = _get(doc, text, "sites")
    if not isinstance(raw_sites, list) or not raw_sites:
        raise FileFormatError("expected a non-empty list of [x, y] pairs", _line_of(text, "sites"), "sites")
    sites = [_point(s, text, f"sites[{i}]", "sites") for i, s in enumerate(raw_sites)]
    raw_params = _get(doc, text, "params")
    if not isinstance(raw_params, dict):
        raise FileFormatError("expected an object", _line_of(text, "params"), "params")
    for k in raw_params:
        if k not in PARAM_FIELDS:
            raise FileFormatError("unknown parameter", _line_of(text, k), f"params.{k}")
    values = {}
    for k in PARAM_FIELDS:
        if k not in raw_params:
            raise FileFormatError("missing", _line_of(text, "params"), f"params.{k}")
        values[k] = _number(raw_params[k], text, f"params.{k}", k)
    raw_levels = _get(doc, text, "levels")
    if not isinstance(raw_levels, list) or not raw_levels:
        raise FileFormatError("expected a non-empty list of fractions", _line_of(text, "levels"), "levels")
    levels = [_number(f, text, f"levels[{i}]", "levels") for i, f in enumerate(raw_levels)]
    inst = MissionInstance(start, sites, VehicleParams(**values), tuple(levels))
    if validate:
        problems = validate_instance(inst)
        if problems:
            raise FileFormatError("invalid instance: " + "; ".join(problems))
    return inst


def load_instance(path: str, validate: bool = True) -> MissionInstance:
    with open(path) as fh:
        return parse_instance(fh.read(), validate)


def save_instance(inst: MissionInstance, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dump_instance(inst))


# -- plans --------------------------------------------------------------------

def plan_document(inst: MissionInstance, plan: Plan, planner: dict) -> dict:
    phases = []
    for ph in plan.phases:
        g, rv = ph.geometry, ph.rendezvous
        phases.append({
            "site": ph.site,
            "level": float(ph.level),
            "O": g.center,
            "r": float(g.radius),
            "A": g.takeoff,
            "B": g.exit,
            "P": rv.point,
            "wait": float(rv.wait),
            "alloc": float(ph.alloc),
            "charged": float(ph.charged),
            "uav_spend": float(ph.uav_spend),
            "ugv_spend_carry": float(ph.ugv_spend_carry),
            "ugv_spend_alone": float(ph.ugv_spend_alone),
            "e_g": float(ph.ugv_energy),
            "e_a": float(ph.uav_energy),
            "t_takeoff": float(ph.t_takeoff),
            "t_survey_start": float(ph.t_survey_start),
            "t_survey_end": float(ph.t_survey_end),
            "t_landing": float(ph.t_landing),
            "violation": ph.violation.value if ph.violation else None,
        })
    ret = plan.return_leg
    violation = None
    if plan.violation is not None:
        violation = {"at": plan.violation[0], "reason": plan.violation[1].value}
    return {
        "schema": PLAN_SCHEMA,
        "instance_sha256": instance_digest(inst),
        "planner": dict(planner),
        "mode": plan.mode,
        "start": inst.start,
        "tour": list(plan.tour),
        "allocations": list(plan.allocations) if plan.allocations is not None else None,
        "T_total": float(plan.total_time),
        "T_Gwait": float(plan.wait_time),
        "d_UGV": float(plan.ugv_distance),
        "feasible": plan.feasible,
        "violation": violation,
        "phases": phases,
        "return": {
            "carry_dist": float(ret.carry_dist),
            "charged": float(ret.charged),
            "e_g": float(ret.ugv_energy),
            "e_a": float(ret.uav_energy),
            "t_arrival": float(ret.t_arrival),
        },
    }


def dump_plan(inst: MissionInstance, plan: Plan, planner: dict) -> str:
    """Serialise ``plan`` after checking that it re-simulates to the same mission time."""
    again = resimulate(inst, plan)
    if abs(again.total_time - plan.total_time) > RESIM_TOL or again.feasible != plan.feasible:
        raise RuntimeError("plan does not re-simulate to its stated mission time")
    return _render(plan_document(inst, plan, planner)) + "\n"


def parse_plan(text: str) -> dict:
    """Load a plan file for plotting or inspection; returns the JSON document."""
    doc = _loads(text)
    schema = _get(doc, text, "schema")
    if schema != PLAN_SCHEMA:
        raise FileFormatError(f"unknown schema {schema!r} (expected {PLAN_SCHEMA!r})",
                              _line_of(text, "schema"), "schema")
    _point(_get(doc, text, "start"), text, "start", "start")
    phases = _get(doc, text, "phases")
    if not isinstance(phases, list):
        raise FileFormatError("expected a list", _line_of(text, "phases"), "phases")
    for i, ph in enumerate(phases):
        if not isinstance(ph, dict):
            raise FileFormatError("expected an object", _line_of(text, "phases"), f"phases[{i}]")
        for key in ("O", "A", "B", "P"):
            _point(_get(ph, text, key, f"phases[{i}].{key}"), text, f"phases[{i}].{key}", key)
        _number(_get(ph, text, "r", f"phases[{i}].r"), text, f"phases[{i}].r", "r")
    _number(_get(doc, text, "T_total"), text, "T_total", "T_total")
    return doc


def load_plan(path: str) -> dict:
    with open(path) as fh:
        return parse_plan(fh.read())

"""JSON schemas for tuple, profile, class and plan files.

Cyclotomic entries are strings ("zeta(12)^7", "-1", "1/2 - zeta(8)^3", ...);
files produced here parse back losslessly, so subcommands compose through
pipes without transformation.
"""

from __future__ import annotations

import json
from math import lcm
from pathlib import Path

from .convolution import CONVENTION, MonodromyTuple
from .cyclotomic import (
    format_cyclotomic,
    parse_cyclotomic,
    rou_str,
    rou_to_cyc,
)
from .errors import InputError, MathError
from .katz import ConstructionPlan, PlanStep
from .linalg import Matrix
from .localdata import (
    FormalLocalSystem,
    GroupTag,
    JordanClass,
    parse_group,
)


def _require(condition: bool, message: str):
    if not condition:
        raise InputError(message)


def _parse(value):
    try:
        return parse_cyclotomic(value)
    except MathError as exc:
        raise InputError(str(exc)) from exc


# -- Jordan classes -----------------------------------------------------------


def class_to_json(c: JordanClass) -> list[dict]:
    return [
        {"eigenvalue": rou_str(mu), "size": size}
        for mu, size in c.parts
    ]


def class_from_json(data) -> JordanClass:
    _require(isinstance(data, list) and data, "a class must be a non-empty list")
    parts = []
    for item in data:
        _require(
            isinstance(item, dict) and "eigenvalue" in item and "size" in item,
            'class entries need "eigenvalue" and "size"',
        )
        _require(
            isinstance(item["size"], int) and item["size"] >= 1,
            "block sizes are positive integers",
        )
        value = _parse(item["eigenvalue"])
        rou = value.as_root_of_unity()
        _require(rou is not None, f"eigenvalue {item['eigenvalue']!r} is not a root of unity")
        parts.append((rou, item["size"]))
    return JordanClass(parts)


def classfile_to_json(c: JordanClass, group: GroupTag) -> dict:
    return {"group": str(group), "class": class_to_json(c)}


def classfile_from_json(data) -> tuple[JordanClass, GroupTag]:
    _require(isinstance(data, dict), "class file must be a JSON object")
    _require("group" in data and "class" in data, 'class file needs "group" and "class"')
    try:
        group = parse_group(data["group"])
    except MathError as exc:
        raise InputError(str(exc)) from exc
    return class_from_json(data["class"]), group


# -- profiles ----------------------------------------------------------------------


def profile_to_json(f: FormalLocalSystem) -> dict:
    return {
        "rank": f.rank,
        "group": str(f.group),
        "punctures": list(f.punctures),
        "classes": [class_to_json(c) for c in f.classes],
    }


def profile_from_json(data) -> FormalLocalSystem:
    _require(isinstance(data, dict), "profile must be a JSON object")
    for key in ("rank", "group", "punctures", "classes"):
        _require(key in data, f'profile needs "{key}"')
    try:
        group = parse_group(data["group"])
    except MathError as exc:
        raise InputError(str(exc)) from exc
    punctures = data["punctures"]
    _require(
        isinstance(punctures, list) and all(isinstance(p, str) for p in punctures),
        "punctures must be a list of labels",
    )
    classes = [class_from_json(c) for c in data["classes"]]
    try:
        f = FormalLocalSystem(punctures, classes, group)
    except MathError as exc:
        raise InputError(f"inconsistent profile: {exc}") from exc
    _require(f.rank == data["rank"], "declared rank does not match the classes")
    return f


# -- tuples -------------------------------------------------------------------------


def tuple_to_json(t: MonodromyTuple) -> dict:
    order = 1
    for a in t.matrices:
        for row in a.entries:
            for x in row:
                order = lcm(order, x.order)
    return {
        "rank": t.rank,
        "cyclotomic_order": order,
        "punctures": list(t.punctures),
        "matrices": [
            [[format_cyclotomic(x) for x in row] for row in a.entries]
            for a in t.matrices
        ],
        "convention": CONVENTION,
    }


def tuple_from_json(data) -> MonodromyTuple:
    _require(isinstance(data, dict), "tuple file must be a JSON object")
    for key in ("rank", "punctures", "matrices"):
        _require(key in data, f'tuple file needs "{key}"')
    if data.get("convention", CONVENTION) != CONVENTION:
        raise InputError(f'unsupported product convention {data["convention"]!r}')
    punctures = data["punctures"]
    matrices = data["matrices"]
    _require(isinstance(punctures, list) and isinstance(matrices, list),
             "punctures and matrices must be lists")
    _require(len(punctures) == len(matrices),
             "punctures and matrices differ in length")
    mats = []
    for grid in matrices:
        _require(
            isinstance(grid, list) and grid and all(isinstance(r, list) for r in grid),
            "matrices must be non-empty nested lists",
        )
        mats.append(Matrix([[_parse(x) for x in row] for row in grid]))
    try:
        t = MonodromyTuple(punctures, mats)
    except MathError as exc:
        raise InputError(f"inconsistent tuple: {exc}") from exc
    _require(t.rank == data["rank"], "declared rank does not match the matrices")
    return t


# -- plans ---------------------------------------------------------------------------


def plan_to_json(plan: ConstructionPlan) -> dict:
    steps = []
    for step in plan.steps:
        if step.op == "mc":
            steps.append({"op": "mc", "lambda": rou_str(step.lam)})
        elif step.op == "twist":
            steps.append(
                {"op": "twist",
                 "scalars": {label: rou_str(v) for label, v in step.scalars}}
            )
        elif step.op in ("sym2", "lambda2"):
            steps.append({"op": step.op})
        elif step.op == "tensor":
            steps.append({"op": "tensor", "plan": plan_to_json(step.plan)})
        elif step.op == "project":
            steps.append({"op": "project", "map": step.mapping})
        else:  # pragma: no cover
            raise InputError(f"unknown plan step {step.op!r}")
    return {
        "base": {label: rou_str(v) for label, v in plan.base},
        "steps": steps,
    }


def _rou_from_literal(value):
    x = _parse(value)
    rou = x.as_root_of_unity()
    _require(rou is not None, f"{value!r} is not a root of unity")
    return rou


def plan_from_json(data) -> ConstructionPlan:
    _require(isinstance(data, dict), "plan must be a JSON object")
    _require("base" in data and "steps" in data, 'plan needs "base" and "steps"')
    _require(isinstance(data["base"], dict) and data["base"],
             "plan base must map punctures to scalars")
    base = tuple(
        (label, _rou_from_literal(v)) for label, v in data["base"].items()
    )
    steps = []
    for raw in data["steps"]:
        _require(isinstance(raw, dict) and "op" in raw, 'each step needs "op"')
        op = raw["op"]
        if op == "mc":
            _require("lambda" in raw, 'mc step needs "lambda"')
            steps.append(PlanStep.mc(_rou_from_literal(raw["lambda"])))
        elif op == "twist":
            _require(isinstance(raw.get("scalars"), dict),
                     'twist step needs a "scalars" object')
            steps.append(
                PlanStep.twist(
                    {k: _rou_from_literal(v) for k, v in raw["scalars"].items()}
                )
            )
        elif op in ("sym2", "lambda2"):
            steps.append(PlanStep(op))
        elif op == "tensor":
            _require("plan" in raw, 'tensor step needs a nested "plan"')
            steps.append(PlanStep("tensor", plan=plan_from_json(raw["plan"])))
        elif op == "project":
            _require(raw.get("map") in ("sp4_so5", "sl4_so6"),
                     'project step needs "map": "sp4_so5" or "sl4_so6"')
            steps.append(PlanStep.project(raw["map"]))
        else:
            raise InputError(f"unknown plan step {op!r}")
    return ConstructionPlan(base=base, steps=tuple(steps))


# -- scalars for the twist subcommand ----------------------------------------------


def scalars_from_json(data) -> dict:
    _require(isinstance(data, dict) and data, "scalars must be a non-empty object")
    return {label: _parse(v) for label, v in data.items()}


# -- file helpers ---------------------------------------------------------------------


def load_json(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise InputError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from exc


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text

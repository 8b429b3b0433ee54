"""Serialization of trajectories and solution summaries.

Files are always written atomically (temporary file in the target folder,
then ``os.replace``) so a crashed run never leaves a half-written table.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import tempfile

import numpy as np

from . import fixedv, form1, form2
from .fixedv import FixedVParams
from .form1 import Form1Params
from .form2 import Form2Params
from .model import Formulation, Problem, ProblemError, Trajectory

HEADER_COSTATE = ("tau", "x", "y", "theta", "v", "omega", "c1", "c2", "c3", "H")
HEADER_FIXEDV = ("tau", "x", "y", "theta", "v", "omega", "z1", "z2", "z3", "z5")
SUMMARY_KEYS = ("formulation", "mu", "target", "params", "tf", "cost", "verification")

MODULES = {Formulation.FORM1: form1, Formulation.FORM2: form2, Formulation.FIXEDV: fixedv}
PARAM_TYPES = {Formulation.FORM1: Form1Params, Formulation.FORM2: Form2Params,
               Formulation.FIXEDV: FixedVParams}


class SolutionFileError(ValueError):
    """A solution JSON that cannot be turned back into parameters."""


def fmt(value) -> str:
    return f"{float(value):.17g}"


def formulation_of(params) -> Formulation:
    for form, cls in PARAM_TYPES.items():
        if isinstance(params, cls):
            return form
    raise TypeError(f"unsupported solution type {type(params).__name__}")


def header_for(formulation: Formulation) -> tuple[str, ...]:
    return HEADER_FIXEDV if Formulation(formulation) is Formulation.FIXEDV else HEADER_COSTATE


def trajectory_columns(traj: Trajectory, formulation: Formulation) -> dict:
    """Ordered columns of the trajectory table."""
    st, ctl, z = traj.state, traj.control, traj.costates
    cols = [traj.tau, st.x, st.y, st.theta, ctl.v, ctl.omega]
    if Formulation(formulation) is Formulation.FIXEDV:
        cols += [z[:, 0], z[:, 1], z[:, 2], z[:, 3]]
    else:
        cols += [z[:, 0], z[:, 1], z[:, 2], traj.hamiltonian]
    n = len(traj.tau)
    names = header_for(formulation)
    return {k: np.broadcast_to(np.asarray(c, dtype=float), (n,)) for k, c in zip(names, cols)}


def trajectory_csv(traj: Trajectory, formulation: Formulation) -> str:
    cols = trajectory_columns(traj, formulation)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols.keys())
    for row in zip(*cols.values()):
        w.writerow(fmt(v) for v in row)
    return buf.getvalue()


def trajectory_json(traj: Trajectory, formulation: Formulation) -> str:
    cols = trajectory_columns(traj, formulation)
    payload = {"columns": list(cols), "data": {k: [float(v) for v in c] for k, c in cols.items()}}
    return dumps(payload)


def json_safe(obj):
    """Recursively map non-finite floats to None and numpy scalars to Python."""
    if isinstance(obj, dict):
        return {k: json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [json_safe(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.ndarray):
        return json_safe(obj.tolist())
    return obj


def dumps(obj) -> str:
    return json.dumps(json_safe(obj), indent=2, allow_nan=False) + "\n"


def summary(problem: Problem, params, cost: float, verification) -> dict:
    """Solution summary in the fixed key order."""
    form = formulation_of(params)
    return {
        "formulation": form.value,
        "mu": problem.mu,
        "target": {"r": problem.r, "alpha_rad": problem.alpha},
        "params": params.to_dict(),
        "tf": params.tf,
        "cost": cost,
        "verification": verification.to_dict() if verification is not None else None,
    }


def _params_from_dict(form: Formulation, raw: dict):
    cls = PARAM_TYPES[form]
    fields = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(raw) - set(fields))
    if unknown:
        raise SolutionFileError(f"unknown parameter keys for {form.value}: {unknown}")
    missing = sorted(k for k, f in fields.items()
                     if k not in raw and f.default is dataclasses.MISSING)
    if missing:
        raise SolutionFileError(f"missing parameter keys for {form.value}: {missing}")
    values = {}
    for k, v in raw.items():
        if fields[k].type in ("bool", bool):
            if not isinstance(v, bool):
                raise SolutionFileError(f"parameter {k!r} must be a boolean")
            values[k] = v
        elif fields[k].type in ("int", int):
            if isinstance(v, bool) or not isinstance(v, int):
                raise SolutionFileError(f"parameter {k!r} must be an integer")
            values[k] = v
        elif v is None:
            # null stands for an infinite value (straight-line limits)
            values[k] = math.inf
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            values[k] = float(v)
        else:
            raise SolutionFileError(f"parameter {k!r} must be a number")
    return cls(**values)


def load_solution(text: str):
    """Parse a summary JSON back into (problem, params)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SolutionFileError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SolutionFileError("solution file must hold a JSON object")
    unknown = sorted(set(doc) - set(SUMMARY_KEYS))
    if unknown:
        raise SolutionFileError(f"unknown keys: {unknown}")
    missing = [k for k in ("formulation", "mu", "target", "params") if k not in doc]
    if missing:
        raise SolutionFileError(f"missing keys: {missing}")
    try:
        form = Formulation(doc["formulation"])
    except ValueError:
        raise SolutionFileError(f"unknown formulation {doc['formulation']!r}") from None
    target = doc["target"]
    if not isinstance(target, dict) or set(target) != {"r", "alpha_rad"}:
        raise SolutionFileError("target must hold exactly 'r' and 'alpha_rad'")
    if not isinstance(doc["params"], dict):
        raise SolutionFileError("params must be an object")
    try:
        problem = Problem(float(doc["mu"]), float(target["r"]), float(target["alpha_rad"]), form)
    except (TypeError, ProblemError) as exc:
        raise SolutionFileError(f"invalid problem: {exc}") from None
    return problem, _params_from_dict(form, doc["params"])


def write_atomic(path: str, text: str) -> str:
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    return path


def rows_csv(header, rows) -> str:
    """CSV text of already formatted rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()

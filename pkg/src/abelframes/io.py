"""JSON encodings for groups, subgroups, signals, banks, problems and reports.

Complex numbers are ``[re, im]`` pairs; arrays follow canonical element order.
Floats are written with 17 significant digits so output is byte-stable.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np

from .filterbank import FilterBank
from .group import GroupSpec, Subgroup, subgroup_closure
from .potential_opt import DesignProblem, DesignReport


class InputError(ValueError):
    """Malformed or inconsistent input file."""


def load_json(source: str | os.PathLike) -> Any:
    """Parse ``source`` as a path to a JSON file, or failing that as inline JSON."""
    text = str(source)
    path = Path(text)
    try:
        if path.is_file():
            return json.loads(path.read_text())
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"could not read JSON from {text!r}: {exc}") from exc


def parse_group(obj: Any) -> GroupSpec:
    if isinstance(obj, dict):
        obj = obj.get("moduli")
    if not isinstance(obj, list) or not all(isinstance(m, int) for m in obj):
        raise InputError('group must look like {"moduli": [2, 4]}')
    try:
        return GroupSpec(tuple(obj))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def parse_subgroup(spec: GroupSpec, obj: Any) -> Subgroup:
    if isinstance(obj, dict):
        obj = obj.get("generators")
    if not isinstance(obj, list) or not all(isinstance(g, list) for g in obj):
        raise InputError('subgroup must look like {"generators": [[0, 2]]}')
    try:
        return subgroup_closure(spec, obj)
    except ValueError as exc:
        raise InputError(f"subgroup not contained in group {list(spec.moduli)}: {exc}") from exc


def parse_signal(obj: Any, length: int | None = None) -> np.ndarray:
    if isinstance(obj, dict):
        obj = obj.get("values")
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputError(f"signal must be a list of [re, im] pairs: {exc}") from exc
    if arr.ndim == 1:
        arr = np.stack([arr, np.zeros_like(arr)], axis=-1)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError("signal must be a list of [re, im] pairs")
    if length is not None and arr.shape[0] != length:
        raise InputError(f"signal has {arr.shape[0]} entries, expected {length}")
    return arr[:, 0] + 1j * arr[:, 1]


def signal_to_json(values) -> list:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex)]


def bank_from_json(obj: Any) -> FilterBank:
    if not isinstance(obj, dict) or not {"group", "subgroup", "filters"} <= obj.keys():
        raise InputError('bank must have "group", "subgroup" and "filters"')
    G = parse_group(obj["group"])
    H = parse_subgroup(G, obj["subgroup"])
    if not isinstance(obj["filters"], list) or not obj["filters"]:
        raise InputError("bank needs at least one filter")
    filters = np.stack([parse_signal(f, G.order) for f in obj["filters"]])
    return FilterBank(G, H, filters)


def bank_to_json(fb: FilterBank) -> dict:
    return {
        "group": fb.group.to_json(),
        "subgroup": fb.subgroup.to_json(),
        "filters": [signal_to_json(f) for f in fb.filters],
    }


def problem_from_json(obj: Any) -> DesignProblem:
    if not isinstance(obj, dict):
        raise InputError("design problem must be a JSON object")
    missing = {"group", "subgroup", "norms"} - obj.keys()
    if missing:
        raise InputError(f"design problem is missing {sorted(missing)}")
    G = parse_group(obj["group"])
    H = parse_subgroup(G, obj["subgroup"])
    kwargs = {k: obj[k] for k in ("seed", "max_iters", "grad_tol", "tight_eps") if k in obj}
    try:
        return DesignProblem(G, H, list(obj["norms"]), **kwargs)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def report_to_json(report: DesignReport) -> dict:
    A, B = report.bounds
    return {
        "filters": bank_to_json(report.bank),
        "fp_trajectory": list(report.fp_trajectory),
        "grad_norm": report.grad_norm,
        "bounds": [A, B],
        "m0": report.m0,
        "regime": report.regime,
        "fp_floor": report.fp_floor,
        "partition_check": report.partition_check,
        "converged": report.converged,
        "iterations": report.iterations,
        "restarts": list(report.restarts),
        "tight": report.tight,
    }


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return json.dumps(str(x))
        text = format(x, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in seq) + "]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise

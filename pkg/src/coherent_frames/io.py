"""JSON (de)serialization for groups, representations, systems and certificates.

Complex numbers are ``[re, im]`` pairs of decimal doubles, sets are sorted
integer arrays. Loaders validate structure and report the offending node as
a JSON pointer.
"""
from __future__ import annotations

import json
import re
from pathlib import Path

import jsonschema
import numpy as np

from .errors import FrameError, SchemaError
from .frames import CoherentSystem
from .groups import (FiniteGroup, make_cyclic_product, make_heisenberg,
                     make_window, window_sequence)
from .removal import RemovalCertificate
from .reps import ProjectiveRep, gabor_rep, heisenberg_schroedinger_rep


class InputError(FrameError):
    """Unreadable file or malformed JSON text."""
    exit_code = 5


_INT_ARRAY = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}

GROUP_SCHEMA = {
    "type": "object",
    "required": ["order", "cayley"],
    "properties": {
        "order": {"type": "integer", "minimum": 1},
        "cayley": {"type": "array", "items": _INT_ARRAY},
        "label": {"type": "string"},
    },
}
REP_SCHEMA = {
    "type": "object",
    "required": ["group", "dim", "matrices"],
    "properties": {
        "group": {"anyOf": [{"type": "string"}, {"type": "object"}]},
        "dim": {"type": "integer", "minimum": 1},
        "matrices": {"type": "array",
                     "items": {"type": "array", "items": {"type": "array", "items": _COMPLEX}}},
        "label": {"type": "string"},
    },
}
SYSTEM_SCHEMA = {
    "type": "object",
    "required": ["rep", "g", "lambda"],
    "properties": {
        "rep": {"anyOf": [{"type": "string"}, {"type": "object"}]},
        "g": {"type": "array", "items": _COMPLEX},
        "lambda": _INT_ARRAY,
        "Q": _INT_ARRAY,
    },
}
CERTIFICATE_SCHEMA = {
    "type": "object",
    "required": ["gamma", "certificate_norm", "is_removable", "reduced_bounds",
                 "gamma_density", "trace"],
    "properties": {
        "gamma": _INT_ARRAY,
        "certificate_norm": {"type": "number"},
        "is_removable": {"type": "boolean"},
        "reduced_bounds": {"type": "array", "items": {"type": "number"},
                           "minItems": 2, "maxItems": 2},
        "gamma_density": {"type": "number"},
        "trace": {"type": "object"},
    },
}


def _pointer(base, path):
    parts = [str(p).replace("~", "~0").replace("/", "~1") for p in path]
    return base + "".join("/" + p for p in parts)


def _check(doc, schema, base=""):
    err = jsonschema.exceptions.best_match(jsonschema.Draft7Validator(schema).iter_errors(doc))
    if err is not None:
        raise SchemaError(_pointer(base, err.absolute_path), err.message)


def complex_to_json(z):
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1).tolist()


def complex_from_json(data):
    a = np.asarray(data, dtype=float)
    return a[..., 0] + 1j * a[..., 1]


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return complex_to_json(obj) if np.iscomplexobj(obj) else obj.tolist()
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def dumps(obj):
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True)


def save_json(obj, path):
    try:
        Path(path).write_text(dumps(obj) + "\n")
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


def load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


# groups

def group_to_dict(group):
    return {"order": group.order, "cayley": group.cayley.tolist(), "label": group.label}


def _builtin_group(label):
    m = re.fullmatch(r"Z\d+(?:xZ\d+)*", label)
    if m:
        return make_cyclic_product([int(k) for k in re.findall(r"\d+", label)])
    m = re.fullmatch(r"Heis\((\d+)\)", label)
    if m:
        return make_heisenberg(int(m.group(1)))
    return None


def group_from_dict(doc, base=""):
    if isinstance(doc, str):
        group = _builtin_group(doc)
        if group is None:
            raise SchemaError(base, f"unknown group label {doc!r}")
        return group
    _check(doc, GROUP_SCHEMA, base)
    n = doc["order"]
    rows = doc["cayley"]
    if len(rows) != n:
        raise SchemaError(_pointer(base, ["cayley"]), f"expected {n} rows, found {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise SchemaError(_pointer(base, ["cayley", i]), f"row has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            if v >= n:
                raise SchemaError(_pointer(base, ["cayley", i, j]), f"entry {v} out of range")
    label = doc.get("label", "")
    builtin = _builtin_group(label) if label else None
    if builtin is not None and builtin.order == n and np.array_equal(builtin.cayley, rows):
        return builtin
    try:
        return FiniteGroup.from_table(rows, label)
    except ValueError as exc:
        raise SchemaError(_pointer(base, ["cayley"]), str(exc)) from None


# representations

def rep_to_dict(rep, embed_group=True):
    return {
        "group": group_to_dict(rep.group) if embed_group else rep.group.label,
        "dim": rep.dim,
        "matrices": complex_to_json(rep.matrices),
        "label": rep.label,
    }


def resolve_rep_ref(ref, base=""):
    """'gabor:N', 'heisenberg:N', or a path to a representation JSON file."""
    m = re.fullmatch(r"(gabor|heisenberg):(\d+)", ref)
    if m:
        N = int(m.group(2))
        return gabor_rep(N) if m.group(1) == "gabor" else heisenberg_schroedinger_rep(N)
    if Path(ref).exists():
        return rep_from_dict(load_json(ref))
    raise SchemaError(base, f"unknown representation reference {ref!r}")


def rep_from_dict(doc, base=""):
    if isinstance(doc, str):
        return resolve_rep_ref(doc, base)
    _check(doc, REP_SCHEMA, base)
    group = group_from_dict(doc["group"], _pointer(base, ["group"]))
    d = doc["dim"]
    mats = doc["matrices"]
    if len(mats) != group.order:
        raise SchemaError(_pointer(base, ["matrices"]), f"expected {group.order} matrices")
    for x, mat in enumerate(mats):
        if len(mat) != d:
            raise SchemaError(_pointer(base, ["matrices", x]), f"expected {d} rows")
        for i, row in enumerate(mat):
            if len(row) != d:
                raise SchemaError(_pointer(base, ["matrices", x, i]), f"expected {d} entries")
    try:
        return ProjectiveRep(group, complex_from_json(mats), label=doc.get("label", ""))
    except (ValueError, FrameError) as exc:
        raise SchemaError(_pointer(base, ["matrices"]), str(exc)) from None


# systems

def system_to_dict(sys, rep_ref=None):
    return {
        "rep": rep_ref if rep_ref is not None else (sys.rep.label if _is_builtin(sys.rep.label)
                                                    else rep_to_dict(sys.rep)),
        "g": complex_to_json(sys.g),
        "lambda": list(sys.lam),
        "Q": list(sys.Q.elements),
    }


def _is_builtin(label):
    return bool(re.fullmatch(r"(gabor|heisenberg):\d+", label or ""))


def system_from_dict(doc, base=""):
    _check(doc, SYSTEM_SCHEMA, base)
    rep = rep_from_dict(doc["rep"], _pointer(base, ["rep"]))
    g = complex_from_json(doc["g"])
    if g.shape != (rep.dim,):
        raise SchemaError(_pointer(base, ["g"]), f"expected {rep.dim} entries")
    Q = doc.get("Q", [rep.group.identity])
    try:
        return CoherentSystem(rep, g, tuple(doc["lambda"]), make_window(rep.group, Q))
    except (ValueError, FrameError) as exc:
        raise SchemaError(base, str(exc)) from None


# certificates

def certificate_to_dict(cert):
    return to_jsonable({
        "gamma": list(cert.gamma),
        "certificate_norm": cert.certificate_norm,
        "is_removable": cert.is_removable,
        "reduced_bounds": list(cert.reduced_bounds),
        "gamma_density": cert.gamma_density,
        "trace": cert.trace,
    })


def certificate_from_dict(doc, base=""):
    _check(doc, CERTIFICATE_SCHEMA, base)
    return RemovalCertificate(tuple(doc["gamma"]), float(doc["certificate_norm"]),
                              bool(doc["is_removable"]), tuple(doc["reduced_bounds"]),
                              float(doc["gamma_density"]), dict(doc["trace"]))


def windows_to_json(windows):
    return [list(w.elements) for w in windows]


def windows_from_json(group, data, base=""):
    if not isinstance(data, list) or not data:
        raise SchemaError(base, "window sequence must be a nonempty array of arrays")
    out = []
    for i, w in enumerate(data):
        if not isinstance(w, list) or not all(isinstance(v, int) for v in w):
            raise SchemaError(_pointer(base, [i]), "window must be an integer array")
        try:
            out.append(make_window(group, w))
        except ValueError as exc:
            raise SchemaError(_pointer(base, [i]), str(exc)) from None
    try:
        return window_sequence(out)
    except ValueError as exc:
        raise SchemaError(base, str(exc)) from None

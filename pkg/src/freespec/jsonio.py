"""JSON encodings for matrices, tuples, contexts, series, jets and reports.

Matrix: ``{"rows": n, "cols": m, "data": [[re, im], ...]}`` in row-major order.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .autanalysis import AutJet
from .errors import FreespecError
from .freefun import PowerSeries
from .freesets import FreePolynomial, Membership, PencilContext, Realization, as_tuple


def encode_matrix(M) -> dict:
    M = np.atleast_2d(np.asarray(M, dtype=np.complex128))
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "data": [[float(z.real), float(z.imag)] for z in M.reshape(-1)],
    }


def decode_matrix(obj) -> np.ndarray:
    try:
        rows, cols, data = int(obj["rows"]), int(obj["cols"]), obj["data"]
        if len(data) != rows * cols:
            raise FreespecError(f"matrix data has {len(data)} entries, expected {rows * cols}")
        flat = np.array([complex(re, im) for re, im in data], dtype=np.complex128)
    except (KeyError, TypeError, ValueError) as exc:
        raise FreespecError(f"malformed matrix: {exc}") from exc
    return flat.reshape(rows, cols)


def encode_tuple(X) -> dict:
    X = as_tuple(X)
    return {"g": int(X.shape[0]), "entries": [encode_matrix(x) for x in X]}


def decode_tuple(obj) -> np.ndarray:
    try:
        entries = [decode_matrix(m) for m in obj["entries"]]
        g = int(obj.get("g", len(entries)))
    except (KeyError, TypeError) as exc:
        raise FreespecError(f"malformed tuple: {exc}") from exc
    if g != len(entries):
        raise FreespecError(f"tuple declares g={g} but has {len(entries)} entries")
    return as_tuple(entries)


def encode_context(ctx: PencilContext) -> dict:
    return {"s": ctx.s, "C1": encode_matrix(ctx.C1), "C2": encode_matrix(ctx.C2)}


def decode_context(obj) -> PencilContext:
    try:
        ctx = PencilContext(decode_matrix(obj["C1"]), decode_matrix(obj["C2"]))
    except (KeyError, TypeError) as exc:
        raise FreespecError(f"malformed context: {exc}") from exc
    if "s" in obj and int(obj["s"]) != ctx.s:
        raise FreespecError(f"context declares s={obj['s']} but C has size {ctx.s}")
    return ctx


def encode_series(F: FreePolynomial) -> dict:
    return {
        "g": F.g,
        "trunc": F.trunc if F.trunc is not None else F.degree,
        "terms": [{"word": list(w), "coeff": encode_matrix(c)} for w, c in sorted(F.coeffs.items())],
    }


def decode_series(obj) -> PowerSeries:
    try:
        coeffs = {tuple(int(i) for i in t["word"]): decode_matrix(t["coeff"]) for t in obj["terms"]}
        return PowerSeries(int(obj["g"]), coeffs, int(obj["trunc"]))
    except (KeyError, TypeError) as exc:
        raise FreespecError(f"malformed series: {exc}") from exc


def encode_jet(jet: AutJet) -> dict:
    return {"b": [[float(z.real), float(z.imag)] for z in jet.b], "L": encode_matrix(jet.L)}


def decode_jet(obj) -> AutJet:
    try:
        b = [complex(re, im) for re, im in obj["b"]]
        return AutJet(b, decode_matrix(obj["L"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FreespecError(f"malformed jet: {exc}") from exc


def encode_realization(r: Realization) -> dict:
    return {"A": encode_tuple(r.A), "c": encode_matrix(r.c[:, None]), "b": encode_matrix(r.b[:, None])}


def to_jsonable(obj):
    """Recursively convert report values (arrays, numpy scalars, enums) to plain JSON."""
    if isinstance(obj, Membership):
        return obj.to_json()
    if isinstance(obj, AutJet):
        return encode_jet(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if obj.ndim == 3:
            return encode_tuple(obj)
        if obj.ndim <= 2 and np.iscomplexobj(obj):
            return encode_matrix(obj)
        return obj.tolist()
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, (np.complexfloating, complex)):
        return [float(obj.real), float(obj.imag)]
    return obj


def dumps(report) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FreespecError(f"{path}: invalid JSON ({exc})") from exc

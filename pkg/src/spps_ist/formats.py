"""On-disk formats: scattering-data JSON and solution CSV.

Floats are written with ``repr``, which is the shortest decimal string that
reads back to the same double, so a write/read cycle is bit-exact.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .direct import UNITARITY_TOL, ScatteringData
from .errors import ParseError

FORMAT_TAG = "spps-ist/scattering-data"
FORMAT_VERSION = 1
SOLUTION_HEADER = ("x", "re_q", "im_q", "abs_q")


def _num(v):
    v = float(v)
    if math.isfinite(v):
        return repr(v)
    # JSON has no inf/nan literals; keep them as strings
    return json.dumps(repr(v))


def _pair(c):
    return f"[{_num(c.real)}, {_num(c.imag)}]"


def _block(name, items):
    if not items:
        return f'  "{name}": []'
    return f'  "{name}": [\n    ' + ",\n    ".join(items) + "\n  ]"


def dumps_scattering_data(sd: ScatteringData) -> str:
    """JSON text with one array element per line (diff friendly)."""
    meta = {k: v for k, v in sd.meta.items()}
    parts = [
        f'  "format": "{FORMAT_TAG}"',
        f'  "version": {FORMAT_VERSION}',
        '  "meta": ' + json.dumps(meta, sort_keys=True),
        _block("rho", [_num(r) for r in sd.rho]),
        _block("a", [_pair(c) for c in sd.a]),
        _block("b", [_pair(c) for c in sd.b]),
        _block("eigenvalues", [_pair(c) for c in sd.eigenvalues]),
        _block("norming_constants", [_pair(c) for c in sd.norming_constants]),
    ]
    return "{\n" + ",\n".join(parts) + "\n}\n"


def _line_of(text, key):
    idx = text.find(f'"{key}"')
    return text.count("\n", 0, idx) + 1 if idx >= 0 else None


def _real(v, text, key, i):
    if isinstance(v, str):
        try:
            out = float(v)
        except ValueError:
            out = None
        if out is not None and not math.isfinite(out):
            return out
    elif isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    line = _line_of(text, key)
    raise ParseError(f"{key}[{i}]: expected a number, got {v!r}",
                     line + 1 + i if line else None, key)


def _reals(obj, key, text):
    vals = obj.get(key)
    if not isinstance(vals, list):
        raise ParseError(f"field {key!r} missing or not a list", _line_of(text, key), key)
    return np.array([_real(v, text, key, i) for i, v in enumerate(vals)], dtype=float)


def _complexes(obj, key, text):
    vals = obj.get(key)
    if not isinstance(vals, list):
        raise ParseError(f"field {key!r} missing or not a list", _line_of(text, key), key)
    out = np.empty(len(vals), dtype=complex)
    for i, v in enumerate(vals):
        if not (isinstance(v, list) and len(v) == 2):
            line = _line_of(text, key)
            raise ParseError(f"{key}[{i}]: expected a [re, im] pair, got {v!r}",
                             line + 1 + i if line else None, key)
        out[i] = complex(_real(v[0], text, key, i), _real(v[1], text, key, i))
    return out


def loads_scattering_data(text: str, tol=UNITARITY_TOL) -> ScatteringData:
    """Parse scattering-data JSON.

    Structural problems raise :class:`ParseError` with the line and field.
    Data that parse but fail the unitarity identity (or other consistency
    checks) are returned with the problems listed in ``sd.validation``.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", exc.lineno, None) from None
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object", 1, None)
    if obj.get("format", FORMAT_TAG) != FORMAT_TAG:
        raise ParseError(f"unknown format tag {obj.get('format')!r}", _line_of(text, "format"),
                         "format")
    meta = obj.get("meta", {})
    if not isinstance(meta, dict):
        raise ParseError("meta must be an object", _line_of(text, "meta"), "meta")
    rho = _reals(obj, "rho", text)
    a = _complexes(obj, "a", text)
    b = _complexes(obj, "b", text)
    ev = _complexes(obj, "eigenvalues", text)
    cn = _complexes(obj, "norming_constants", text)
    if not (len(rho) == len(a) == len(b)):
        raise ParseError(f"rho, a, b lengths differ ({len(rho)}, {len(a)}, {len(b)})",
                         _line_of(text, "b"), "b")
    if len(ev) != len(cn):
        raise ParseError(f"{len(ev)} eigenvalues but {len(cn)} norming constants",
                         _line_of(text, "norming_constants"), "norming_constants")
    sd = ScatteringData(rho, a, b, ev, cn, dict(meta))
    sd.validation = sd.validate(tol)
    return sd


def save_scattering_data(path, sd: ScatteringData):
    Path(path).write_text(dumps_scattering_data(sd))


def load_scattering_data(path, tol=UNITARITY_TOL) -> ScatteringData:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}", None, None) from exc
    return loads_scattering_data(text, tol)


def save_solution(path, x, q):
    """CSV with columns ``x, Re q, Im q, |q|``."""
    q = np.asarray(q, dtype=complex)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SOLUTION_HEADER)
        for xi, qi in zip(np.asarray(x, dtype=float), q):
            w.writerow((repr(float(xi)), repr(float(qi.real)), repr(float(qi.imag)),
                        repr(float(abs(qi)))))


def load_solution(path):
    """Read a solution CSV back as ``(x, q)``."""
    xs, qs = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if lineno == 1 and tuple(row) == SOLUTION_HEADER:
                continue
            if len(row) != 4:
                raise ParseError(f"expected 4 columns, got {len(row)}", lineno, None)
            try:
                x, re, im = float(row[0]), float(row[1]), float(row[2])
            except ValueError:
                bad = next(n for n, c in zip(SOLUTION_HEADER, row) if not _is_float(c))
                raise ParseError(f"non-numeric value in column {bad}", lineno, bad) from None
            xs.append(x)
            qs.append(complex(re, im))
    return np.array(xs), np.array(qs, dtype=complex)


def _is_float(s):
    try:
        float(s)
    except ValueError:
        return False
    return True

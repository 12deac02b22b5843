"""JSON frame/operator files and CSV measurement files.

Frame file::

    {"field": "real" | "complex", "dim": n, "vectors": [[...], ...]}

Complex entries are written as ``[re, im]`` pairs. Floats go through
``repr``, which is the shortest string that parses back to the same double,
so files round-trip bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .core import Field, Frame, SelfAdjoint

__all__ = [
    "FormatError",
    "frame_to_json",
    "frame_from_json",
    "operator_to_json",
    "operator_from_json",
    "dump_frame",
    "load_frame",
    "dump_operator",
    "load_operator",
    "dump_measurements",
    "load_measurements",
    "measurements_to_csv",
    "measurements_from_csv",
]


class FormatError(ValueError):
    """A file does not follow the frame, operator or measurement schema."""


def _finite(x) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"expected a number, got {x!r}")
    x = float(x)
    if not math.isfinite(x):
        raise FormatError("NaN and infinite entries are not allowed")
    return x


def _encode(arr: np.ndarray, field: Field) -> list:
    if field is Field.REAL:
        return arr.real.tolist()
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def _decode_rows(rows, field: Field, width: int | None, what: str) -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise FormatError(f"{what} must be a non-empty list of rows")
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list):
            raise FormatError(f"{what} row {r} is not a list")
        if width is not None and len(row) != width:
            raise FormatError(f"{what} row {r} has {len(row)} entries, expected {width}")
        if field is Field.REAL:
            out.append([_finite(v) for v in row])
        else:
            vals = []
            for v in row:
                if not (isinstance(v, list) and len(v) == 2):
                    raise FormatError(f"complex entries must be [re, im] pairs, got {v!r}")
                vals.append(complex(_finite(v[0]), _finite(v[1])))
            out.append(vals)
    return np.array(out, dtype=field.dtype)


def _field(doc: dict) -> Field:
    try:
        return Field(doc["field"])
    except (KeyError, ValueError):
        raise FormatError('"field" must be "real" or "complex"') from None


def _dim(doc: dict) -> int:
    n = doc.get("dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise FormatError('"dim" must be a positive integer')
    return n


def frame_to_json(frame: Frame) -> dict:
    return {"field": frame.field.value, "dim": frame.n, "vectors": _encode(frame.vectors, frame.field)}


def frame_from_json(doc) -> Frame:
    if not isinstance(doc, dict):
        raise FormatError("frame document must be a JSON object")
    field, n = _field(doc), _dim(doc)
    return Frame(_decode_rows(doc.get("vectors"), field, n, "vectors"), field)


def operator_to_json(T: SelfAdjoint) -> dict:
    return {"field": T.field.value, "dim": T.n, "matrix": _encode(T.matrix, T.field)}


def operator_from_json(doc) -> SelfAdjoint:
    if not isinstance(doc, dict):
        raise FormatError("operator document must be a JSON object")
    field, n = _field(doc), _dim(doc)
    M = _decode_rows(doc.get("matrix"), field, n, "matrix")
    if M.shape != (n, n):
        raise FormatError(f"matrix must be {n}x{n}")
    return SelfAdjoint(M, field)


def _dump(doc: dict, path) -> None:
    Path(path).write_text(json.dumps(doc, allow_nan=False) + "\n")


def _load(path):
    try:
        return json.loads(Path(path).read_text(), parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg})") from None


def _reject_constant(name: str):
    raise FormatError(f"non-finite constant {name} in JSON input")


def dump_frame(frame: Frame, path) -> None:
    _dump(frame_to_json(frame), path)


def load_frame(path) -> Frame:
    return frame_from_json(_load(path))


def dump_operator(T: SelfAdjoint, path) -> None:
    _dump(operator_to_json(T), path)


def load_operator(path) -> SelfAdjoint:
    return operator_from_json(_load(path))


def measurements_to_csv(a) -> str:
    buf = io.StringIO()
    buf.write("a\n")
    for v in np.asarray(a, dtype=float):
        buf.write(repr(float(v)) + "\n")
    return buf.getvalue()


def measurements_from_csv(text: str) -> np.ndarray:
    values = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or not "".join(row).strip():
            continue
        if len(row) != 1:
            raise FormatError(f"line {lineno}: expected one value per line")
        cell = row[0].strip()
        if lineno == 1 and cell == "a":
            continue
        try:
            v = float(cell)
        except ValueError:
            raise FormatError(f"line {lineno}: {cell!r} is not a number") from None
        if not math.isfinite(v):
            raise FormatError(f"line {lineno}: non-finite value")
        values.append(v)
    if not values:
        raise FormatError("no measurements found")
    return np.array(values)


def dump_measurements(a, path) -> None:
    Path(path).write_text(measurements_to_csv(a))


def load_measurements(path) -> np.ndarray:
    return measurements_from_csv(Path(path).read_text())

"""Matrix files and deterministic report text.

A matrix file is one JSON document::

    {
      "name": "A",
      "dim": 2,
      "entries": [[1, 0], [0, 0], [0, 0], [1, 0]],
      "tol": {"herm_tol": 1e-8}
    }

``entries`` lists ``dim**2`` complex numbers as ``[re, im]`` pairs in
row-major order; ``tol`` is optional. Rectangular, non-Hermitian matrices
(isometries in convexity witnesses) use ``"kind": "general"`` with
``"rows"`` and ``"cols"`` instead of ``"dim"``.

All floats are written with 17 significant digits, so a write/read cycle
reproduces every double exactly and equal inputs give byte-equal output.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError
from .extended import is_inf
from .spectral import HERM_TOL, opnorm

TOL_KEYS = ("herm_tol", "rank_tol", "inv_tol")
_HERMITIAN_KEYS = {"name", "dim", "entries", "tol", "kind"}
_GENERAL_KEYS = {"name", "rows", "cols", "entries", "kind", "tol"}
# Larger magnitudes overflow once squared (A + B, congruences, eigensolvers).
MAX_ENTRY = 1e150


@dataclass
class MatrixFile:
    name: str
    matrix: np.ndarray
    tol: dict = field(default_factory=dict)
    kind: str = "hermitian"


def _fmt_float(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    return format(x, ".17g")


def _is_scalar(v):
    return v is None or isinstance(v, (bool, int, float, str, np.floating, np.integer)) or is_inf(v)


def _scalar(v) -> str:
    if v is None:
        return "null"
    if is_inf(v):
        return '"+inf"'
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return _fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=True)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps(obj, indent: int = 0) -> str:
    """JSON text with fixed float formatting; dict keys keep insertion order."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if all(_is_scalar(v) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    return _scalar(obj)


def entries_of(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[float(z.real), float(z.imag)] for z in M.reshape(-1)]


def matrix_document(M, name: str, tol: dict | None = None, general: bool = False) -> dict:
    M = np.asarray(M, dtype=complex)
    doc = {"name": name}
    if general:
        doc["kind"] = "general"
        doc["rows"], doc["cols"] = int(M.shape[0]), int(M.shape[1])
    else:
        doc["dim"] = int(M.shape[0])
    doc["entries"] = entries_of(M)
    if tol:
        doc["tol"] = {k: float(tol[k]) for k in TOL_KEYS if k in tol}
    return doc


def write_matrix_file(path, M, name: str, tol: dict | None = None, general: bool = False):
    Path(path).write_text(dumps(matrix_document(M, name, tol, general)) + "\n", encoding="ascii")


def _real(x, where):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"{where}: expected a number, got {type(x).__name__}")
    try:
        x = float(x)
    except OverflowError:
        raise ParseError(f"{where}: number out of range") from None
    if not math.isfinite(x):
        raise ParseError(f"{where}: non-finite value")
    if abs(x) > MAX_ENTRY:
        raise ParseError(f"{where}: magnitude exceeds {MAX_ENTRY:g}")
    return x


def _posint(x, key):
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise ParseError(f"{key!r} must be a positive integer")
    return x


def parse_matrix_document(doc, herm_tol: float = HERM_TOL, force_herm_tol: bool = False) -> MatrixFile:
    """Validate a decoded document; every failure is a :class:`ParseError`.

    A ``tol.herm_tol`` stored in the document takes precedence over
    ``herm_tol`` unless ``force_herm_tol`` is set.
    """
    if not isinstance(doc, dict):
        raise ParseError("matrix file must be a JSON object")
    kind = doc.get("kind", "hermitian")
    if kind not in ("hermitian", "general"):
        raise ParseError(f"unknown kind {kind!r}")
    allowed = _HERMITIAN_KEYS if kind == "hermitian" else _GENERAL_KEYS
    unknown = set(doc) - allowed
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}")
    name = doc.get("name")
    if not isinstance(name, str):
        raise ParseError("'name' must be a string")
    if kind == "hermitian":
        if "dim" not in doc:
            raise ParseError("missing 'dim'")
        rows = cols = _posint(doc["dim"], "dim")
    else:
        if "rows" not in doc or "cols" not in doc:
            raise ParseError("general matrices need 'rows' and 'cols'")
        rows, cols = _posint(doc["rows"], "rows"), _posint(doc["cols"], "cols")
    entries = doc.get("entries")
    if not isinstance(entries, list):
        raise ParseError("'entries' must be a list")
    if len(entries) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, got {len(entries)}")
    flat = np.empty(rows * cols, dtype=complex)
    for i, e in enumerate(entries):
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"entry {i} must be a [re, im] pair")
        flat[i] = complex(_real(e[0], f"entry {i}"), _real(e[1], f"entry {i}"))
    tol = {}
    if "tol" in doc:
        raw = doc["tol"]
        if not isinstance(raw, dict) or set(raw) - set(TOL_KEYS):
            raise ParseError(f"'tol' must be an object with keys among {TOL_KEYS}")
        for k, v in raw.items():
            v = _real(v, f"tol.{k}")
            if v < 0:
                raise ParseError(f"tol.{k} must be nonnegative")
            tol[k] = v
    M = flat.reshape(rows, cols)
    if kind == "hermitian":
        ht = herm_tol if force_herm_tol else tol.get("herm_tol", herm_tol)
        if opnorm(M - M.conj().T) > ht * max(1.0, opnorm(M)):
            raise ParseError(f"matrix {name!r} is not Hermitian within herm_tol={ht}")
        M = (M + M.conj().T) / 2
    return MatrixFile(name, M, tol, kind)


def read_matrix_file(path, herm_tol: float = HERM_TOL, force_herm_tol: bool = False) -> MatrixFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except (ValueError, RecursionError) as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    return parse_matrix_document(doc, herm_tol, force_herm_tol)


def matrix_report(M) -> dict:
    M = np.asarray(M, dtype=complex)
    return {"dim": int(M.shape[0]), "entries": entries_of(M)}

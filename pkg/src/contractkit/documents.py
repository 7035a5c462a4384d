"""JSON documents for systems and contracts.

A system document looks like::

    {"name": "guarantees",
     "A": [["1", "0"], ["0", "1"]],
     "G": [["1"], ["0"]],
     "C": [["1", "0"]],
     "H": [["-1", "1/2"]]}

Entries are rational strings (``"3"``, ``"-1/2"``, ``"0.8"``); JSON numbers
are accepted too and read through their decimal text. ``H`` may be ``[]``
for no constraints and ``G`` may be a list of empty rows for no driving
variable. A contract document has ``assumptions`` and ``guarantees`` keys,
each either an inline system document or a path relative to the contract
file.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

from .contracts import Contract
from .errors import ParseError
from .subspace import Matrix, Subspace, to_fraction
from .system import DVSystem

__all__ = [
    "parse_system",
    "dump_system",
    "load_system",
    "save_system",
    "dumps",
    "parse_contract",
    "dump_contract",
    "load_contract",
    "bundled_path",
    "subspace_to_json",
]

MATRIX_KEYS = ("A", "G", "C", "H")


def _parse_matrix(key: str, raw, width: int | None) -> Matrix:
    if not isinstance(raw, list):
        raise ParseError(f"matrix '{key}' must be a list of rows")
    if not raw:
        if width is None:
            raise ParseError(f"matrix '{key}' is empty")
        return Matrix((), width)
    rows = []
    for i, row in enumerate(raw):
        if not isinstance(row, list):
            raise ParseError(f"matrix '{key}' row {i + 1} is not a list")
        try:
            rows.append([to_fraction(x) for x in row])
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ParseError(f"matrix '{key}' row {i + 1}: bad entry ({exc})") from None
    expected = len(rows[0]) if width is None else width
    for i, row in enumerate(rows):
        if len(row) != expected:
            raise ParseError(
                f"matrix '{key}' row {i + 1} has {len(row)} entries, expected {expected}"
            )
    return Matrix(rows, expected)


def parse_system(doc: dict) -> DVSystem:
    if not isinstance(doc, dict):
        raise ParseError("a system document must be a JSON object")
    missing = [k for k in ("A", "C") if k not in doc]
    if missing:
        raise ParseError(f"system document is missing {', '.join(missing)}")
    A = _parse_matrix("A", doc["A"], None)
    n = A.nrows
    G = _parse_matrix("G", doc.get("G", [[] for _ in range(n)]), None)
    C = _parse_matrix("C", doc["C"], n)
    H = _parse_matrix("H", doc.get("H", []), n)
    try:
        return DVSystem(A, G, C, H, doc.get("name"))
    except ValueError as exc:
        raise ParseError(f"inconsistent system '{doc.get('name', '?')}': {exc}") from None


def _rows(M: Matrix) -> list[list[str]]:
    return [[str(x) for x in row] for row in M.rows]


def dump_system(sys: DVSystem) -> dict:
    doc = {"name": sys.name} if sys.name else {}
    for key in MATRIX_KEYS:
        doc[key] = _rows(getattr(sys, key))
    return doc


def _read_json(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from None


def dumps(doc: dict) -> str:
    """JSON text with one matrix row per line."""
    text = json.dumps(doc, indent=2)
    # collapse innermost lists (matrix rows) onto single lines
    return re.sub(
        r"\[\s*((?:\"[^\"]*\"(?:,\s*)?)*)\s*\]",
        lambda m: "[" + ", ".join(re.findall(r'"[^"]*"', m.group(1))) + "]",
        text,
    ) + "\n"


def load_system(path) -> DVSystem:
    return parse_system(_read_json(path))


def save_system(sys: DVSystem, path) -> None:
    Path(path).write_text(dumps(dump_system(sys)), encoding="utf-8")


def _resolve_system(raw, base: Path) -> DVSystem:
    if isinstance(raw, str):
        return load_system(base / raw)
    return parse_system(raw)


def parse_contract(doc: dict, base: Path | str = ".") -> Contract:
    if not isinstance(doc, dict) or "assumptions" not in doc or "guarantees" not in doc:
        raise ParseError("a contract document needs 'assumptions' and 'guarantees'")
    base = Path(base)
    a = _resolve_system(doc["assumptions"], base)
    g = _resolve_system(doc["guarantees"], base)
    try:
        return Contract(a, g, doc.get("name"))
    except ValueError as exc:
        raise ParseError(f"inconsistent contract: {exc}") from None


def dump_contract(contract: Contract) -> dict:
    doc = {"name": contract.name} if contract.name else {}
    doc["assumptions"] = dump_system(contract.assumptions)
    doc["guarantees"] = dump_system(contract.guarantees)
    return doc


def load_contract(path) -> Contract:
    path = Path(path)
    return parse_contract(_read_json(path), path.parent)


def bundled_path(name: str) -> Path:
    """Path of one of the example documents shipped with the package."""
    return Path(str(resources.files("contractkit") / "data" / name))


def subspace_to_json(V: Subspace) -> dict:
    return {
        "ambient_dim": V.ambient_dim,
        "dim": V.dim,
        "basis": [[str(x) for x in v] for v in V.vectors],
    }

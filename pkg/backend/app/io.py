# backend/app/io.py
"""
JSON documents in and out: algebra, shear, matrix and family files.
Every input is schema-checked with jsonschema before any model is built,
so malformed files fail with a JSON path rather than a numpy traceback.
"""

import json
from functools import lru_cache
from pathlib import Path

import numpy as np
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from app.config import DEFAULT_TOL, SCHEMA_DIR, SCHEMA_VERSION
from app.core.hermitian import HermitianStructure
from app.core.lie import LieAlgebra
from app.core.shear import PreShearData
from app.core.tensor import standard_structure
from app.errors import DimensionMismatchError, InputError, SchemaValidationError
from app.families.params import parse_family_params
from app.logs import get_logger

logger = get_logger(__name__)


# --- Raw JSON ---

def loads_json(text: str, source: str = "<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{source}: malformed JSON at line {exc.lineno} column {exc.colno} (position {exc.pos}): {exc.msg}"
        ) from exc


def read_json(path: Path):
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path} not found.")
    with path.open("r", encoding="utf-8") as f:
        text = f.read()
    return loads_json(text, source=path.name)


def dumps(doc) -> str:
    """Stable text form: sorted keys, so equal documents give equal bytes."""
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


# --- Schemas ---

@lru_cache(maxsize=None)
def _validator(name: str) -> Draft202012Validator:
    with (SCHEMA_DIR / f"{name}.schema.json").open("r", encoding="utf-8") as f:
        return Draft202012Validator(json.load(f))


def _json_path(error) -> str:
    parts = ["$"]
    for item in error.absolute_path:
        parts.append(f"[{item}]" if isinstance(item, int) else f".{item}")
    return "".join(parts)


def validate(doc, schema: str) -> None:
    error = best_match(_validator(schema).iter_errors(doc))
    if error is not None:
        raise SchemaValidationError(f"{schema} document invalid at {_json_path(error)}: {error.message}")


# --- Algebras ---

def _square(values, size: int, label: str) -> np.ndarray:
    M = np.asarray(values, dtype=float)
    if M.shape != (size, size):
        raise DimensionMismatchError(f"{label} must be {size} x {size}, got {M.shape}")
    return M


def algebra_from_doc(doc: dict) -> tuple[LieAlgebra, HermitianStructure | None]:
    """The Hermitian pair is attached when metric or J is present; the other defaults to standard."""
    validate(doc, "algebra")
    N = doc["dim"]
    entries = [(e["i"], e["j"], e["k"], e["c"]) for e in doc["structure"]]
    L = LieAlgebra.from_entries(N, entries, name=doc.get("name", ""))
    if "metric" not in doc and "J" not in doc:
        return L, None
    if N % 2:
        raise DimensionMismatchError(f"a Hermitian structure needs even dimension, got {N}")
    g0, J0, _ = standard_structure(N // 2)
    g = _square(doc["metric"], N, "metric") if "metric" in doc else g0
    J = _square(doc["J"], N, "J") if "J" in doc else J0
    return L, HermitianStructure(L, g, J)


def algebra_to_doc(L: LieAlgebra, H: HermitianStructure | None = None, tol: float = 0.0) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "dim": L.dim,
        "structure": [{"i": i, "j": j, "k": k, "c": float(c)} for i, j, k, c in L.entries(tol)],
    }
    if L.name:
        doc["name"] = L.name
    if H is not None:
        doc["metric"] = H.metric.tolist()
        doc["J"] = H.J.tolist()
    return doc


def load_algebra(path: Path) -> tuple[LieAlgebra, HermitianStructure | None]:
    return algebra_from_doc(read_json(path))


# --- Shear data ---

def shear_from_doc(doc: dict, tol: float = DEFAULT_TOL) -> PreShearData:
    validate(doc, "shear")
    n = doc["n"]
    N = 2 * n
    for row, vec in enumerate(doc["a_basis"]):
        if len(vec) != N:
            raise DimensionMismatchError(f"a_basis[{row}] has length {len(vec)}, expected {N}")
    entries = []
    for e in doc["omega"]:
        if len(e["value"]) != N:
            raise DimensionMismatchError(f"ω({e['i']}, {e['j']}) has length {len(e['value'])}, expected {N}")
        entries.append((e["i"], e["j"], e["value"]))
    metric = _square(doc["metric"], N, "metric") if "metric" in doc else None
    J = _square(doc["J"], N, "J") if "J" in doc else None
    a_basis = doc["a_basis"] if doc["a_basis"] else np.zeros((0, N))
    return PreShearData.from_entries(n, a_basis, entries, metric=metric, J=J, tol=tol)


def shear_to_doc(data: PreShearData, tol: float = 0.0) -> dict:
    N = data.N
    omega = []
    for i in range(N):
        for j in range(i + 1, N):
            value = data.omega[i, j]
            if np.max(np.abs(value)) > tol:
                omega.append({"i": i + 1, "j": j + 1, "value": value.tolist()})
    return {
        "schema_version": SCHEMA_VERSION,
        "n": data.n,
        "a_basis": data.a.basis.T.tolist(),
        "omega": omega,
        "metric": data.metric.tolist(),
        "J": data.J.tolist(),
    }


def load_shear(path: Path, tol: float = DEFAULT_TOL) -> PreShearData:
    return shear_from_doc(read_json(path), tol)


# --- Matrices and family parameters ---

def matrix_from_doc(doc) -> np.ndarray:
    validate(doc, "matrix")
    rows = doc["matrix"] if isinstance(doc, dict) else doc
    if any(len(row) != len(rows) for row in rows):
        raise DimensionMismatchError(f"matrix must be square, got {len(rows)} rows of lengths "
                                     f"{sorted({len(r) for r in rows})}")
    return np.asarray(rows, dtype=float)


def load_matrix(path: Path) -> np.ndarray:
    return matrix_from_doc(read_json(path))


def family_from_doc(doc: dict):
    validate(doc, "family")
    return parse_family_params(doc)


def load_family(path: Path):
    return family_from_doc(read_json(path))

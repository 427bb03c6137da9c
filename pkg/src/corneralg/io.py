"""JSON persistence for algebra files.

Schema: an object with "n" (size), "basis" (list of n x n matrices, every
entry an [re, im] pair) and an optional "meta" object. Floats are written
with 17 significant digits, enough for an IEEE double to survive the text
encoding exactly, so encode(decode(text)) reproduces the file byte for byte.
"""

from __future__ import annotations

import json

import numpy as np

from .matcore import DEFAULT_TOL, Tolerance
from .subalgebra import MatrixAlgebra, algebra_from_span

__all__ = [
    "AlgebraFileError",
    "encode_algebra",
    "decode_algebra",
    "write_algebra",
    "read_algebra",
    "matrix_to_pairs",
    "pairs_to_matrix",
]


class AlgebraFileError(ValueError):
    """The file is missing, malformed, or violates the schema."""


def _fmt(x: float) -> str:
    s = format(float(x), ".17g")
    # keep a decimal point: a bare "-0" would reparse as the integer zero
    return s if ("." in s or "e" in s) else s + ".0"


def matrix_to_pairs(m: np.ndarray) -> list:
    """Nested [re, im] lists for embedding a matrix in a JSON report."""
    a = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def pairs_to_matrix(raw, n: int) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise AlgebraFileError(f"matrix entries must be [re, im] number pairs: {exc}")
    if arr.shape != (n, n, 2):
        raise AlgebraFileError(
            f"expected an {n}x{n} matrix of [re, im] pairs, got shape {arr.shape}"
        )
    if not np.all(np.isfinite(arr)):
        raise AlgebraFileError("matrix entries must be finite")
    out = np.empty((n, n), dtype=np.complex128)
    out.real = arr[..., 0]  # componentwise assignment keeps signed zeros
    out.imag = arr[..., 1]
    return out


def _matrix_text(m: np.ndarray) -> str:
    rows = []
    for row in np.asarray(m, dtype=np.complex128):
        cells = ", ".join(f"[{_fmt(z.real)}, {_fmt(z.imag)}]" for z in row)
        rows.append(f"[{cells}]")
    return "[" + ",\n     ".join(rows) + "]"


def encode_algebra(n: int, mats, meta: dict | None = None) -> str:
    """Serialize matrices to the algebra-file text.

    The numeric arrays are emitted directly because json.dump offers no
    control over float formatting; meta still goes through json.dumps.
    """
    for m in mats:
        a = np.asarray(m)
        if a.shape != (n, n):
            raise AlgebraFileError(f"basis element of shape {a.shape}, expected ({n}, {n})")
        if not np.all(np.isfinite(a)):
            raise AlgebraFileError("matrix entries must be finite")
    parts = [f'"n": {int(n)}']
    if meta:
        parts.append(f'"meta": {json.dumps(meta, sort_keys=True)}')
    body = ",\n    ".join(_matrix_text(m) for m in mats)
    parts.append(f'"basis": [\n    {body}\n  ]')
    return "{\n  " + ",\n  ".join(parts) + "\n}\n"


def decode_algebra(text: str):
    """Parse algebra-file text to (n, matrices, meta) without canonicalizing."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise AlgebraFileError(f"malformed JSON: {exc}")
    if not isinstance(doc, dict):
        raise AlgebraFileError("top level must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise AlgebraFileError('"n" must be a positive integer')
    basis = doc.get("basis")
    if not isinstance(basis, list) or not basis:
        raise AlgebraFileError('"basis" must be a non-empty list of matrices')
    meta = doc.get("meta", {})
    if not isinstance(meta, dict):
        raise AlgebraFileError('"meta" must be an object')
    mats = [pairs_to_matrix(raw, n) for raw in basis]
    return n, mats, meta


def write_algebra(path, alg: MatrixAlgebra, meta: dict | None = None) -> None:
    text = encode_algebra(alg.n, alg.basis, meta)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def read_algebra(path, tol: Tolerance = DEFAULT_TOL):
    """Load a file as (MatrixAlgebra, meta); the basis is orthonormalized.

    Any schema problem, and a span that is not multiplicatively closed,
    raises AlgebraFileError: both are defects of the input.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise AlgebraFileError(f"cannot read {path}: {exc}")
    n, mats, meta = decode_algebra(text)
    try:
        alg = algebra_from_span(mats, n=n, tol=tol)
    except ValueError as exc:
        raise AlgebraFileError(f"{path}: {exc}")
    return alg, meta

"""Dense complex-matrix kernel: SVD wrappers, numerical rank, Frobenius-orthonormal spans.

Everything downstream treats a matrix subspace as a list of matrices that are
orthonormal with respect to the Frobenius inner product <X, Y> = Tr(Y* X).
This module owns the tolerance conventions used to make that numerically
meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "NumericalFailureError",
    "ShapeMismatchError",
    "as_matrix",
    "adjoint",
    "frob",
    "frob_inner",
    "vec",
    "unvec",
    "svd_factor",
    "rank_tol",
    "orthonormal_span",
    "gram",
    "haar_unitary",
    "random_similarity",
]

# Absolute floor for rank thresholds, so the zero matrix has rank 0 instead of
# dividing by sigma_max = 0.
_RANK_FLOOR = 1e-14


class NumericalFailureError(RuntimeError):
    """A numerical routine failed to converge or a verification failed."""


class ShapeMismatchError(ValueError):
    """Operands have incompatible shapes."""


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerances shared across the package.

    rel_eps governs membership and closure decisions; rank_eps_factor scales
    sigma_max to a rank cutoff.
    """

    rel_eps: float = 1e-8
    rank_eps_factor: float = 1e-9

    def __post_init__(self) -> None:
        if self.rel_eps <= 0 or self.rank_eps_factor <= 0:
            raise ValueError("tolerances must be strictly positive")


DEFAULT_TOL = Tolerance()


def as_matrix(x) -> np.ndarray:
    """Coerce to a 2-d complex128 array (copy only when needed)."""
    m = np.asarray(x, dtype=np.complex128)
    if m.ndim != 2:
        raise ShapeMismatchError(f"expected a 2-d array, got shape {m.shape}")
    if m.size == 0:
        raise ShapeMismatchError("empty matrix")
    return m


def adjoint(x: np.ndarray) -> np.ndarray:
    return x.conj().T


def frob(x: np.ndarray) -> float:
    return float(np.linalg.norm(x))


def frob_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """<X, Y> = Tr(Y* X)."""
    return complex(np.vdot(y, x))


def vec(x: np.ndarray) -> np.ndarray:
    return np.asarray(x).reshape(-1)


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v).reshape(rows, cols)


class SVD(NamedTuple):
    u: np.ndarray
    s: np.ndarray
    v: np.ndarray  # x ~ u @ diag(s) @ v.conj().T


def svd_factor(x) -> SVD:
    """Compact SVD; singular values descending.

    Non-convergence of the underlying iteration is reported as
    NumericalFailureError rather than leaking the LAPACK exception.
    """
    m = as_matrix(x)
    try:
        u, s, vh = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hard to trigger
        raise NumericalFailureError(f"SVD did not converge: {exc}") from exc
    return SVD(u, s, vh.conj().T)


def rank_tol(x, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above max(rank_eps_factor*sigma_max, floor)."""
    s = svd_factor(x).s
    if s.size == 0 or s[0] == 0.0:
        return 0
    thr = max(tol.rank_eps_factor * float(s[0]), _RANK_FLOOR)
    return int(np.count_nonzero(s > thr))


def _phase_fix(rows: np.ndarray) -> np.ndarray:
    """Rotate each row so its largest-modulus entry is real positive."""
    out = rows.copy()
    for i in range(out.shape[0]):
        j = int(np.argmax(np.abs(out[i])))
        a = out[i, j]
        if abs(a) > 0:
            out[i] *= abs(a) / a
    return out


def orthonormal_span(
    mats: Sequence[np.ndarray],
    tol: Tolerance = DEFAULT_TOL,
    shape: tuple[int, int] | None = None,
) -> list[np.ndarray]:
    """Frobenius-orthonormal basis of span(mats), deterministic given input order.

    The matrices are vectorized, stacked, and run through one SVD; directions
    with singular value at or below the rank threshold are dropped.
    """
    mats = [as_matrix(m) for m in mats]
    if not mats:
        return []
    r, c = mats[0].shape
    if shape is not None and (r, c) != shape:
        raise ShapeMismatchError(f"expected shape {shape}, got {(r, c)}")
    for m in mats:
        if m.shape != (r, c):
            raise ShapeMismatchError("mixed shapes in span input")
    stack = np.array([vec(m) for m in mats])
    u, s, vh = np.linalg.svd(stack, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return []
    thr = max(tol.rank_eps_factor * float(s[0]), _RANK_FLOOR)
    rank = int(np.count_nonzero(s > thr))
    basis = _phase_fix(vh[:rank])
    return [unvec(row, r, c) for row in basis]


def gram(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Gram matrix G[i, j] = <m_i, m_j> under the Frobenius inner product."""
    if not mats:
        return np.zeros((0, 0), dtype=np.complex128)
    stack = np.array([vec(m) for m in mats])
    return stack @ stack.conj().T


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with the R-diagonal phase fix."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_similarity(n: int, rng: np.random.Generator, max_cond: float = 50.0) -> np.ndarray:
    """Random invertible matrix with condition number <= max_cond (exact by construction)."""
    u1 = haar_unitary(n, rng)
    u2 = haar_unitary(n, rng)
    cond = float(rng.uniform(1.0, max_cond))
    sing = np.geomspace(1.0, cond, n)
    return (u1 * sing) @ u2

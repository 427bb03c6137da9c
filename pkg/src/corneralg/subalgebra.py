"""Matrix subspaces and multiplicatively closed subspaces of M_n.

A MatrixSubspace stores a Frobenius-orthonormal basis; membership and closure
questions reduce to least-squares residuals against the stacked, vectorized
basis, which keeps the hot paths inside BLAS.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .matcore import (
    DEFAULT_TOL,
    NumericalFailureError,
    ShapeMismatchError,
    Tolerance,
    as_matrix,
    frob,
    orthonormal_span,
    vec,
)

__all__ = [
    "MatrixSubspace",
    "MatrixAlgebra",
    "subspace_from",
    "algebra_from_span",
    "generated_algebra",
    "unitize",
    "compress",
    "conjugate",
    "transpose_variant",
    "closure_defect",
    "membership_residuals",
]


@dataclass(frozen=True, eq=False)
class MatrixSubspace:
    """A linear subspace of M_n with an orthonormal basis (tuple of n x n arrays)."""

    n: int
    basis: tuple
    tol: Tolerance = field(default=DEFAULT_TOL)

    def __post_init__(self) -> None:
        for b in self.basis:
            if b.shape != (self.n, self.n):
                raise ShapeMismatchError(
                    f"basis element of shape {b.shape} in M_{self.n} subspace"
                )

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def vecs(self) -> np.ndarray:
        """(dim, n*n) stack of vectorized basis elements (orthonormal rows)."""
        if not self.basis:
            return np.zeros((0, self.n * self.n), dtype=np.complex128)
        return np.array([vec(b) for b in self.basis])

    def project(self, x) -> np.ndarray:
        """Orthogonal projection of x onto the subspace."""
        m = as_matrix(x)
        coeffs = self.vecs @ vec(m).conj()
        return np.asarray((coeffs.conj() @ self.vecs).reshape(self.n, self.n))

    def residual(self, x) -> float:
        m = as_matrix(x)
        return frob(m - self.project(m))

    def contains(self, x) -> tuple[bool, float]:
        """Membership up to rel_eps * max(1, |x|_F)."""
        m = as_matrix(x)
        r = self.residual(m)
        return (r <= self.tol.rel_eps * max(1.0, frob(m)), r)

    def equals(self, other: "MatrixSubspace") -> bool:
        if self.n != other.n or self.dim != other.dim:
            return False
        return all(other.contains(b)[0] for b in self.basis) and all(
            self.contains(b)[0] for b in other.basis
        )


@dataclass(frozen=True, eq=False)
class MatrixAlgebra:
    """A multiplicatively closed MatrixSubspace; unital means the identity is a member."""

    space: MatrixSubspace
    unital: bool

    @property
    def n(self) -> int:
        return self.space.n

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def basis(self) -> tuple:
        return self.space.basis

    @property
    def tol(self) -> Tolerance:
        return self.space.tol


def subspace_from(
    mats: Sequence, n: int | None = None, tol: Tolerance = DEFAULT_TOL
) -> MatrixSubspace:
    mats = [as_matrix(m) for m in mats]
    if n is None:
        if not mats:
            raise ShapeMismatchError("cannot infer n from an empty generating set")
        n = mats[0].shape[0]
    basis = orthonormal_span(mats, tol=tol, shape=(n, n))
    return MatrixSubspace(n=n, basis=tuple(basis), tol=tol)


def membership_residuals(space: MatrixSubspace, stack: np.ndarray) -> np.ndarray:
    """Residual norms of a (m, n, n) stack against the subspace, in one gemm."""
    m = stack.reshape(stack.shape[0], -1)
    coeffs = m @ space.vecs.conj().T
    resid = m - coeffs @ space.vecs
    return np.linalg.norm(resid, axis=1)


def closure_defect(space: MatrixSubspace) -> float:
    """Largest relative residual of a pairwise basis product outside the span."""
    if space.dim == 0:
        return 0.0
    b = np.array(space.basis)
    prods = np.einsum("iab,jbc->ijac", b, b).reshape(-1, space.n, space.n)
    resid = membership_residuals(space, prods)
    norms = np.maximum(1.0, np.linalg.norm(prods.reshape(len(prods), -1), axis=1))
    return float(np.max(resid / norms))


def _check_closed(space: MatrixSubspace) -> None:
    defect = closure_defect(space)
    if defect > space.tol.rel_eps:
        raise ValueError(f"span is not multiplicatively closed (defect {defect:.3e})")


def _contains_identity(space: MatrixSubspace) -> bool:
    return space.contains(np.eye(space.n))[0]


def algebra_from_span(
    mats: Sequence, n: int | None = None, tol: Tolerance = DEFAULT_TOL
) -> MatrixAlgebra:
    """Build an algebra from a spanning set, verifying multiplicative closure."""
    space = subspace_from(mats, n=n, tol=tol)
    _check_closed(space)
    return MatrixAlgebra(space=space, unital=_contains_identity(space))


def generated_algebra(
    gens: Sequence,
    include_identity: bool = True,
    n: int | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> MatrixAlgebra:
    """Smallest subalgebra containing the generators (optionally forced unital).

    Iterates span -> span + pairwise products until the dimension stabilizes;
    the dimension is bounded by n^2 so this terminates.
    """
    mats = [as_matrix(g) for g in gens]
    if n is None:
        if not mats:
            raise ShapeMismatchError("cannot infer n from an empty generating set")
        n = mats[0].shape[0]
    if include_identity:
        mats = [np.eye(n, dtype=np.complex128)] + mats
    space = subspace_from(mats, n=n, tol=tol)
    for _ in range(n * n + 1):
        if space.dim == 0:
            break
        b = np.array(space.basis)
        prods = np.einsum("iab,jbc->ijac", b, b).reshape(-1, n, n)
        grown = subspace_from(list(space.basis) + list(prods), n=n, tol=tol)
        if grown.dim == space.dim:
            break
        space = grown
    _check_closed(space)
    return MatrixAlgebra(space=space, unital=_contains_identity(space))


def unitize(alg: MatrixAlgebra) -> MatrixAlgebra:
    """Adjoin the identity (no-op when already unital)."""
    if alg.unital:
        return alg
    space = subspace_from(
        [np.eye(alg.n, dtype=np.complex128)] + list(alg.basis), n=alg.n, tol=alg.tol
    )
    _check_closed(space)
    return MatrixAlgebra(space=space, unital=True)


def compress(alg: MatrixAlgebra, e) -> MatrixSubspace:
    """The corner {E a E : a in the algebra} as a subspace (closure not implied)."""
    e = as_matrix(e)
    if e.shape != (alg.n, alg.n):
        raise ShapeMismatchError("corner element has wrong shape")
    if frob(e @ e - e) > alg.tol.rel_eps * max(1.0, frob(e) ** 2):
        raise ValueError("corner element is not idempotent")
    return subspace_from([e @ b @ e for b in alg.basis], n=alg.n, tol=alg.tol)


def conjugate(alg: MatrixAlgebra, s) -> MatrixAlgebra:
    """Similarity transport S^{-1} A S."""
    s = as_matrix(s)
    if s.shape != (alg.n, alg.n):
        raise ShapeMismatchError("similarity has wrong shape")
    cond = np.linalg.cond(s)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericalFailureError(f"similarity is numerically singular (cond {cond:.3e})")
    s_inv = np.linalg.inv(s)
    space = subspace_from([s_inv @ b @ s for b in alg.basis], n=alg.n, tol=alg.tol)
    if space.dim != alg.dim:
        raise NumericalFailureError("similarity transport changed the dimension")
    return MatrixAlgebra(space=space, unital=alg.unital)


def transpose_variant(alg: MatrixAlgebra, kind: str) -> MatrixAlgebra:
    """Image under the transpose or the anti-transpose (flip about the anti-diagonal).

    Both maps are linear anti-automorphisms of M_n, so the image of an algebra
    is an algebra of the same dimension.
    """
    if kind == "transpose":
        mats = [b.T for b in alg.basis]
    elif kind == "anti":
        j = np.fliplr(np.eye(alg.n))
        mats = [j @ b.T @ j for b in alg.basis]
    else:
        raise ValueError(f"unknown transpose kind {kind!r}")
    space = subspace_from(mats, n=alg.n, tol=alg.tol)
    return MatrixAlgebra(space=space, unital=alg.unital)

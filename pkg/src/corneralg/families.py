"""Canonical families of unital subalgebras used as fixtures and certificates.

Coordinate conventions: for a rank split (r1, r2, r3) summing to n, Q1 covers
the first r1 coordinates, Q2 the next r2, Q3 the last r3. All constructors
return algebras in these canonical coordinates; use random_instance to
disguise them.
"""

from __future__ import annotations

import numpy as np

from .matcore import DEFAULT_TOL, Tolerance, haar_unitary, random_similarity
from .subalgebra import (
    MatrixAlgebra,
    algebra_from_span,
    conjugate,
    generated_algebra,
)

__all__ = ["FAMILY_TAGS", "make_family", "random_instance", "coordinate_projection"]

FAMILY_TAGS = (
    "SCALAR",
    "DIAGONAL",
    "FULL",
    "LR",
    "LR_UNITAL",
    "EX1",
    "EX2",
    "EX3",
    "AT",
    "GEN_T",
)


def coordinate_projection(n: int, idx) -> np.ndarray:
    p = np.zeros((n, n), dtype=np.complex128)
    for i in idx:
        p[i, i] = 1.0
    return p


def _unit(n, i, j):
    m = np.zeros((n, n), dtype=np.complex128)
    m[i, j] = 1.0
    return m


def _module_units(n, rows, cols):
    return [_unit(n, i, j) for i in rows for j in cols]


def _split_ranges(ranks):
    out = []
    start = 0
    for r in ranks:
        out.append(range(start, start + r))
        start += r
    return out


def _check_ranks(tag, n, ranks, scalar_outer: bool):
    if ranks is None:
        ranks = (1, 1, n - 2)
    if len(ranks) != 3 or any(r < 0 for r in ranks) or sum(ranks) != n:
        raise ValueError(f"{tag} needs three nonnegative ranks summing to {n}")
    if scalar_outer and (ranks[0] != 1 or ranks[1] != 1):
        raise ValueError(f"{tag} requires ranks (1, 1, n-2)")
    if scalar_outer and ranks[2] < 1:
        raise ValueError(f"{tag} requires a nonempty third group")
    return tuple(ranks)


def make_family(
    tag: str,
    n: int,
    ranks=None,
    t: complex = 0.0,
    overlap: int = 0,
    seed: int = 0,
    tol: Tolerance = DEFAULT_TOL,
) -> MatrixAlgebra:
    """Build a canonical family member.

    ranks is (p, q) for LR/LR_UNITAL and (r1, r2, r3) for EX1/EX2/EX3/AT;
    t is the coupling parameter of the AT family; overlap shifts the LR
    column group so that it shares `overlap` coordinates with the row group.
    """
    if n < 1:
        raise ValueError("n must be positive")
    tag = tag.upper()
    eye = np.eye(n, dtype=np.complex128)

    if tag == "SCALAR":
        return algebra_from_span([eye], tol=tol)
    if tag == "DIAGONAL":
        return algebra_from_span([_unit(n, i, i) for i in range(n)], tol=tol)
    if tag == "FULL":
        return algebra_from_span(
            [_unit(n, i, j) for i in range(n) for j in range(n)], tol=tol
        )
    if tag in ("LR", "LR_UNITAL"):
        if ranks is None or len(ranks) != 2:
            raise ValueError("LR families take ranks (p, q)")
        p, q = ranks
        if not (1 <= p <= n and 1 <= q <= n):
            raise ValueError("LR ranks must lie in [1, n]")
        if not (0 <= overlap <= min(p, q)) or p - overlap + q > n:
            raise ValueError("LR overlap out of range")
        rows = range(0, p)
        cols = range(p - overlap, p - overlap + q)
        mats = _module_units(n, rows, cols)
        if tag == "LR":
            return MatrixAlgebra(
                space=algebra_from_span(mats, tol=tol).space, unital=False
            )
        return algebra_from_span(mats + [eye], tol=tol)
    if tag == "EX1":
        ranks = _check_ranks(tag, n, ranks, scalar_outer=False)
        g1, g2, g3 = _split_ranges(ranks)
        mats = _module_units(n, list(g1) + list(g2), list(g2) + list(g3))
        if ranks[0] > 0:
            mats.append(coordinate_projection(n, g1))
        if ranks[2] > 0:
            mats.append(coordinate_projection(n, g3))
        return algebra_from_span(mats + [eye], tol=tol)
    if tag == "EX2":
        ranks = _check_ranks(tag, n, ranks, scalar_outer=True)
        g1, g2, g3 = _split_ranges(ranks)
        mats = [
            coordinate_projection(n, g1),
            coordinate_projection(n, g2),
            coordinate_projection(n, g3),
        ]
        mats += _module_units(n, list(g1) + list(g2), g3)
        return algebra_from_span(mats, tol=tol)
    if tag == "EX3":
        ranks = _check_ranks(tag, n, ranks, scalar_outer=True)
        g1, g2, g3 = _split_ranges(ranks)
        mats = [
            coordinate_projection(n, list(g1) + list(g2)),
            coordinate_projection(n, g3),
        ]
        mats += _module_units(n, g1, g2)
        mats += _module_units(n, list(g1) + list(g2), g3)
        return algebra_from_span(mats, tol=tol)
    if tag == "AT":
        ranks = _check_ranks(tag, n, ranks, scalar_outer=True)
        g1, g2, g3 = _split_ranges(ranks)
        i1, i2 = g1[0], g2[0]
        hinge = _unit(n, i1, i2)
        mats = [
            coordinate_projection(n, g1) + t * hinge,
            coordinate_projection(n, g2) - t * hinge,
            coordinate_projection(n, g3),
        ]
        mats += _module_units(n, [i1, i2], g3)
        return algebra_from_span(mats, tol=tol)
    if tag == "GEN_T":
        rng = np.random.default_rng([seed, 101])
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        return generated_algebra([g], include_identity=True, tol=tol)
    raise ValueError(f"unknown family tag {tag!r}")


def random_instance(
    alg: MatrixAlgebra, disguise: str = "unitary", seed: int = 0
) -> MatrixAlgebra:
    """Transport a canonical algebra by a seeded unitary or bounded similarity."""
    if disguise == "none":
        return alg
    rng = np.random.default_rng([seed, 3])
    if disguise == "unitary":
        return conjugate(alg, haar_unitary(alg.n, rng))
    if disguise == "similarity":
        return conjugate(alg, random_similarity(alg.n, rng))
    raise ValueError(f"unknown disguise {disguise!r}")

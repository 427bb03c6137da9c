"""Randomized compressibility checking through corner closure tests.

A corner test takes an idempotent E and measures how far the compressed
space {E a E} is from being multiplicatively closed. Compressible algebras
pass every corner test; a single confirmed violation refutes compressibility.
The checker combines a catalog of fixed low-rank projections (embedded
through coordinate and random frames) with seeded random trials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from .matcore import (
    NumericalFailureError,
    Tolerance,
    haar_unitary,
    random_similarity,
)
from .subalgebra import MatrixAlgebra, closure_defect, subspace_from

__all__ = [
    "Violation",
    "CheckReport",
    "FoldReport",
    "witness_catalog",
    "sample_projection",
    "sample_idempotent",
    "corner_residual",
    "check_compressible",
    "fold_corner",
]

# residual at or below PASS is a clean pass; above VIOLATION is a refutation;
# the band in between is counted as indeterminate and decides nothing
PASS_RESIDUAL = 1e-8
VIOLATION_RESIDUAL = 1e-6


@dataclass(frozen=True, eq=False)
class Violation:
    kind: str
    index: int
    witness: np.ndarray
    residual: float


@dataclass(frozen=True, eq=False)
class CheckReport:
    mode: str
    seed: int
    requested_trials: int
    trials_run: int
    catalog_corners: int
    indeterminate: int
    violations: tuple

    @property
    def consistent(self) -> bool:
        return len(self.violations) == 0

    def first_violation(self):
        return self.violations[0] if self.violations else None


@dataclass(frozen=True, eq=False)
class FoldReport:
    closed: bool
    defect: float
    dim: int


def _entry(num, den):
    return np.array(num, dtype=np.complex128) / den


def witness_catalog(n: int):
    """Fixed witness projections of size n, deduplicated, as (name, matrix) pairs."""
    entries = []
    if n == 4:
        entries.append(
            ("rank3-outer-pair",
             _entry([[1, 0, 0, 1], [0, 2, 0, 0], [0, 0, 2, 0], [1, 0, 0, 1]], 2))
        )
        for k in (1, 2, 3):
            kk = k * k
            entries.append(
                (f"rank3-skew-k{k}",
                 _entry([[kk + 1, 0, 0, 0], [0, kk, 0, -k], [0, 0, kk + 1, 0],
                         [0, -k, 0, 1]], kk + 1))
            )
        entries.append(
            ("rank3-inner-pair",
             _entry([[2, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 0], [0, 1, 0, 1]], 2))
        )
        entries.append(
            ("rank3-outer-diff",
             _entry([[1, 0, 0, -1], [0, 2, 0, 0], [0, 0, 2, 0], [-1, 0, 0, 1]], 2))
        )
        entries.append(
            ("rank3-pair-13",
             _entry([[1, 0, 1, 0], [0, 2, 0, 0], [1, 0, 1, 0], [0, 0, 0, 2]], 2))
        )
        entries.append(
            ("rank3-simplex",
             _entry([[2, 0, -1, -1], [0, 3, 0, 0], [-1, 0, 2, -1], [-1, 0, -1, 2]], 3))
        )
        entries.append(
            ("rank2-fold",
             _entry([[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1]], 2))
        )
    if n == 3:
        entries.append(
            ("rank2-pair-13", _entry([[1, 0, 1], [0, 2, 0], [1, 0, 1]], 2))
        )
    out = []
    for name, p in entries:
        if any(np.allclose(p, q, atol=1e-12) for _, q in out):
            continue
        if np.linalg.norm(p @ p - p) > 1e-12:
            raise AssertionError(f"catalog entry {name} is not idempotent")
        out.append((name, p))
    return out


def sample_projection(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    v = haar_unitary(n, rng)[:, :rank]
    return v @ v.conj().T


def sample_idempotent(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    p = sample_projection(n, rank, rng)
    s = random_similarity(n, rng)
    return s @ p @ np.linalg.inv(s)


def _corner_residual_batch(basis: np.ndarray, es: np.ndarray, tol: Tolerance):
    """Worst relative closure residual of each corner E_b A E_b.

    basis: (d, n, n) orthonormal algebra basis; es: (B, n, n) idempotents.
    Returns (max relative residual, corner dimension) per idempotent.
    """
    bsz, n, _ = es.shape
    d = basis.shape[0]
    eb = es[:, None]
    corners = eb @ basis[None] @ eb
    cvec = corners.reshape(bsz, d, n * n)
    _, s, vh = np.linalg.svd(cvec, full_matrices=False)
    lead = np.maximum(tol.rank_eps_factor * s[:, :1], 1e-14)
    rmask = s > lead
    vh_masked = vh * rmask[:, :, None]
    prods = corners[:, :, None] @ corners[:, None, :]
    pvec = prods.reshape(bsz, d * d, n * n)
    coeffs = pvec @ vh_masked.conj().transpose(0, 2, 1)
    recon = coeffs @ vh_masked
    resid = np.linalg.norm(pvec - recon, axis=2)
    scale = np.maximum(1.0, np.linalg.norm(pvec, axis=2))
    rel = resid / scale
    return rel.max(axis=1), rmask.sum(axis=1)


def corner_residual(alg: MatrixAlgebra, e) -> float:
    """Relative closure residual of the single corner {E a E}."""
    e = np.asarray(e, dtype=np.complex128)
    basis = np.array(alg.basis)
    rel, _ = _corner_residual_batch(basis, e[None, :, :], alg.tol)
    return float(rel[0])


def _natural_frames(n: int, s: int, u: np.ndarray | None):
    frames = [np.eye(n, dtype=np.complex128)[:, list(idx)] for idx in combinations(range(n), s)]
    if u is not None and not np.allclose(np.abs(u), np.eye(n), atol=1e-9):
        frames += [u[:, list(idx)] for idx in combinations(range(n), s)]
    return frames


def _catalog_pass(alg: MatrixAlgebra, u, rng, collect, stop_on_violation: bool):
    basis = np.array(alg.basis)
    n = alg.n
    corners = 0
    for size in sorted({m for m in (3, 4) if m <= n}):
        cat = witness_catalog(size)
        if not cat:
            continue
        frames = _natural_frames(n, size, u)
        frames += [haar_unitary(n, rng)[:, :size] for _ in range(6)]
        for name, p in cat:
            es = np.array([f @ p @ f.conj().T for f in frames])
            rel, _ = _corner_residual_batch(basis, es, alg.tol)
            corners += len(frames)
            for k in np.nonzero(rel > VIOLATION_RESIDUAL)[0]:
                collect(Violation(kind=f"catalog:{name}", index=int(k),
                                  witness=es[k], residual=float(rel[k])))
                if stop_on_violation:
                    return corners
            if stop_on_violation and collect.found:
                return corners
    return corners


def _sample_batch(n: int, mode: str, seed: int, t0: int, bsz: int):
    """Idempotents for trials t0..t0+bsz-1, one rng substream per trial.

    Draw order per trial matches sample_projection/sample_idempotent exactly;
    only the QR factorizations and inversions are stacked.
    """
    kinds = []
    colmask = np.zeros((bsz, 1, n))
    gin = np.empty((bsz, 3, n, n), dtype=np.complex128)
    conds = np.ones(bsz)
    idem = np.zeros(bsz, dtype=bool)
    for k in range(bsz):
        t = t0 + k
        rng = np.random.default_rng([seed, t])
        colmask[k, 0, : 1 + t % (n - 1)] = 1.0
        gin[k, 0] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        if mode != "projection" and t % 2 == 1:
            idem[k] = True
            gin[k, 1] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            gin[k, 2] = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            conds[k] = rng.uniform(1.0, 50.0)
        else:
            gin[k, 1] = np.eye(n)
            gin[k, 2] = np.eye(n)
        kinds.append("idempotent" if idem[k] else "projection")
    q, r = np.linalg.qr(gin.reshape(bsz * 3, n, n))
    d = np.diagonal(r, axis1=1, axis2=2)
    q = (q * (d / np.abs(d))[:, None, :]).reshape(bsz, 3, n, n)
    v = q[:, 0] * colmask
    es = v @ v.conj().transpose(0, 2, 1)
    if np.any(idem):
        sing = np.geomspace(1.0, conds[idem], n, axis=-1)
        s = (q[idem, 1] * sing[:, None, :]) @ q[idem, 2]
        es[idem] = s @ es[idem] @ np.linalg.inv(s)
    return es, kinds


class _Collector:
    def __init__(self):
        self.items = []

    @property
    def found(self):
        return bool(self.items)

    def __call__(self, v):
        self.items.append(v)


def check_compressible(
    alg: MatrixAlgebra,
    mode: str = "idempotent",
    trials: int = 500,
    seed: int = 0,
    use_catalog: bool = True,
    stop_on_violation: bool = True,
    struct=None,
) -> CheckReport:
    """Randomized corner-closure test with a deterministic catalog pass.

    mode 'projection' samples Haar range projections; mode 'idempotent'
    alternates projections with similarity-twisted idempotents of bounded
    condition number. Ranks sweep 1..n-1 round robin. Every trial draws from
    its own substream, so reports are reproducible given the seed.
    """
    if mode not in ("projection", "idempotent"):
        raise ValueError(f"unknown mode {mode!r}")
    n = alg.n
    if n < 2:
        return CheckReport(mode=mode, seed=seed, requested_trials=trials, trials_run=0,
                           catalog_corners=0, indeterminate=0, violations=())
    basis = np.array(alg.basis)
    collect = _Collector()
    catalog_corners = 0
    if use_catalog:
        u = None
        if struct is not None:
            u = struct.u
        elif alg.unital:
            try:
                from .structure import triangularize

                u = triangularize(alg, seed=seed).u
            except NumericalFailureError:
                u = None
        catalog_corners = _catalog_pass(
            alg, u, np.random.default_rng([seed, 999]), collect, stop_on_violation
        )
        if collect.found and stop_on_violation:
            return CheckReport(mode=mode, seed=seed, requested_trials=trials,
                               trials_run=0, catalog_corners=catalog_corners,
                               indeterminate=0, violations=tuple(collect.items))

    indeterminate = 0
    trials_run = 0
    d = basis.shape[0]
    chunk = max(4, min(256, int(4e6 / (d * d * n * n + 1))))
    trial = 0
    while trial < trials:
        bsz = min(chunk, trials - trial)
        es, kinds = _sample_batch(n, mode, seed, trial, bsz)
        rel, _ = _corner_residual_batch(basis, es, alg.tol)
        trials_run += bsz
        indeterminate += int(np.count_nonzero((rel > PASS_RESIDUAL) & (rel <= VIOLATION_RESIDUAL)))
        bad = np.nonzero(rel > VIOLATION_RESIDUAL)[0]
        for k in bad:
            collect(Violation(kind=kinds[k], index=trial + int(k),
                              witness=es[k], residual=float(rel[k])))
        if collect.found and stop_on_violation:
            break
        trial += bsz
    return CheckReport(
        mode=mode,
        seed=seed,
        requested_trials=trials,
        trials_run=trials_run,
        catalog_corners=catalog_corners,
        indeterminate=indeterminate,
        violations=tuple(collect.items),
    )


def _aligned_fold(n: int):
    h = n // 2
    q1 = np.zeros((n, n), dtype=np.complex128)
    for i in range(h):
        q1[i, i] = 1.0
    e = np.zeros((n, n), dtype=np.complex128)
    for i in range(h):
        e[h + i, i] = 1.0
    return q1, e


def fold_corner(alg: MatrixAlgebra, q1=None, e=None) -> FoldReport:
    """Fold the four half-corners of the algebra into one and test its closure.

    With R = Q1 + E the folded space is {R* a R}. E must be a partial isometry
    with E*E = Q1 and EE* = I - Q1; rank(Q1) = n/2. For a compressible algebra
    the folded space is multiplicatively closed for every admissible (Q1, E).
    """
    n = alg.n
    if n % 2 != 0:
        raise ValueError("fold_corner needs even n")
    if q1 is None or e is None:
        if not (q1 is None and e is None):
            raise ValueError("give both q1 and e, or neither")
        q1, e = _aligned_fold(n)
    q1 = np.asarray(q1, dtype=np.complex128)
    e = np.asarray(e, dtype=np.complex128)
    if np.linalg.norm(q1 @ q1 - q1) > 1e-10 or np.linalg.norm(q1 - q1.conj().T) > 1e-10:
        raise ValueError("q1 is not an orthogonal projection")
    if abs(np.trace(q1).real - n / 2) > 1e-8:
        raise ValueError("q1 must have rank n/2")
    if (np.linalg.norm(e.conj().T @ e - q1) > 1e-10
            or np.linalg.norm(e @ e.conj().T - (np.eye(n) - q1)) > 1e-10):
        raise ValueError("e is not a partial isometry from ran(q1) onto its complement")
    r = q1 + e
    folded = [r.conj().T @ b @ r for b in alg.basis]
    space = subspace_from(folded, n=n, tol=alg.tol)
    defect = closure_defect(space)
    return FoldReport(closed=defect <= VIOLATION_RESIDUAL, defect=defect, dim=space.dim)

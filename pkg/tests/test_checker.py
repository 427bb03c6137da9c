"""Witness catalog, randomized corner trials, folding."""

import numpy as np
import pytest

from corneralg.checker import (
    check_compressible,
    corner_residual,
    fold_corner,
    sample_idempotent,
    sample_projection,
    witness_catalog,
)
from corneralg.families import make_family, random_instance
from corneralg.subalgebra import algebra_from_span


def eij(n, i, j):
    m = np.zeros((n, n), dtype=np.complex128)
    m[i, j] = 1.0
    return m


def two_jordan_cells():
    # elements a(E11+E22) + bE12 + c(E33+E44) + dE34
    n = 4
    return algebra_from_span(
        [eij(n, 0, 0) + eij(n, 1, 1), eij(n, 0, 1), eij(n, 2, 2) + eij(n, 3, 3), eij(n, 2, 3)]
    )


def three_dim_radical():
    # span{I, E14, E23, E24}
    n = 4
    return algebra_from_span([np.eye(n), eij(n, 0, 3), eij(n, 1, 2), eij(n, 1, 3)])


# ---------------------------------------------------------------- catalog


def test_catalog_entries_are_projections_with_expected_ranks():
    cat4 = dict(witness_catalog(4))
    assert len(cat4) == 9
    ranks = {name: int(round(np.trace(p).real)) for name, p in cat4.items()}
    assert ranks["rank2-fold"] == 2
    assert all(r == 3 for name, r in ranks.items() if name.startswith("rank3"))
    for p in cat4.values():
        assert np.linalg.norm(p @ p - p) < 1e-13
        assert np.linalg.norm(p - p.conj().T) < 1e-13
    cat3 = witness_catalog(3)
    assert len(cat3) == 1 and int(round(np.trace(cat3[0][1]).real)) == 2
    assert witness_catalog(5) == []


def test_outer_pair_identity_for_block_upper():
    # for any (2,2) block upper A: ((QAQ)^2)[2,1] == 8 A[0,1] A[2,3],
    # with Q the unscaled integer matrix of the rank3-outer-pair entry
    q = 2.0 * dict(witness_catalog(4))["rank3-outer-pair"]
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        a[2:, :2] = 0.0
        lhs = np.linalg.matrix_power(q @ a @ q, 2)[2, 1]
        rhs = 8.0 * a[0, 1] * a[2, 3]
        assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@pytest.mark.parametrize("d", [3, 4])
def test_folded_square_is_rank_one(d):
    # P = 2I with the middle 2x2 block replaced by ones; A couples the outer
    # groups through the middle; then (PAP)^2 = 8 E[0, 2d-2]
    n = 2 * d
    p = 2.0 * np.eye(n)
    p[d - 1 : d + 1, d - 1 : d + 1] = 1.0
    assert np.linalg.norm((p / 2) @ (p / 2) - p / 2) < 1e-13
    a = np.zeros((n, n))
    a[0, d] = 1.0
    a[d - 1, 2 * d - 2] = 1.0
    m = np.linalg.matrix_power(p @ a @ p, 2)
    expected = np.zeros((n, n))
    expected[0, 2 * d - 2] = 8.0
    assert np.allclose(m, expected, atol=1e-12)


# ---------------------------------------------------------------- refutations


def test_two_jordan_cells_refuted_in_identity_frame():
    alg = two_jordan_cells()
    p = dict(witness_catalog(4))["rank3-outer-pair"]
    assert corner_residual(alg, p) > 1e-3
    report = check_compressible(alg, trials=50, seed=0)
    assert not report.consistent
    v = report.first_violation()
    assert v.kind.startswith("catalog:")
    # the recorded witness replays
    assert corner_residual(alg, v.witness) > 1e-6


def test_three_dim_radical_refuted_by_inner_pair():
    alg = three_dim_radical()
    p = dict(witness_catalog(4))["rank3-inner-pair"]
    assert corner_residual(alg, p) > 1e-3
    report = check_compressible(alg, trials=50, seed=0)
    assert not report.consistent


def test_diagonal_m3_needs_random_frames():
    alg = make_family("DIAGONAL", 3)
    p = witness_catalog(3)[0][1]
    # in the identity frame this corner is closed; random frames refute
    assert corner_residual(alg, p) < 1e-12
    report = check_compressible(alg, trials=2000, seed=0)
    assert not report.consistent
    assert corner_residual(alg, report.first_violation().witness) > 1e-6


def test_violations_reproducible_and_collectable():
    alg = two_jordan_cells()
    r1 = check_compressible(alg, trials=40, seed=3, use_catalog=False)
    r2 = check_compressible(alg, trials=40, seed=3, use_catalog=False)
    assert not r1.consistent and not r2.consistent
    assert r1.first_violation().index == r2.first_violation().index
    full = check_compressible(alg, trials=40, seed=3, use_catalog=False,
                              stop_on_violation=False)
    assert len(full.violations) >= 2
    assert full.trials_run == 40


# ---------------------------------------------------------------- positives


@pytest.mark.parametrize("tag,kw", [
    ("EX1", {"ranks": (1, 2, 1)}),
    ("EX2", {}),
    ("EX3", {}),
    ("AT", {"t": 2.0}),
    ("LR_UNITAL", {"ranks": (2, 2)}),
    ("FULL", {}),
])
def test_positive_families_pass_trials(tag, kw):
    alg = random_instance(make_family(tag, 4, **kw), "unitary", seed=11)
    report = check_compressible(alg, trials=80, seed=2)
    assert report.consistent, report.first_violation()
    assert report.indeterminate == 0
    assert report.trials_run == 80


def test_projection_mode_only_samples_projections():
    alg = make_family("SCALAR", 4)
    report = check_compressible(alg, mode="projection", trials=30, seed=0)
    assert report.consistent
    with pytest.raises(ValueError):
        check_compressible(alg, mode="unitary")


# ---------------------------------------------------------------- samplers


def test_samplers_produce_idempotents():
    rng = np.random.default_rng(6)
    for rank in (1, 2, 3):
        p = sample_projection(4, rank, rng)
        assert np.linalg.norm(p @ p - p) < 1e-12
        assert abs(np.trace(p).real - rank) < 1e-9
        e = sample_idempotent(4, rank, rng)
        assert np.linalg.norm(e @ e - e) < 1e-10
        assert abs(np.trace(e).real - rank) < 1e-8


# ---------------------------------------------------------------- folding


def test_fold_corner_flags_shear_pair():
    # span{I, E14, E23}: the aligned fold is span{I, E12, E21}, not closed
    n = 4
    alg = algebra_from_span([np.eye(n), eij(n, 0, 3), eij(n, 1, 2)])
    report = fold_corner(alg)
    assert not report.closed
    assert report.defect > 1e-3
    assert report.dim == 3


def test_fold_corner_closed_on_compressible_families():
    for tag, kw in [("EX2", {}), ("EX3", {}), ("AT", {"t": 1j}),
                    ("EX1", {"ranks": (1, 2, 1)}), ("LR_UNITAL", {"ranks": (2, 2)})]:
        alg = make_family(tag, 4, **kw)
        assert fold_corner(alg).defect < 1e-8, tag


def test_fold_corner_random_frames_on_compressible():
    from corneralg.matcore import haar_unitary

    alg = random_instance(make_family("EX2", 6), "unitary", seed=4)
    rng = np.random.default_rng(13)
    for _ in range(3):
        u = haar_unitary(6, rng)
        v1, v2 = u[:, :3], u[:, 3:]
        q1 = v1 @ v1.conj().T
        e = v2 @ v1.conj().T
        assert fold_corner(alg, q1, e).defect < 1e-8


def test_fold_corner_validates_inputs():
    alg = make_family("EX2", 5)
    with pytest.raises(ValueError, match="even"):
        fold_corner(alg)
    alg4 = make_family("EX2", 4)
    with pytest.raises(ValueError):
        fold_corner(alg4, np.eye(4), None)
    bad_q = np.diag([1.0, 1.0, 1.0, 0.0])
    e = np.zeros((4, 4))
    with pytest.raises(ValueError):
        fold_corner(alg4, bad_q, e)

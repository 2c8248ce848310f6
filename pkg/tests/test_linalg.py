"""Tests for the pivot-checked complex solver and Hermitian eigenvalues."""

import numpy as np
import pytest

from modeconv.errors import NotHermitianError, SingularMatrixError
from modeconv.linalg import (
    PIVOT_RTOL,
    eigenvalues_hermitian,
    solve_batched,
    solve_linear,
    solve_with_condition,
)


def test_solve_matches_numpy_on_random_systems():
    rng = np.random.default_rng(12345)
    for _ in range(200):
        n = rng.integers(1, 9)
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        rhs = rng.normal(size=n) + 1j * rng.normal(size=n)
        x = solve_linear(m, rhs)
        err = np.abs(m @ x - rhs).max()
        assert err < 1e-10


def test_block_rhs_shape_follows_input():
    rng = np.random.default_rng(3)
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    block = rng.normal(size=(4, 3)) + 0j
    x = solve_linear(m, block)
    assert x.shape == (4, 3)
    assert np.abs(m @ x - block).max() < 1e-10
    xv = solve_linear(m, block[:, 0])
    assert xv.shape == (4,)


def test_singular_matrix_raises():
    with pytest.raises(SingularMatrixError):
        solve_linear(np.zeros((3, 3)), np.ones(3))
    # rank-deficient: third row is the sum of the first two
    m = np.array([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [5.0, 7.0, 9.0]], dtype=complex)
    with pytest.raises(SingularMatrixError):
        solve_linear(m, np.ones(3))


def test_threshold_is_relative_to_matrix_scale():
    # A tiny but well-conditioned matrix must solve: the pivot test is scaled
    # to the largest entry of the matrix as supplied.
    m = 1e-20 * np.array([[2.0, 1.0], [1.0, 3.0]], dtype=complex)
    x = solve_linear(m, np.array([1.0, 0.0], dtype=complex))
    assert np.abs(m @ x - [1.0, 0.0]).max() < 1e-10
    # ... and a matrix whose pivots sit below PIVOT_RTOL of its own scale fails.
    bad = np.array([[1.0, 1.0], [1.0, 1.0 + 0.1 * PIVOT_RTOL]], dtype=complex)
    with pytest.raises(SingularMatrixError):
        solve_linear(bad, np.ones(2))


def test_condition_estimate_grows_near_singularity():
    well = np.eye(3, dtype=complex)
    _, ratio = solve_with_condition(well, np.ones(3))
    assert ratio == 1.0
    skewed = np.diag([1.0, 1.0, 1e-8]).astype(complex)
    _, ratio = solve_with_condition(skewed, np.ones(3))
    assert ratio > 1e7


def test_rhs_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        solve_linear(np.eye(2), np.ones(3))
    with pytest.raises(ValueError):
        solve_linear(np.ones((2, 3)), np.ones(2))


class TestSolveBatched:
    def test_agrees_with_strict_solver(self):
        rng = np.random.default_rng(99)
        for n in (1, 2, 5):
            mats = rng.normal(size=(40, n, n)) + 1j * rng.normal(size=(40, n, n))
            rhs = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
            x, singular = solve_batched(mats, rhs)
            assert not singular.any()
            for i in range(40):
                xi = solve_linear(mats[i], rhs)
                assert np.abs(x[i] - xi).max() < 1e-12

    def test_flags_singular_member_without_corrupting_others(self):
        rng = np.random.default_rng(11)
        mats = rng.normal(size=(5, 3, 3)) + 1j * rng.normal(size=(5, 3, 3))
        mats[2] = 0.0
        rhs = rng.normal(size=(3, 1)) + 0j
        x, singular = solve_batched(mats, rhs)
        assert list(singular) == [False, False, True, False, False]
        for i in (0, 1, 3, 4):
            assert np.abs(mats[i] @ x[i] - rhs).max() < 1e-10

    def test_per_system_rhs(self):
        rng = np.random.default_rng(12)
        mats = rng.normal(size=(7, 4, 4)) + 1j * rng.normal(size=(7, 4, 4))
        rhs = rng.normal(size=(7, 4, 1)) + 1j * rng.normal(size=(7, 4, 1))
        x, singular = solve_batched(mats, rhs)
        assert not singular.any()
        assert np.abs(mats @ x - rhs).max() < 1e-10

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            solve_batched(np.ones((2, 3, 4)), np.ones((4, 1)))
        with pytest.raises(ValueError):
            solve_batched(np.ones((2, 3, 3)), np.ones((4, 1)))


def test_eigenvalues_sorted_and_real():
    rng = np.random.default_rng(21)
    for _ in range(50):
        n = rng.integers(1, 7)
        raw = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        h = raw + raw.conj().T
        vals = eigenvalues_hermitian(h)
        assert vals.dtype.kind == "f"
        assert np.all(np.diff(vals) >= 0)
        assert abs(vals.sum() - np.trace(h).real) < 1e-10 * max(1.0, abs(np.trace(h).real))


def test_eigenvalues_example():
    # 2x2 with eigenvalues (10 +/- sqrt(108)) / 2
    h = np.array([[0.0, np.sqrt(2.0)], [np.sqrt(2.0), 10.0]], dtype=complex)
    vals = eigenvalues_hermitian(h)
    lo = (10.0 - np.sqrt(108.0)) / 2.0
    hi = (10.0 + np.sqrt(108.0)) / 2.0
    assert abs(vals[0] - lo) < 1e-12
    assert abs(vals[1] - hi) < 1e-12


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        eigenvalues_hermitian(np.array([[0.0, 1.0], [2.0, 0.0]]))

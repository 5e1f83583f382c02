"""Tests for the complex linear-algebra kernel.

numpy.linalg.svd serves as the full-SVD oracle the power iteration is judged
against; it is used in tests only, never by the package itself.
"""

import numpy as np
import pytest

from abcrate.linalg import (
    ConvergenceError,
    DegenerateInputError,
    DimensionError,
    dominant_singular_triplet,
    inner,
)

# Oracle value for the fixed-seed 4x3 example below, frozen from
# np.linalg.svd on the identical matrix.
_SIGMA_4X3 = 2.866423988526672


def _complex_gauss(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


# ---------------------------------------------------------------- inner


def test_inner_norm_of_known_vector():
    a = np.array([1.0, 1.0j])
    assert inner(a, a) == pytest.approx(2.0)
    assert inner(a, a).imag == 0.0


def test_inner_orthogonal_pair():
    assert inner(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 0.0


def test_inner_matches_handwritten_summation():
    # integer-valued entries keep every product and partial sum exact, so
    # the comparison against the hand-conjugated summation is bitwise
    a = np.array([1 + 2j, -3 + 1j, 2 - 1j, 4 + 0j])
    b = np.array([2 - 1j, 1 + 1j, -1 + 3j, 0 + 5j])
    by_hand = sum(complex(a[i]).conjugate() * complex(b[i]) for i in range(4))
    assert inner(a, b) == by_hand

    rng = np.random.default_rng(7)
    a = _complex_gauss(rng, 6)
    b = _complex_gauss(rng, 6)
    by_hand = sum(complex(a[i]).conjugate() * complex(b[i]) for i in range(6))
    assert inner(a, b) == pytest.approx(by_hand, rel=5e-16)


def test_inner_conjugate_symmetry_and_positivity():
    rng = np.random.default_rng(8)
    a = _complex_gauss(rng, 5)
    b = _complex_gauss(rng, 5)
    assert inner(a, b) == pytest.approx(np.conj(inner(b, a)))
    assert inner(a, a).real >= 0.0


def test_inner_length_mismatch():
    with pytest.raises(DimensionError):
        inner(np.ones(3), np.ones(4))


# ------------------------------------------- dominant_singular_triplet


def test_identity_matrix():
    t = dominant_singular_triplet(np.eye(2))
    assert t.sigma == pytest.approx(1.0, rel=1e-10)
    assert np.linalg.norm(t.left) == pytest.approx(1.0, abs=1e-10)
    assert np.linalg.norm(t.right) == pytest.approx(1.0, abs=1e-10)
    # first nonzero entry of right must be real nonnegative
    lead = t.right[np.flatnonzero(np.abs(t.right) > 1e-12)[0]]
    assert lead.imag == pytest.approx(0.0, abs=1e-12)
    assert lead.real >= 0.0
    assert t.degenerate  # identity has a tied top pair


def test_diagonal_matrix():
    t = dominant_singular_triplet(np.diag([2.0, 1.0]).astype(complex))
    assert t.sigma == pytest.approx(2.0, rel=1e-10)
    assert np.abs(t.left[0]) == pytest.approx(1.0, abs=1e-8)
    assert np.abs(t.right[0]) == pytest.approx(1.0, abs=1e-8)
    assert not t.degenerate


def test_fixed_seed_4x3_matches_frozen_oracle():
    rng = np.random.default_rng(314159)
    A = _complex_gauss(rng, (4, 3))
    t = dominant_singular_triplet(A)
    assert t.sigma == pytest.approx(_SIGMA_4X3, rel=1e-8)
    # residual invariant from the triplet contract
    assert np.linalg.norm(A @ t.right - t.sigma * t.left) <= 1e-8 * t.sigma


def test_agrees_with_svd_oracle_on_random_shapes():
    rng = np.random.default_rng(2024)
    for _ in range(50):
        n = int(rng.integers(1, 9))
        m = int(rng.integers(1, 9))
        A = _complex_gauss(rng, (n, m))
        t = dominant_singular_triplet(A)
        sigma_ref = np.linalg.svd(A, compute_uv=False)[0]
        assert t.sigma == pytest.approx(sigma_ref, rel=1e-8)


def test_rayleigh_quotient_dominance():
    rng = np.random.default_rng(99)
    A = _complex_gauss(rng, (6, 5))
    t = dominant_singular_triplet(A)
    for _ in range(100):
        x = _complex_gauss(rng, 5)
        x /= np.linalg.norm(x)
        assert t.sigma**2 >= np.linalg.norm(A @ x) ** 2 - 1e-9


def test_output_is_deterministic():
    rng = np.random.default_rng(41)
    A = _complex_gauss(rng, (5, 4))
    t1 = dominant_singular_triplet(A)
    t2 = dominant_singular_triplet(A.copy())
    assert t1.sigma == t2.sigma
    assert np.array_equal(t1.left, t2.left)
    assert np.array_equal(t1.right, t2.right)


def test_left_right_unit_norm_and_phase_convention():
    rng = np.random.default_rng(5150)
    for _ in range(10):
        A = _complex_gauss(rng, (3, 7))
        t = dominant_singular_triplet(A)
        assert np.linalg.norm(t.left) == pytest.approx(1.0, abs=1e-10)
        assert np.linalg.norm(t.right) == pytest.approx(1.0, abs=1e-10)
        lead = t.right[np.flatnonzero(np.abs(t.right) > 1e-9)[0]]
        assert abs(lead.imag) <= 1e-9
        assert lead.real >= 0.0


def test_degeneracy_flag_on_tied_spectrum():
    # unitary-like matrix: all singular values equal
    Q = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    assert dominant_singular_triplet(Q).degenerate
    # well-separated spectrum
    rng = np.random.default_rng(12)
    A = _complex_gauss(rng, (4, 4)) + np.diag([10.0, 0, 0, 0])
    assert not dominant_singular_triplet(A).degenerate


def test_zero_matrix_raises():
    with pytest.raises(DegenerateInputError):
        dominant_singular_triplet(np.zeros((3, 3), dtype=complex))


def test_nonconvergence_carries_residual():
    # two nearly tied singular values converge too slowly for a 3-step budget
    A = np.diag([1.0, 1.0 - 1e-6]).astype(complex)
    A[0, 1] = 0.1
    with pytest.raises(ConvergenceError) as err:
        dominant_singular_triplet(A, tol=1e-14, max_iter=3)
    assert err.value.residual > 0.0


def test_bad_arguments_rejected():
    with pytest.raises(DegenerateInputError):
        dominant_singular_triplet(np.ones((2, 2)), tol=0.0)
    with pytest.raises(DegenerateInputError):
        dominant_singular_triplet(np.ones((2, 2)), max_iter=0)
    with pytest.raises(DegenerateInputError):
        dominant_singular_triplet(np.ones(4))

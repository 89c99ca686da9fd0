import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freespec.errors import NotHermitianError, NotPositiveDefiniteError, ShapeError
from freespec.linalg import (
    adjoint,
    direct_sum,
    herm_eigvals,
    herm_max_eig,
    herm_min_eig,
    hermitian_part,
    inv_sqrt_posdef,
    kernel_basis,
    kron,
    op_norm,
    permute_factors,
    random_complex,
    random_posdef,
    random_unitary,
    schur_complement_11,
    sigma_min,
    sqrt_posdef,
    sqrt_psd,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_min_eig_of_identity_is_one():
    assert herm_min_eig(np.eye(4)) == pytest.approx(1.0)


def test_min_eig_of_known_matrix():
    # eigenvalues 1 and 3
    assert herm_min_eig(np.array([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(1.0)
    assert herm_max_eig(np.array([[2.0, 1.0], [1.0, 2.0]])) == pytest.approx(3.0)


def test_non_hermitian_rejected():
    with pytest.raises(NotHermitianError):
        herm_min_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_tiny_skew_part_is_tolerated():
    M = np.eye(3) + 1e-13j * np.array([[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    assert herm_min_eig(M + np.triu(np.full((3, 3), 1e-13), 1)) == pytest.approx(1.0)


def test_hermitian_part_symmetrizes():
    M = np.array([[1.0, 2.0 + 1e-12], [2.0, 1.0]])
    H = hermitian_part(M)
    assert np.array_equal(H, adjoint(H))


def test_non_square_rejected():
    with pytest.raises(ShapeError):
        herm_eigvals(np.zeros((2, 3)))


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_unitary_invariance_of_spectrum(seed):
    rng = np.random.default_rng(seed)
    A = random_complex((4, 4), rng)
    H = A + adjoint(A)
    U = random_unitary(4, rng)
    np.testing.assert_allclose(herm_eigvals(adjoint(U) @ H @ U), herm_eigvals(H), atol=1e-10)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_kron_mixed_product(seed):
    rng = np.random.default_rng(seed)
    A, B, C, D = (random_complex((3, 3), rng) for _ in range(4))
    np.testing.assert_allclose(kron(A, B) @ kron(C, D), kron(A @ C, B @ D), atol=1e-10)


def test_direct_sum_spectrum_is_union():
    A = np.diag([1.0, 4.0])
    B = np.array([[2.0]])
    np.testing.assert_allclose(herm_eigvals(direct_sum(A, B)), [1.0, 2.0, 4.0])
    assert direct_sum(np.ones((1, 2)), np.ones((2, 1))).shape == (3, 3)


def test_schur_complement_sign_matches_eigenvalue_test():
    # oracle: for M with positive definite (1,1) block, M > 0 iff the Schur complement is > 0
    rng = np.random.default_rng(5)
    agree = 0
    for _ in range(100):
        A = random_posdef(2, rng)
        B = random_complex((2, 2), rng)
        D = random_posdef(2, rng) * rng.uniform(0.1, 2.0)
        M = np.block([[A, B], [adjoint(B), D]])
        via_schur = herm_min_eig(schur_complement_11(M, 2)) > 0
        via_eig = herm_min_eig(M) > 0
        agree += via_schur == via_eig
    assert agree == 100


def test_schur_complement_formula():
    M = np.array([[4.0, 2.0], [2.0, 3.0]])
    np.testing.assert_allclose(schur_complement_11(M, 1), [[3.0 - 1.0]])


def test_sqrt_squares_back(rng):
    P = random_posdef(4, rng)
    R = sqrt_posdef(P)
    np.testing.assert_allclose(R @ R, P, atol=1e-10)
    W = inv_sqrt_posdef(P)
    np.testing.assert_allclose(W @ P @ W, np.eye(4), atol=1e-10)


def test_sqrt_psd_of_singular():
    P = np.diag([4.0, 0.0])
    np.testing.assert_allclose(sqrt_psd(P), np.diag([2.0, 0.0]))


def test_sqrt_posdef_rejects_singular():
    with pytest.raises(NotPositiveDefiniteError):
        sqrt_posdef(np.diag([1.0, -1e-3]))


def test_op_norm_and_sigma_min():
    M = np.diag([3.0, 0.5])
    assert op_norm(M) == pytest.approx(3.0)
    assert sigma_min(M) == pytest.approx(0.5)


def test_kernel_basis_dimension():
    M = np.array([[1.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
    K = kernel_basis(M, 1e-10)
    assert len(K) == 2
    for v in K:
        assert np.linalg.norm(M @ v) < 1e-12


def test_random_unitary_is_unitary(rng):
    U = random_unitary(5, rng)
    np.testing.assert_allclose(adjoint(U) @ U, np.eye(5), atol=1e-12)


def test_permute_factors_swaps_kron():
    rng = np.random.default_rng(1)
    A, B = random_complex((2, 2), rng), random_complex((3, 3), rng)
    np.testing.assert_allclose(permute_factors(np.kron(A, B), (2, 3), (1, 0)), np.kron(B, A), atol=1e-14)

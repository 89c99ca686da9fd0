"""Dense complex linear algebra used by every other module.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Eigen- and
singular-value work is delegated to LAPACK through ``numpy.linalg``; the
functions here add the shape/Hermiticity checks and the conventions the rest
of the package relies on.
"""

from __future__ import annotations

import numpy as np

from .errors import NotHermitianError, NotPositiveDefiniteError, ShapeError

HERMITICITY_RTOL = 1e-8


def as_matrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=np.complex128)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    if A.ndim != 2:
        raise ShapeError(f"expected a 2-d matrix, got shape {A.shape}")
    return A


def adjoint(M) -> np.ndarray:
    return np.conj(np.swapaxes(M, -1, -2))


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def direct_sum(*blocks) -> np.ndarray:
    """Block-diagonal matrix ``diag(A, B, ...)``; blocks may be rectangular."""
    mats = [as_matrix(b) for b in blocks]
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    out = np.zeros((rows, cols), dtype=np.complex128)
    r = c = 0
    for m in mats:
        out[r : r + m.shape[0], c : c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return out


def _require_square(M, name="matrix"):
    if M.shape[0] != M.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {M.shape}")


def hermitian_part(M) -> np.ndarray:
    """Return ``(M + M*)/2`` after checking ``M`` is Hermitian within tolerance.

    The tolerance is ``1e-8 * max(1, ||M||_F)``.
    """
    M = as_matrix(M)
    _require_square(M)
    dev = np.linalg.norm(M - adjoint(M))
    tol = HERMITICITY_RTOL * max(1.0, np.linalg.norm(M))
    if dev > tol:
        raise NotHermitianError(dev, tol)
    return 0.5 * (M + adjoint(M))


def herm_eigvals(M) -> np.ndarray:
    return np.linalg.eigvalsh(hermitian_part(M))


def herm_min_eig(M) -> float:
    return float(herm_eigvals(M)[0])


def herm_max_eig(M) -> float:
    return float(herm_eigvals(M)[-1])


def op_norm(M) -> float:
    M = as_matrix(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def sigma_min(M) -> float:
    M = as_matrix(M)
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def _herm_function(M, fn):
    w, V = np.linalg.eigh(hermitian_part(M))
    return (V * fn(w)) @ adjoint(V)


def sqrt_psd(M) -> np.ndarray:
    """Principal square root of a positive semidefinite matrix.

    Eigenvalues that come out slightly negative through rounding are clipped
    to zero.
    """
    return _herm_function(M, lambda w: np.sqrt(np.clip(w, 0.0, None)))


def sqrt_posdef(M, tol=0.0) -> np.ndarray:
    lam = herm_min_eig(M)
    if lam <= tol:
        raise NotPositiveDefiniteError(lam)
    return _herm_function(M, np.sqrt)


def inv_sqrt_posdef(M, tol=0.0) -> np.ndarray:
    """Return the positive definite ``W`` with ``W M W = I``."""
    lam = herm_min_eig(M)
    if lam <= tol:
        raise NotPositiveDefiniteError(lam)
    return _herm_function(M, lambda w: 1.0 / np.sqrt(w))


def schur_complement_11(M, k: int) -> np.ndarray:
    """Schur complement ``D - B* A^{-1} B`` of the leading ``k x k`` block."""
    M = hermitian_part(M)
    A, B, D = M[:k, :k], M[:k, k:], M[k:, k:]
    lam = herm_min_eig(A)
    if lam <= 0:
        raise NotPositiveDefiniteError(lam, what="pivot block")
    S = D - adjoint(B) @ np.linalg.solve(A, B)
    return 0.5 * (S + adjoint(S))


def kernel_basis(M, eps: float) -> list[np.ndarray]:
    """Orthonormal basis of the right-singular vectors with singular value <= eps."""
    M = as_matrix(M)
    n = M.shape[1]
    if M.shape[0] == 0:
        return list(np.eye(n, dtype=np.complex128))
    _, sv, Vh = np.linalg.svd(M)
    full = np.zeros(n)
    full[: sv.size] = sv
    return [np.conj(Vh[i]) for i in range(n) if full[i] <= eps]


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from QR of a complex Ginibre matrix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_complex(shape, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_posdef(n: int, rng: np.random.Generator, low=0.1, high=3.0) -> np.ndarray:
    V = random_unitary(n, rng)
    return (V * rng.uniform(low, high, n)) @ adjoint(V)


def orthonormal_columns(vectors) -> np.ndarray:
    """Stack vectors as columns; returns an (n, 0) array for an empty list."""
    vectors = list(vectors)
    if not vectors:
        return np.zeros((0, 0), dtype=np.complex128)
    return np.column_stack(vectors)


def permute_factors(M, dims, order) -> np.ndarray:
    """Reorder the tensor factors of a square matrix on ``C^{dims[0]} x ... ``.

    ``order[k]`` names which original factor becomes factor ``k``.
    """
    dims = tuple(dims)
    n = int(np.prod(dims))
    M = as_matrix(M)
    if M.shape != (n, n):
        raise ShapeError(f"matrix of shape {M.shape} does not factor as {dims}")
    r = len(dims)
    T = M.reshape(dims + dims)
    T = T.transpose(tuple(order) + tuple(r + k for k in order))
    return T.reshape(n, n)

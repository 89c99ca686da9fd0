"""Finite-dimensional *-algebras: span closure, commutants, reducing projections.

Matrices are identified with vectors in ``C^{n^2}`` under the trace inner
product ``<A, B> = tr(A* B)``, so an algebra is carried as an orthonormal set
of such vectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .freesets import PencilContext
from .linalg import adjoint, herm_min_eig, herm_max_eig, sigma_min

RANK_RTOL = 1e-8
PROJECTION_GAP = 1e-6


class SpanBasis:
    """Incrementally grown orthonormal basis with re-orthogonalized Gram-Schmidt."""

    def __init__(self, dim: int, rtol: float = RANK_RTOL):
        self.Q = np.zeros((0, dim), dtype=np.complex128)
        self.rtol = rtol

    def __len__(self):
        return self.Q.shape[0]

    def residual(self, v: np.ndarray) -> np.ndarray:
        r = v.copy()
        for _ in range(2):
            r -= self.Q.T @ (np.conj(self.Q) @ r)
        return r

    def add(self, v: np.ndarray, scale: float | None = None) -> bool:
        """Append ``v`` if it is independent of the current span; return whether it was."""
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        ref = np.linalg.norm(v) if scale is None else scale
        if ref == 0:
            return False
        r = self.residual(v)
        nr = np.linalg.norm(r)
        if nr <= self.rtol * ref:
            return False
        self.Q = np.vstack([self.Q, r / nr])
        return True

    def contains(self, v, tol: float) -> bool:
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        return np.linalg.norm(self.residual(v)) <= tol * max(1.0, np.linalg.norm(v))


@dataclass
class AlgebraBasis:
    """Orthonormal basis (trace inner product) of a unital *-subalgebra of M_n."""

    n: int
    basis: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def span(self) -> SpanBasis:
        sb = SpanBasis(self.n * self.n)
        if self.basis:
            sb.Q = np.stack([b.reshape(-1) for b in self.basis])
        return sb

    def contains(self, M, tol: float = 1e-8) -> bool:
        return self.span().contains(M, tol)


def _square_size(gens):
    gens = [np.asarray(g, dtype=np.complex128) for g in gens]
    sizes = {g.shape for g in gens}
    if len(sizes) > 1 or any(a != b for a, b in sizes):
        raise ValueError(f"generators must be square of one size, got {sizes}")
    return gens


def generated_star_algebra(gens, eps: float = RANK_RTOL, n: int | None = None) -> AlgebraBasis:
    """Smallest unital *-algebra containing ``gens``.

    Starts from ``{I} u gens u gens*`` and right-multiplies the current basis by
    every generator and adjoint until a full round adds nothing.  The
    dimension grows each round it does not stop, so at most ``n^2`` rounds run.
    """
    gens = _square_size(gens)
    if n is None:
        if not gens:
            raise ValueError("size n is required when there are no generators")
        n = gens[0].shape[0]
    letters = gens + [adjoint(g) for g in gens]
    sb = SpanBasis(n * n, eps)
    sb.add(np.eye(n))
    for g in letters:
        sb.add(g)
    frontier = list(range(len(sb)))
    for _ in range(n * n):
        before = len(sb)
        for i in frontier:
            B = sb.Q[i].reshape(n, n)
            for g in letters:
                P = B @ g
                sb.add(P, scale=max(1.0, np.linalg.norm(P)))
        if len(sb) == before:
            break
        frontier = list(range(before, len(sb)))
    return AlgebraBasis(n, [q.reshape(n, n) for q in sb.Q])


def commutant(gens, eps: float = RANK_RTOL, n: int | None = None) -> AlgebraBasis:
    """All K with ``K A = A K`` and ``K A* = A* K`` for every generator A.

    Computed as the null space of the stacked maps ``vec(K) -> vec(KA - AK)``.
    """
    gens = _square_size(gens)
    if n is None:
        if not gens:
            raise ValueError("size n is required when there are no generators")
        n = gens[0].shape[0]
    if not gens:
        return AlgebraBasis(n, [e.reshape(n, n) for e in np.eye(n * n, dtype=np.complex128)])
    I = np.eye(n)
    blocks = []
    # row-major vec: vec(A K B) = (A kron B^T) vec(K)
    for A in gens + [adjoint(g) for g in gens]:
        blocks.append(np.kron(I, A.T) - np.kron(A, I))
    M = np.vstack(blocks)
    _, sv, Vh = np.linalg.svd(M)
    scale = max(1.0, sv[0]) if sv.size else 1.0
    full = np.zeros(n * n)
    full[: sv.size] = sv
    null = [np.conj(Vh[i]).reshape(n, n) for i in range(n * n) if full[i] <= eps * scale]
    return AlgebraBasis(n, null)


def is_irreducible(gens, eps: float = RANK_RTOL) -> bool:
    return commutant(gens, eps).dim == 1


def reducing_projections(comm: AlgebraBasis, seed: int = 0, gap: float = PROJECTION_GAP) -> list[np.ndarray]:
    """Minimal spectral projections of a generic Hermitian element of the commutant.

    Eigenvalues closer than ``gap`` are merged into one cluster.
    """
    n = comm.n
    rng = np.random.default_rng(seed)
    H = np.zeros((n, n), dtype=np.complex128)
    for b in comm.basis:
        h = 0.5 * (b + adjoint(b))
        k = 0.5j * (adjoint(b) - b)
        H += rng.standard_normal() * h + rng.standard_normal() * k
    w, V = np.linalg.eigh(H)
    projections = []
    start = 0
    for i in range(1, n + 1):
        if i == n or w[i] - w[i - 1] > gap:
            cols = V[:, start:i]
            projections.append(cols @ adjoint(cols))
            start = i
    return projections


def all_reducing_projections(minimal: list[np.ndarray]) -> list[np.ndarray]:
    """Every sum of a subset of the minimal projections (including 0 and I)."""
    n = minimal[0].shape[0]
    out = []
    for mask in range(2 ** len(minimal)):
        P = np.zeros((n, n), dtype=np.complex128)
        for k, Pk in enumerate(minimal):
            if mask >> k & 1:
                P = P + Pk
        out.append(P)
    return out


def check_hypotheses(ctx: PencilContext, eps: float = 1e-9) -> dict:
    """Invertibility and generation checks on ``C1, C2``, plus the row/column sum bounds.

    ``sum_bound_*`` holds when ``lambda_max(sum) > 1``; the stronger
    ``sum - I`` positive definite claim is reported separately through
    ``*_sum_minus_I_min_eig``.
    """
    C1, C2 = ctx.C
    s = ctx.s
    s1, s2 = sigma_min(C1), sigma_min(C2)
    col_gens = [adjoint(C1) @ C1, adjoint(C2) @ C2]
    row_gens = [C1 @ adjoint(C1), C2 @ adjoint(C2)]
    col_dim = generated_star_algebra(col_gens).dim
    row_dim = generated_star_algebra(row_gens).dim
    col_sum = col_gens[0] + col_gens[1]
    row_sum = row_gens[0] + row_gens[1]
    I = np.eye(s)
    report = {
        "s": s,
        "sigma_min_C1": s1,
        "sigma_min_C2": s2,
        "C1_invertible": s1 > eps,
        "C2_invertible": s2 > eps,
        "col_algebra_dim": col_dim,
        "row_algebra_dim": row_dim,
        "col_generates": col_dim == s * s,
        "row_generates": row_dim == s * s,
        "col_sum_lambda_max": herm_max_eig(col_sum),
        "row_sum_lambda_max": herm_max_eig(row_sum),
        "col_sum_minus_I_min_eig": herm_min_eig(col_sum - I),
        "row_sum_minus_I_min_eig": herm_min_eig(row_sum - I),
    }
    report["sum_bound_col"] = report["col_sum_lambda_max"] > 1.0 + eps
    report["sum_bound_row"] = report["row_sum_lambda_max"] > 1.0 + eps
    report["passed"] = all(
        report[k] for k in ("C1_invertible", "C2_invertible", "col_generates", "row_generates")
    )
    return report

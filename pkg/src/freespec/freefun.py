"""Free-function calculus: power series, nilpotent evaluation, Julia matrices, intertwinings."""

from __future__ import annotations

import numpy as np

from .errors import FreespecError, NotNilpotentError, ShapeError
from .freesets import (
    FreePolynomial,
    Realization,
    as_tuple,
    eval_poly,
    eval_word,
    rational_eval,
    row_matrix,
)
from .linalg import adjoint, as_matrix, op_norm, sqrt_psd

S_NILPOTENT = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)


class PowerSeries(FreePolynomial):
    """A free power series kept up to an explicit truncation degree."""

    def __init__(self, g, coeffs=None, trunc=None):
        if trunc is None:
            trunc = max((len(w) for w in (coeffs or {})), default=0)
        super().__init__(g, dict(coeffs or {}), trunc)


def series_of_realization(r: Realization, trunc: int) -> PowerSeries:
    """Word coefficients ``c* A_{j1} ... A_{jm} b`` of a rational function, to degree ``trunc``."""
    coeffs = {(): np.vdot(r.c, r.b)}
    frontier = {(): r.b}
    for _ in range(trunc):
        nxt = {}
        for word, v in frontier.items():
            for j in range(r.g):
                # A^w b with the first letter applied last
                w = (j + 1,) + word
                u = r.A[j] @ v
                nxt[w] = u
                coeffs[w] = np.vdot(r.c, u)
        frontier = nxt
    return PowerSeries(r.g, coeffs, trunc)


def growth_rate(F: FreePolynomial) -> float:
    """``max_l (sum_{|w|=l} ||F_w||)^(1/l)`` over the stored degrees ``l >= 1``."""
    by_length = {}
    for w, c in F.coeffs.items():
        if w:
            by_length.setdefault(len(w), []).append(c)
    rate = 0.0
    for length, cs in by_length.items():
        stack = np.stack(cs)
        if stack.shape[1:] == (1, 1):
            total = float(np.abs(stack).sum())
        else:
            total = float(np.linalg.norm(stack, 2, axis=(1, 2)).sum())
        if total > 0:
            rate = max(rate, total ** (1.0 / length))
    return rate


def series_gate_radius(F: FreePolynomial) -> float:
    """Largest row norm ``||[X1 ... Xg]||`` accepted for series evaluation."""
    rate = growth_rate(F)
    return np.inf if rate == 0 else 0.5 / rate


def eval_series(F: FreePolynomial, X, gate: bool = True) -> np.ndarray:
    """Evaluate a truncated series; with ``gate`` it refuses points outside the
    ball where the tail is dominated by a geometric series of ratio 1/2."""
    X = as_tuple(X)
    if gate:
        r = op_norm(row_matrix(X))
        radius = series_gate_radius(F)
        if r > radius:
            raise FreespecError(f"row norm {r:.3e} exceeds series gate radius {radius:.3e}")
    return eval_poly(F, X)


def nilpotency_order(X, cap: int = 64, rtol: float = 1e-12) -> int | None:
    """Smallest m <= cap such that every word of length m in X vanishes.

    Tracks an orthonormal basis of the span of the length-m words rather than
    the g^m words themselves.
    """
    X = as_tuple(X)
    g, n = X.shape[0], X.shape[1]
    scale = max(1.0, max(op_norm(x) for x in X))
    current = [np.eye(n, dtype=np.complex128)]
    for m in range(1, cap + 1):
        products = [W @ x for W in current for x in X]
        stack = np.stack([p.reshape(-1) for p in products])
        tol = rtol * scale**m
        if np.max(np.abs(stack)) <= tol:
            return m
        _, sv, Vh = np.linalg.svd(stack, full_matrices=False)
        keep = sv > tol
        current = [(sv[i] * Vh[i]).reshape(n, n) for i in np.flatnonzero(keep)]
    return None


def nilpotent_eval(F: FreePolynomial, X, z: complex = 1.0, order: int | None = None) -> np.ndarray:
    """``f(zX) = sum_{l < m} (sum_{|w| = l} F_w (x) X^w) z^l`` for X nilpotent of order m."""
    X = as_tuple(X)
    m = nilpotency_order(X) if order is None else order
    if m is None:
        raise NotNilpotentError("tuple is not detectably nilpotent")
    trunc = F.trunc if F.trunc is not None else F.degree
    if trunc < m - 1:
        raise NotNilpotentError(f"series truncated at degree {trunc} but words up to length {m - 1} survive")
    n = X.shape[1]
    d, e = F.shape
    out = np.zeros((d * n, e * n), dtype=np.complex128)
    for word, c in F.coeffs.items():
        if len(word) < m:
            out += (z ** len(word)) * np.kron(c, eval_word(X, word))
    return out


def s_tensor(X) -> np.ndarray:
    """``S (x) X = ([[0, X1], [0, 0]], [[0, X2], [0, 0]], ...)``."""
    return np.stack([np.kron(S_NILPOTENT, x) for x in as_tuple(X)])


def linearize_at_S(F: FreePolynomial, g: int | None = None) -> dict:
    """Constant term and first-order coefficients, which fix f on all of ``S (x) X``."""
    g = F.g if g is None else g
    if F.trunc is not None and F.trunc < 1:
        raise ShapeError("linearization needs truncation degree >= 1")
    return {"f0": F.coeff(()), "ell": [F.coeff((j,)) for j in range(1, g + 1)]}


def linearized_value(lin: dict, X) -> np.ndarray:
    """``f(0) (x) I_2n + sum_j ell_j (x) S (x) X_j``."""
    X = as_tuple(X)
    n = X.shape[1]
    out = np.kron(lin["f0"], np.eye(2 * n))
    for ell, x in zip(lin["ell"], X):
        out = out + np.kron(ell, np.kron(S_NILPOTENT, x))
    return out


def julia_matrix(M, rho: float, z: complex) -> np.ndarray:
    """``[[D(M*), (rho/z) M], [-rho z M*, D(M)]]`` with ``D(M) = (I - rho^2 M* M)^(1/2)``.

    Unitary whenever ``|z| = 1``.
    """
    M = as_matrix(M)
    if z == 0:
        raise FreespecError("z must be non-zero")
    if abs(rho) * op_norm(M) >= 1:
        raise FreespecError("rho ||M|| must be < 1")
    p, q = M.shape
    D_star = sqrt_psd(np.eye(p) - rho**2 * M @ adjoint(M))
    D = sqrt_psd(np.eye(q) - rho**2 * adjoint(M) @ M)
    return np.block([[D_star, (rho / z) * M], [-rho * z * adjoint(M), D]])


def evaluate(F, X, gate: bool = True) -> np.ndarray:
    if isinstance(F, Realization):
        return rational_eval(F, X)
    if isinstance(F, PowerSeries) and gate:
        return eval_series(F, X, gate=True)
    return eval_poly(F, X)


def output_shape(F) -> tuple[int, int]:
    return (1, 1) if isinstance(F, Realization) else F.shape


def check_intertwining(F, X, Y, Gamma, eps: float = 1e-9, orientation: str = "right", gate: bool = True) -> float:
    """Residual of the intertwining relation for a free function F.

    ``orientation="right"``: ``X_j Gamma = Gamma Y_j`` implies
    ``f(X) Gamma = Gamma f(Y)``.  ``orientation="left"``: ``Gamma X_j = Y_j Gamma``
    implies ``Gamma f(X) = f(Y) Gamma``.  Raises when the hypothesis fails by
    more than ``eps`` relative to the data scale.
    """
    X, Y = as_tuple(X), as_tuple(Y)
    Gamma = as_matrix(Gamma)
    scale = max(1.0, op_norm(Gamma) * max(op_norm(x) for x in [*X, *Y]))
    if orientation == "right":
        pre = max(op_norm(x @ Gamma - Gamma @ y) for x, y in zip(X, Y))
    elif orientation == "left":
        pre = max(op_norm(Gamma @ x - y @ Gamma) for x, y in zip(X, Y))
    else:
        raise ValueError(f"unknown orientation {orientation!r}")
    if pre > eps * scale:
        raise FreespecError(f"intertwining hypothesis fails: residual {pre:.3e}")
    fX, fY = evaluate(F, X, gate), evaluate(F, Y, gate)
    d, e = output_shape(F)
    if orientation == "right":
        res = fX @ np.kron(np.eye(e), Gamma) - np.kron(np.eye(d), Gamma) @ fY
    else:
        res = np.kron(np.eye(d), Gamma) @ fX - fY @ np.kron(np.eye(e), Gamma)
    return float(np.linalg.norm(res, 2))

"""First-order data of candidate automorphisms and the checks it must pass.

A jet is ``(b, L)``: the value ``phi(0) = b`` and the matrix ``L = phi'(0)``
with ``L[j, k]`` the coefficient of ``x_k`` in ``phi_j``.  Everything here is
computable from the jet and ``C1, C2`` alone; nothing decides whether a jet
actually extends to an automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPositiveDefiniteError, ShapeError
from .freesets import (
    DEFAULT_EPS,
    PencilContext,
    Region,
    as_tuple,
    cal_L,
    classify,
    fp_margin,
    lambda_pencil,
    make_E,
    make_R,
    scalar_tuple,
    spectraball_margin,
)
from .linalg import adjoint, inv_sqrt_posdef, permute_factors, random_complex, sigma_min, sqrt_posdef
from .sampling import calibrate_scale, gaussian_tuple, run_trials, trial_rng

UNIMODULAR_TOL = 1e-9
BLOCK_PERMUTATION = (1, 3, 5, 7, 2, 4, 6, 8)


@dataclass(frozen=True)
class AutJet:
    b: np.ndarray
    L: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.b, dtype=np.complex128).reshape(-1)
        L = np.asarray(self.L, dtype=np.complex128)
        if b.shape != (2,) or L.shape != (2, 2):
            raise ShapeError("a jet needs b in C^2 and L in M_2")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "L", L)

    @classmethod
    def identity(cls) -> AutJet:
        return cls(np.zeros(2), np.eye(2))

    @classmethod
    def diagonal(cls, g1: complex, g2: complex) -> AutJet:
        return cls(np.zeros(2), np.diag([g1, g2]))

    @classmethod
    def swap(cls, g1: complex = 1.0, g2: complex = 1.0) -> AutJet:
        """Jet of ``x -> (g2 x2, g1 x1)``."""
        return cls(np.zeros(2), np.array([[0, g2], [g1, 0]]))

    @property
    def sigma_min(self) -> float:
        return sigma_min(self.L)

    def compose_linear(self, Gamma) -> AutJet:
        """Jet of ``phi o tau`` for the linear map ``tau(x) = Gamma x``."""
        return AutJet(self.b, self.L @ np.asarray(Gamma, dtype=np.complex128))


def b_margin(jet: AutJet, ctx: PencilContext) -> float:
    return fp_margin(ctx, scalar_tuple(*jet.b))


def build_B0(jet: AutJet, ctx: PencilContext) -> np.ndarray:
    """``cal_L`` at the level-one point b; positive definite exactly when b lies in the domain."""
    B0 = cal_L(ctx, scalar_tuple(*jet.b))
    lam = float(np.linalg.eigvalsh(B0)[0])
    if lam <= 0:
        raise NotPositiveDefiniteError(lam, what="B0 (b outside the domain)")
    return B0


def build_Y(jet: AutJet, ctx: PencilContext) -> np.ndarray:
    """``Y_j = sum_k L[k, j] R_k``."""
    R = make_R(ctx)
    L = jet.L
    return np.stack([L[0, j] * R[0] + L[1, j] * R[1] for j in range(2)])


def build_B(jet: AutJet, ctx: PencilContext) -> np.ndarray:
    W = inv_sqrt_posdef(build_B0(jet, ctx))
    return np.stack([W @ y @ W for y in build_Y(jet, ctx)])


def sigma_permutation(s: int, perm=BLOCK_PERMUTATION) -> np.ndarray:
    """Permutation matrix with column k equal to ``e_{perm[k]}``, tensored with ``I_s``."""
    P = np.zeros((8, 8))
    for k, p in enumerate(perm):
        P[p - 1, k] = 1.0
    return np.kron(P, np.eye(s))


def phi_on_S(jet: AutJet, X) -> np.ndarray:
    """``phi_j(S (x) X) = [[b_j I, sum_k L[j,k] X_k], [0, b_j I]]``."""
    X = as_tuple(X)
    n = X.shape[1]
    I = np.eye(n)
    out = []
    for j in range(2):
        Z = jet.L[j, 0] * X[0] + jet.L[j, 1] * X[1]
        out.append(np.block([[jet.b[j] * I, Z], [np.zeros((n, n)), jet.b[j] * I]]))
    return np.stack(out)


def althfP_target(jet: AutJet, ctx: PencilContext, X) -> np.ndarray:
    X = as_tuple(X)
    n = X.shape[1]
    B0n = np.kron(build_B0(jet, ctx), np.eye(n))
    LY = lambda_pencil(build_Y(jet, ctx), X)
    return np.block([[B0n, LY], [adjoint(LY), B0n]])


def althfP_lhs(jet: AutJet, ctx: PencilContext, X, perm=BLOCK_PERMUTATION) -> np.ndarray:
    """``(Sigma* (x) I) cal_L(phi(S (x) X)) (Sigma (x) I)`` in (S, L, C, n) ordering.

    ``cal_L`` natively orders indices as (L-block 4, C-factor s, S-factor 2,
    level n); they are first moved to (L, S, C, n) so the 8 = 4 x 2 factor is
    contiguous, then the permutation brings S in front.
    """
    X = as_tuple(X)
    n, s = X.shape[1], ctx.s
    M = cal_L(ctx, phi_on_S(jet, X))
    M = permute_factors(M, (4, s, 2, n), (0, 2, 1, 3))
    P = np.kron(sigma_permutation(s, perm), np.eye(n))
    return P.T @ M @ P


def verify_althfP(jet: AutJet, ctx: PencilContext, X, perm=BLOCK_PERMUTATION) -> float:
    """Spectral-norm deviation between the permuted ``cal_L(phi(S x X))`` and the block form."""
    return float(np.linalg.norm(althfP_lhs(jet, ctx, X, perm) - althfP_target(jet, ctx, X), 2))


def kernel_subspace_expected(jet: AutJet, ctx: PencilContext) -> np.ndarray:
    """Columns spanning ``B0^(1/2) H_1`` where ``H_1`` is the first s-block coordinate."""
    s = ctx.s
    H1 = np.zeros((4 * s, s))
    H1[:s, :] = np.eye(s)
    return sqrt_posdef(build_B0(jet, ctx)) @ H1


def residual_pres1(jet: AutJet, ctx: PencilContext) -> float:
    """Frobenius residual of the (1,2)-block identity every automorphism jet satisfies."""
    if not ctx.invertible():
        raise ShapeError("C1 and C2 must be invertible")
    (l11, l12), (l21, l22) = jet.L
    b1, b2 = jet.b
    C1i, C2i = np.linalg.inv(ctx.C1), np.linalg.inv(ctx.C2)
    lhs = -(l11 * np.conj(l12) * C2i @ adjoint(C2i) + l21 * np.conj(l22) * C1i @ adjoint(C1i))
    rhs = (l11 * b2 - l21 * b1) * np.conj(-l12 * b2 + l22 * b1) * np.eye(ctx.s)
    return float(np.linalg.norm(lhs - rhs))


def is_trivial(jet: AutJet, eps: float = UNIMODULAR_TOL) -> bool:
    if np.max(np.abs(jet.b)) > eps:
        return False
    L = jet.L
    for main, off in (((0, 0), (1, 1)), ((0, 1), (1, 0))):
        other = [(i, j) for i in range(2) for j in range(2) if (i, j) not in (main, off)]
        if all(abs(L[i, j]) <= eps for i, j in other) and all(
            abs(abs(L[p]) - 1) <= eps for p in (main, off)
        ):
            return True
    return False


def necessary_conditions(jet: AutJet, ctx: PencilContext, eps: float = UNIMODULAR_TOL) -> list[dict]:
    """Each computable necessary condition in evaluation order, with its value."""
    (l11, l12), (l21, l22) = jet.L
    b1, b2 = jet.b
    s = ctx.s
    conds = [
        {"name": "b_in_domain", "value": b_margin(jet, ctx), "holds": b_margin(jet, ctx) > 0},
        {"name": "L_invertible", "value": jet.sigma_min, "holds": jet.sigma_min > eps},
    ]
    if s > 1:
        v = abs(b1 * np.conj(b2))
        conds.append({"name": "b1_b2_zero", "value": v, "holds": v <= eps})
        diag_zero = max(abs(l12), abs(l21))
        anti_zero = max(abs(l11), abs(l22))
        v = min(diag_zero, anti_zero)
        conds.append({"name": "L_diagonal_or_antidiagonal", "value": v, "holds": v <= eps})
    if ctx.invertible():
        v = residual_pres1(jet, ctx)
        conds.append({"name": "pres1_residual", "value": v, "holds": v <= eps})
    v = float(np.linalg.norm(adjoint(jet.L) @ jet.L - np.eye(2)))
    conds.append({"name": "L_unitary", "value": v, "holds": v <= eps})
    v = max(abs(l11 * l21), abs(l12 * l22))
    conds.append({"name": "column_products_zero", "value": v, "holds": v <= eps})
    return conds


def classify_jet(jet: AutJet, ctx: PencilContext, eps: float = UNIMODULAR_TOL) -> dict:
    """``trivial``, ``violates-necessary-conditions`` (with the first failure) or ``undetermined``."""
    conds = necessary_conditions(jet, ctx, eps)
    report = {"conditions": [{k: (float(v) if k == "value" else v) for k, v in c.items()} for c in conds]}
    if is_trivial(jet, eps):
        report["verdict"] = "trivial"
        return report
    for c in conds:
        if not c["holds"]:
            report["verdict"] = "violates-necessary-conditions"
            report["violation"] = c["name"]
            return report
    report["verdict"] = "undetermined"
    return report


def ball_agreement_probe(
    jet: AutJet,
    ctx: PencilContext,
    levels=(1, 2, 3, 4),
    trials: int = 1000,
    seed: int = 0,
    eps: float = DEFAULT_EPS,
    workers: int = 1,
    scales: dict | None = None,
) -> dict:
    """Compare membership in the spectraballs of B and of E on sampled points.

    A disagreement outside the margin band refutes the jet; it is rechecked
    with a ten times tighter band before being reported.
    """
    B = build_B(jet, ctx)
    E = make_E(ctx)
    per_level = max(1, trials // len(levels))
    scales = dict(scales or {})
    witness = None
    agreements = 0
    for n in levels:
        if n not in scales:
            scales[n] = probe_scale(ctx, n, seed)
        scale = scales[n]

        def trial(i, n=n, scale=scale):
            rng = trial_rng(seed, f"probe:{n}", i)
            X = scale * rng.uniform(0.5, 1.5) * gaussian_tuple(2, n, rng)
            mb, me = spectraball_margin(B, X), spectraball_margin(E, X)
            return i, X, mb, me

        for i, X, mb, me in run_trials(trial, per_level, workers):
            cb, ce = classify(mb, eps), classify(me, eps)
            if Region.BOUNDARY in (cb.region, ce.region) or cb.region == ce.region:
                agreements += cb.region == ce.region
                continue
            tight = eps / 10
            if classify(mb, tight).region != classify(me, tight).region:
                witness = {"level": n, "trial": i, "X": X, "margin_B": mb, "margin_E": me}
                break
        if witness is not None:
            break
    return {
        "levels": list(levels),
        "trials_per_level": per_level,
        "scales": {str(k): v for k, v in scales.items()},
        "agreements": agreements,
        "witness": witness,
    }


def probe_scale(ctx: PencilContext, n: int, seed: int = 0) -> float:
    """Sampling scale putting about half of the level-n Gaussian draws inside the ball of E."""
    E = make_E(ctx)
    return calibrate_scale(lambda X: spectraball_margin(E, X), 2, n, trial_rng(seed, f"probe:calibrate:{n}"))


def random_jet(ctx: PencilContext, rng: np.random.Generator, b_scale: float = 0.5) -> AutJet:
    """Random jet with b strictly inside the domain and generic invertible L."""
    while True:
        b = b_scale * random_complex(2, rng)
        L = random_complex((2, 2), rng)
        jet = AutJet(b, L)
        if b_margin(jet, ctx) > 0.05 and jet.sigma_min > 0.05:
            return jet

"""Matrix tuples, free polynomials, linear pencils and the sets they cut out.

A g-tuple of d x e matrices is stored as a ``complex128`` array of shape
``(g, d, e)``.  Words are tuples of 1-based variable indices, so ``(1, 2)``
stands for ``x1 x2`` and ``()`` for the empty word.  Tensor products always
put the coefficient on the left: ``Lambda_A(X) = sum_j A_j (x) X_j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import ShapeError, SingularResolventError
from .linalg import (
    adjoint,
    as_matrix,
    direct_sum,
    herm_max_eig,
    herm_min_eig,
    op_norm,
    random_unitary,
    sigma_min,
)
from .sampling import calibrate_scale, gaussian_tuple, trial_rng

DEFAULT_EPS = 1e-7

# ---------------------------------------------------------------------------
# tuples and words


def as_tuple(X) -> np.ndarray:
    """Coerce a sequence of matrices (or a 3-d array) to a ``(g, d, e)`` array."""
    if isinstance(X, np.ndarray) and X.ndim == 3:
        return X.astype(np.complex128, copy=False)
    mats = [as_matrix(x) for x in X]
    if not mats:
        raise ShapeError("a tuple needs at least one entry")
    shape = mats[0].shape
    if any(m.shape != shape for m in mats):
        raise ShapeError(f"tuple entries have differing shapes {[m.shape for m in mats]}")
    return np.stack(mats)


def scalar_tuple(*z) -> np.ndarray:
    """The level-one point ``(z1, ..., zg)`` as a tuple of 1x1 matrices."""
    return np.asarray(z, dtype=np.complex128).reshape(len(z), 1, 1)


def is_square(X) -> bool:
    X = as_tuple(X)
    return X.shape[1] == X.shape[2]


def _require_square(X):
    if X.shape[1] != X.shape[2]:
        raise ShapeError(f"tuple entries must be square, got {X.shape[1:]}")


def tuple_direct_sum(X, Y) -> np.ndarray:
    X, Y = as_tuple(X), as_tuple(Y)
    if X.shape[0] != Y.shape[0]:
        raise ShapeError("tuples have different numbers of variables")
    return np.stack([direct_sum(x, y) for x, y in zip(X, Y)])


def unitary_conjugate(X, U) -> np.ndarray:
    """``U* X U`` entrywise."""
    X = as_tuple(X)
    U = as_matrix(U)
    return np.stack([adjoint(U) @ x @ U for x in X])


def row_matrix(X) -> np.ndarray:
    """The n x ng matrix ``[X1 ... Xg]``."""
    return np.hstack(list(as_tuple(X)))


def eval_word(X, word) -> np.ndarray:
    X = as_tuple(X)
    _require_square(X)
    g, n = X.shape[0], X.shape[1]
    out = np.eye(n, dtype=np.complex128)
    for letter in word:
        if not 1 <= letter <= g:
            raise ShapeError(f"letter {letter} out of range 1..{g}")
        out = out @ X[letter - 1]
    return out


@dataclass
class FreePolynomial:
    """Finitely supported map from words to d x e coefficient matrices.

    ``trunc`` is an optional degree bound; when set the polynomial is read as
    a power series truncated at that degree.
    """

    g: int
    coeffs: dict = field(default_factory=dict)
    trunc: int | None = None

    def __post_init__(self):
        clean = {}
        shape = None
        for word, c in self.coeffs.items():
            word = tuple(int(i) for i in word)
            if any(not 1 <= i <= self.g for i in word):
                raise ShapeError(f"word {word} uses a letter outside 1..{self.g}")
            if self.trunc is not None and len(word) > self.trunc:
                raise ShapeError(f"word {word} exceeds truncation degree {self.trunc}")
            c = as_matrix(c)
            if shape is None:
                shape = c.shape
            elif c.shape != shape:
                raise ShapeError("coefficient shapes differ")
            if np.any(c != 0):
                clean[word] = c
        self.coeffs = clean
        self._shape = shape if shape is not None else (1, 1)

    @property
    def shape(self) -> tuple[int, int]:
        return self._shape

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    def coeff(self, word) -> np.ndarray:
        return self.coeffs.get(tuple(word), np.zeros(self.shape, dtype=np.complex128))

    def homogeneous_part(self, length: int) -> dict:
        return {w: c for w, c in self.coeffs.items() if len(w) == length}


def eval_poly(p: FreePolynomial, X) -> np.ndarray:
    """``p(X) = sum_w p_w (x) X^w``, of shape ``(d n, e n)``."""
    X = as_tuple(X)
    _require_square(X)
    n = X.shape[1]
    d, e = p.shape
    out = np.zeros((d * n, e * n), dtype=np.complex128)
    for word, Xw in word_powers(X, p.coeffs).items():
        c = p.coeffs[word]
        out += c[0, 0] * Xw if c.shape == (1, 1) else np.kron(c, Xw)
    return out


def word_powers(X, words) -> dict:
    """``{w: X^w}`` for the given words, sharing prefix products."""
    X = as_tuple(X)
    _require_square(X)
    cache = {(): np.eye(X.shape[1], dtype=np.complex128)}

    def power(w):
        if w not in cache:
            if not 1 <= w[-1] <= X.shape[0]:
                raise ShapeError(f"letter {w[-1]} out of range 1..{X.shape[0]}")
            cache[w] = power(w[:-1]) @ X[w[-1] - 1]
        return cache[w]

    return {w: power(tuple(w)) for w in sorted(words, key=len)}


# ---------------------------------------------------------------------------
# pencils and membership


class Region(str, enum.Enum):
    INSIDE = "inside"
    BOUNDARY = "boundary-band"
    OUTSIDE = "outside"


class Membership(NamedTuple):
    region: Region
    margin: float

    @property
    def inside(self) -> bool:
        return self.region is Region.INSIDE

    def to_json(self) -> dict:
        return {"region": self.region.value, "margin": self.margin}


def classify(margin: float, eps: float = DEFAULT_EPS) -> Membership:
    margin = float(margin)
    if margin > eps:
        return Membership(Region.INSIDE, margin)
    if margin < -eps:
        return Membership(Region.OUTSIDE, margin)
    return Membership(Region.BOUNDARY, margin)


def lambda_pencil(A, X) -> np.ndarray:
    A, X = as_tuple(A), as_tuple(X)
    _require_square(X)
    if A.shape[0] != X.shape[0]:
        raise ShapeError(f"pencil has {A.shape[0]} variables, point has {X.shape[0]}")
    return sum(np.kron(a, x) for a, x in zip(A, X))


def monic_pencil(A, X) -> np.ndarray:
    A = as_tuple(A)
    if A.shape[1] != A.shape[2]:
        raise ShapeError("monic pencil needs square coefficients")
    L = lambda_pencil(A, X)
    return np.eye(L.shape[0]) + L + adjoint(L)


def spectrahedron_margin(A, X) -> float:
    return herm_min_eig(monic_pencil(A, X))


def spectraball_margin(G, X) -> float:
    return 1.0 - op_norm(lambda_pencil(G, X))


def in_spectrahedron(A, X, eps: float = DEFAULT_EPS) -> Membership:
    return classify(spectrahedron_margin(A, X), eps)


def in_spectraball(G, X, eps: float = DEFAULT_EPS) -> Membership:
    return classify(spectraball_margin(G, X), eps)


def row_ball_margin(X, delta: float = 1.0) -> float:
    X = as_tuple(X)
    n = X.shape[1]
    gram = sum(x @ adjoint(x) for x in X)
    return herm_min_eig(delta**2 * np.eye(n) - gram)


def in_row_ball(X, delta: float = 1.0, eps: float = DEFAULT_EPS) -> Membership:
    """Membership in ``B(0, delta) = {X : sum X_j X_j* < delta^2}``."""
    return classify(row_ball_margin(X, delta), eps)


# ---------------------------------------------------------------------------
# the two-variable pencil built from C1, C2


@dataclass(frozen=True)
class PencilContext:
    """The pair ``C1, C2`` of s x s matrices, rescaled to operator norm one."""

    C1: np.ndarray
    C2: np.ndarray

    def __post_init__(self):
        C1, C2 = as_matrix(self.C1), as_matrix(self.C2)
        if C1.shape != C2.shape or C1.shape[0] != C1.shape[1]:
            raise ShapeError(f"C1, C2 must be square of one size, got {C1.shape}, {C2.shape}")
        for name, C in (("C1", C1), ("C2", C2)):
            nrm = op_norm(C)
            if nrm == 0:
                raise ShapeError(f"{name} is zero")
            object.__setattr__(self, name, C / nrm)

    @property
    def s(self) -> int:
        return self.C1.shape[0]

    @property
    def C(self) -> tuple[np.ndarray, np.ndarray]:
        return self.C1, self.C2

    @property
    def sigma_min(self) -> tuple[float, float]:
        return sigma_min(self.C1), sigma_min(self.C2)

    def invertible(self, eps: float = 1e-9) -> bool:
        return min(self.sigma_min) > eps


def pseudo_ellipse_context() -> PencilContext:
    """s = 1 with C1 = C2 = 1; level one of the domain is |z1| + |z2| < 1."""
    return PencilContext(np.eye(1), np.eye(1))


HADAMARD_2 = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


def example_context_s2() -> PencilContext:
    """C1 = diag(1, 1/2), C2 = H C1 H with H the 2x2 Hadamard matrix."""
    C1 = np.diag([1.0, 0.5])
    return PencilContext(C1, HADAMARD_2 @ C1 @ HADAMARD_2)


def commuting_context() -> PencilContext:
    """C1 = C2 = diag(1, 1/2); invertible but generates only the diagonal algebra."""
    C = np.diag([1.0, 0.5])
    return PencilContext(C, C.copy())


def _unit(i, j, k=4, l=None):
    E = np.zeros((k, k if l is None else l))
    E[i - 1, j - 1] = 1.0
    return E


def make_R(ctx: PencilContext) -> np.ndarray:
    R1 = np.kron(_unit(1, 2) + _unit(3, 4), ctx.C1)
    R2 = np.kron(_unit(1, 3) + _unit(2, 4), ctx.C2)
    return np.stack([R1, R2])


def make_Er(ctx: PencilContext) -> np.ndarray:
    e = np.eye(2)
    return np.stack([np.kron(e[[0]], ctx.C1), np.kron(e[[1]], ctx.C2)])


def make_Ec(ctx: PencilContext) -> np.ndarray:
    e = np.eye(2)
    return np.stack([np.kron(e[:, [0]], ctx.C1), np.kron(e[:, [1]], ctx.C2)])


def make_E(ctx: PencilContext) -> np.ndarray:
    E1 = np.kron(_unit(1, 1, 3) + _unit(3, 3, 3), ctx.C1)
    E2 = np.kron(_unit(1, 2, 3) + _unit(2, 3, 3), ctx.C2)
    return np.stack([E1, E2])


def _Y(ctx, X):
    X = as_tuple(X)
    _require_square(X)
    if X.shape[0] != 2:
        raise ShapeError("the pencil L is defined for pairs only")
    return np.kron(ctx.C1, X[0]), np.kron(ctx.C2, X[1])


def cal_L(ctx: PencilContext, X) -> np.ndarray:
    """The Hermitian 4x4 block matrix with off-diagonal blocks Y_j = C_j (x) X_j."""
    Y1, Y2 = _Y(ctx, X)
    I = np.eye(Y1.shape[0])
    Z = np.zeros_like(Y1)
    Y1s, Y2s = adjoint(Y1), adjoint(Y2)
    return np.block(
        [
            [I, Y1, Y2, Z],
            [Y1s, I, Z, Y2],
            [Y2s, Z, I, Y1],
            [Z, Y2s, Y1s, I],
        ]
    )


def T_matrix(ctx: PencilContext, X) -> np.ndarray:
    Y1, Y2 = _Y(ctx, X)
    return np.block([[adjoint(Y1), Y2], [adjoint(Y2), Y1]])


def fp_membership_quad(ctx: PencilContext, X, eps: float = DEFAULT_EPS) -> dict[str, Membership]:
    """Four equivalent membership tests for the domain of ``cal_L``.

    ``L``: min eigenvalue of cal_L(X); ``T``: 1 - ||T(X)||;
    ``L_prime``: min eigenvalue of I - T T*; ``L_prime_star``: of I - T* T.
    """
    T = T_matrix(ctx, X)
    I = np.eye(T.shape[0])
    return {
        "L": classify(herm_min_eig(cal_L(ctx, X)), eps),
        "T": classify(1.0 - op_norm(T), eps),
        "L_prime": classify(herm_min_eig(I - T @ adjoint(T)), eps),
        "L_prime_star": classify(herm_min_eig(I - adjoint(T) @ T), eps),
    }


def fp_margin(ctx: PencilContext, X) -> float:
    return herm_min_eig(cal_L(ctx, X))


def boundedness_constant(ctx: PencilContext) -> float:
    """Bound on ``||[X1 X2]||`` over the whole domain of ``cal_L``.

    Inside, ``||T(X)|| < 1`` forces ``||C_j (x) X_j|| < 1`` and so
    ``||X_j|| < 1/sigma_min(C_j)``.
    """
    return float(np.sqrt(2.0) / min(ctx.sigma_min))


# ---------------------------------------------------------------------------
# rational functions


@dataclass
class Realization:
    """``r(x) = c* (I - Lambda_A(x))^{-1} b`` with A an e x e tuple and b, c in C^e."""

    A: np.ndarray
    c: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        self.A = as_tuple(self.A)
        self.c = np.asarray(self.c, dtype=np.complex128).reshape(-1)
        self.b = np.asarray(self.b, dtype=np.complex128).reshape(-1)
        e = self.A.shape[1]
        if self.A.shape[2] != e or self.c.size != e or self.b.size != e:
            raise ShapeError("realization shapes are inconsistent")

    @property
    def g(self) -> int:
        return self.A.shape[0]


def rational_eval(r: Realization, X, eps: float = 1e-12) -> np.ndarray:
    """``(c* (x) I_n)(I - Lambda_A(X))^{-1}(b (x) I_n)``, an n x n matrix."""
    X = as_tuple(X)
    _require_square(X)
    n = X.shape[1]
    M = np.eye(r.A.shape[1] * n) - lambda_pencil(r.A, X)
    smin = sigma_min(M)
    if smin <= eps:
        raise SingularResolventError(smin)
    I = np.eye(n)
    left = np.kron(np.conj(r.c)[None, :], I)
    right = np.kron(r.b[:, None], I)
    return left @ np.linalg.solve(M, right)


# ---------------------------------------------------------------------------
# concrete witness points


def boundary_point() -> np.ndarray:
    """``(E11, E22)`` at level two: a direct sum of the boundary points (1,0), (0,1)."""
    return np.stack([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]).astype(np.complex128)


SWAP_2 = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
NILPOTENT_2 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)


def left_multiply(U, X) -> np.ndarray:
    """``U X = (U X1, ..., U Xg)``."""
    return np.stack([as_matrix(U) @ x for x in as_tuple(X)])


def twisted_point() -> np.ndarray:
    """``(W0* X1 W1, W1* X2 W2)`` for the boundary point with (W0, W1, W2) = (I, U, U^2)."""
    X = boundary_point()
    U = SWAP_2
    W0, W1, W2 = np.eye(2), U, U @ U
    return np.stack([adjoint(W0) @ X[0] @ W1, adjoint(W1) @ X[1] @ W2])


def not_a_ball_witnesses(ctx: PencilContext, interior_scale: float = 0.999, eps: float = DEFAULT_EPS) -> dict:
    """Witness points showing the domain is neither hyper-Reinhardt nor a spectraball."""
    X = boundary_point()
    Wx = twisted_point()
    T = T_matrix(ctx, Wx)
    inner = interior_scale * X
    UX = left_multiply(SWAP_2, inner)
    Tu = T_matrix(ctx, left_multiply(SWAP_2, X))
    I = np.eye(T.shape[0])
    return {
        "boundary_point": {k: m.to_json() for k, m in fp_membership_quad(ctx, X, eps).items()},
        "twisted_point_L_prime_star_min_eig": herm_min_eig(I - adjoint(T) @ T),
        "interior_scale": interior_scale,
        "scaled_point": fp_membership_quad(ctx, inner, eps)["L"].to_json(),
        "rotated_scaled_point": fp_membership_quad(ctx, UX, eps)["L"].to_json(),
        "rotated_boundary_L_prime_min_eig": herm_min_eig(np.eye(Tu.shape[0]) - Tu @ adjoint(Tu)),
    }


def ball_noninclusion_witnesses(ctx: PencilContext, eps: float = DEFAULT_EPS) -> dict:
    """Points inside one of the row/column balls and outside the other.

    ``rho = sqrt(2 / (1 + lambda_max))`` makes ``rho^2 lambda_max > 1`` exactly
    when ``lambda_max > 1``; the result is clipped below 1.
    """
    D = np.diag([0.0, 1.0]).astype(np.complex128)
    E11 = np.diag([1.0, 0.0]).astype(np.complex128)
    C1, C2 = ctx.C
    lam_col = herm_max_eig(adjoint(C1) @ C1 + adjoint(C2) @ C2)
    lam_row = herm_max_eig(C1 @ adjoint(C1) + C2 @ adjoint(C2))
    out = {}
    for name, lam, X0, good, bad in (
        ("row_not_col", lam_col, np.stack([NILPOTENT_2, D]), make_Er, make_Ec),
        ("col_not_row", lam_row, np.stack([E11, NILPOTENT_2]), make_Ec, make_Er),
    ):
        rho = min(np.sqrt(2.0 / (1.0 + lam)), 1.0 - 1e-12)
        X = rho * X0
        out[name] = {
            "rho": float(rho),
            "lambda_max": float(lam),
            "point": X,
            "inside": in_spectraball(good(ctx), X, eps).to_json(),
            "outside": in_spectraball(bad(ctx), X, eps).to_json(),
        }
    return out


def circular_symmetry_probe(A, samples: int = 1000, seed: int = 0, level: int = 2, eps: float = DEFAULT_EPS) -> dict:
    """Search for X in D_A and a unitary U with U X outside D_A.

    Spectrahedra that are spectraballs admit no such pair.  For two-variable
    pencils the boundary-point witness (scaled into the interior) is tested as
    well.
    """
    A = as_tuple(A)
    g = A.shape[0]
    margin = lambda X: spectrahedron_margin(A, X)
    scale = calibrate_scale(margin, g, level, trial_rng(seed, "circular:calibrate"))
    witness = None
    inside = 0
    for i in range(samples):
        rng = trial_rng(seed, "circular", i)
        X = scale * gaussian_tuple(g, level, rng)
        U = random_unitary(level, rng)
        if margin(X) <= eps:
            continue
        inside += 1
        m = in_spectrahedron(A, left_multiply(U, X), eps)
        if m.region is Region.OUTSIDE:
            witness = {"trial": i, "X": X, "U": U, "margin": m.margin}
            break
    report = {"samples": samples, "inside_samples": inside, "scale": scale, "witness": witness}
    if g == 2:
        X = 0.999 * boundary_point()
        base = in_spectrahedron(A, X, eps)
        rotated = in_spectrahedron(A, left_multiply(SWAP_2, X), eps)
        report["specific"] = {
            "applicable": base.inside,
            "point": base.to_json(),
            "rotated": rotated.to_json(),
            "is_witness": base.inside and rotated.region is Region.OUTSIDE,
        }
    return report

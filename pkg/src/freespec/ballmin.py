"""Ball-minimality certificates and ball-equivalence probing."""

from __future__ import annotations

import numpy as np

from .cstar import (
    SpanBasis,
    all_reducing_projections,
    check_hypotheses,
    commutant,
    generated_star_algebra,
    reducing_projections,
)
from .errors import HypothesisError
from .freesets import (
    DEFAULT_EPS,
    PencilContext,
    as_tuple,
    ball_noninclusion_witnesses,
    make_E,
)
from .linalg import adjoint, kernel_basis


def embed_ball(G) -> np.ndarray:
    """``H_j = [[0, G_j], [0, 0]]``, so that the spectraball of G is the spectrahedron of H."""
    G = as_tuple(G)
    g, d, e = G.shape
    H = np.zeros((g, d + e, d + e), dtype=np.complex128)
    H[:, :d, d:] = G
    return H


def _unit6(i, j):
    E = np.zeros((6, 6))
    E[i - 1, j - 1] = 1.0
    return E


def build_F(ctx: PencilContext) -> tuple[np.ndarray, np.ndarray]:
    """The matrix-unit tuple F and the permutation P with ``F_j = P^T H_j P``.

    ``H = embed_ball(E)``.  Block coordinates of H are (rows of E, columns of
    E) = (1..3, 4..6); F uses rows 1, 5 / columns 2, 3, 6 and row 4 for the
    column part, so P is a permutation of the six s-blocks.
    """
    F1 = np.kron(_unit6(1, 2) + _unit6(5, 6), ctx.C1)
    F2 = np.kron(_unit6(1, 3) + _unit6(4, 6), ctx.C2)
    F = np.stack([F1, F2])
    H = embed_ball(make_E(ctx))
    P = block_permutation_between(H, F, ctx.s)
    return F, P


def block_permutation_between(H, F, s: int) -> np.ndarray:
    """Find a permutation of s-blocks carrying the tuple H onto F, by exhaustive search."""
    from itertools import permutations

    k = H.shape[1] // s
    for perm in permutations(range(k)):
        Pb = np.eye(k)[:, perm]
        P = np.kron(Pb, np.eye(s))
        if all(np.allclose(P.T @ h @ P, f) for h, f in zip(H, F)):
            return P
    raise ValueError("no block permutation relates the tuples")


def verify_E_ball_minimal(ctx: PencilContext, eps: float = 1e-8, seed: int = 0) -> dict:
    """Algebra certificate: F generates ``M_3s + M_3s`` and the two halves are irredundant."""
    hyp = check_hypotheses(ctx)
    if not hyp["passed"]:
        raise HypothesisError(hyp)
    s = ctx.s
    F, P = build_F(ctx)
    gens = list(F)
    alg = generated_star_algebra(gens, eps)
    comm = commutant(gens, eps)
    minimal = reducing_projections(comm, seed=seed)
    projections = all_reducing_projections(minimal) if len(minimal) <= 4 else []
    n = 6 * s
    upper = np.zeros((n, n))
    upper[: 3 * s, : 3 * s] = np.eye(3 * s)
    expected = [np.zeros((n, n)), np.eye(n), upper, np.eye(n) - upper]
    match = len(projections) == len(expected) and all(
        any(np.linalg.norm(P_ - Q) <= eps for P_ in projections) for Q in expected
    )
    witnesses = ball_noninclusion_witnesses(ctx)
    irredundant = all(
        w["inside"]["region"] == "inside" and w["outside"]["region"] == "outside" for w in witnesses.values()
    )
    report = {
        "s": s,
        "algebra_dim": alg.dim,
        "expected_dim": 18 * s * s,
        "commutant_dim": comm.dim,
        "reducing_projections": [
            {"rank": int(round(np.trace(Q).real)), "diag_blocks": _block_support(Q, s)} for Q in projections
        ],
        "projections_match": bool(match),
        "block_permutation": [int(i) for i in np.argmax(P[:: s, :: s], axis=0)],
        "witnesses": {
            k: {kk: vv for kk, vv in w.items() if kk != "point"} for k, w in witnesses.items()
        },
    }
    report["passed"] = bool(
        report["algebra_dim"] == report["expected_dim"] and comm.dim == 2 and match and irredundant
    )
    return report


def _block_support(Q, s):
    k = Q.shape[0] // s
    return [i + 1 for i in range(k) if np.linalg.norm(Q[i * s : (i + 1) * s, i * s : (i + 1) * s]) > 0.5]


def _trace_word_difference(letters_a, letters_b, maxlen, eps):
    """Compare traces of all words in paired letters, pruning words already in the span.

    The pair algebra element for a word is ``w(a) (+) w(b)``; if it lies in the
    span of earlier words, so does every extension of it, and its trace
    difference is the same linear combination of zero differences.
    """
    na, nb = letters_a[0].shape[0], letters_b[0].shape[0]
    sb = SpanBasis(na * na + nb * nb)
    frontier = [((), np.eye(na), np.eye(nb))]
    sb.add(np.concatenate([np.eye(na).reshape(-1), np.eye(nb).reshape(-1)]))
    examined = 1
    if abs(na - nb) > eps:
        return {"distinct": True, "word": [], "difference": float(na - nb), "examined": examined}
    for length in range(1, maxlen + 1):
        new = []
        for word, wa, wb in frontier:
            for k, (la, lb) in enumerate(zip(letters_a, letters_b)):
                pa, pb = wa @ la, wb @ lb
                examined += 1
                diff = np.trace(pa) - np.trace(pb)
                if abs(diff) > eps:
                    return {
                        "distinct": True,
                        "word": list(word + (k,)),
                        "difference": float(abs(diff)),
                        "examined": examined,
                    }
                v = np.concatenate([pa.reshape(-1), pb.reshape(-1)])
                if sb.add(v, scale=max(1.0, np.linalg.norm(v))):
                    new.append((word + (k,), pa, pb))
        if not new:
            break
        frontier = new
    return {"distinct": False, "examined": examined}


def ball_equivalent_probe(G, F, maxlen: int | None = None, eps: float = 1e-9) -> dict:
    """Necessary test for ``F = V* G U``: traces of words in ``G_i G_j*`` and ``G_i* G_j``.

    Returns ``distinct`` when a trace mismatch is found, otherwise
    ``consistent-up-to-maxlen`` (which is not a proof of equivalence).
    """
    G, F = as_tuple(G), as_tuple(F)
    if G.shape != F.shape:
        return {"verdict": "distinct", "reason": "shape", "maxlen": maxlen}
    g, d, e = G.shape
    if maxlen is None:
        maxlen = 2 * (d + e) ** 2
    pairs = [(i, j) for i in range(g) for j in range(g)]
    report = {"maxlen": maxlen, "letters": [[i + 1, j + 1] for i, j in pairs]}
    for side, mk in (
        ("row", lambda T, i, j: T[i] @ adjoint(T[j])),
        ("col", lambda T, i, j: adjoint(T[i]) @ T[j]),
    ):
        la = [mk(G, i, j) for i, j in pairs]
        lb = [mk(F, i, j) for i, j in pairs]
        res = _trace_word_difference(la, lb, maxlen, eps)
        report[side] = res
        if res["distinct"]:
            report["verdict"] = "distinct"
            return report
    report["verdict"] = "consistent-up-to-maxlen"
    return report


def kernel_intersection(B, eps: float = 1e-9) -> list[np.ndarray]:
    """Orthonormal basis of the common kernel of the entries of B."""
    B = as_tuple(B)
    return kernel_basis(np.vstack(list(B)), eps)

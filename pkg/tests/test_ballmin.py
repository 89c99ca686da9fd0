import numpy as np
import pytest

from freespec.ballmin import (
    ball_equivalent_probe,
    build_F,
    embed_ball,
    kernel_intersection,
    verify_E_ball_minimal,
)
from freespec.errors import HypothesisError
from freespec.freesets import (
    make_E,
    make_Ec,
    make_Er,
    make_R,
    spectraball_margin,
    spectrahedron_margin,
)
from freespec.linalg import adjoint, random_complex, random_unitary
from freespec.sampling import gaussian_tuple, trial_rng


def test_embed_zero():
    H = embed_ball(np.zeros((2, 2, 3)))
    assert H.shape == (2, 5, 5) and not H.any()


def test_embed_ball_margins_agree_in_sign(ctx2):
    E = make_E(ctx2)
    H = embed_ball(E)
    for i in range(100):
        X = 0.4 * gaussian_tuple(2, 2, trial_rng(0, "embed", i))
        mb, mh = spectraball_margin(E, X), spectrahedron_margin(H, X)
        if min(abs(mb), abs(mh)) > 1e-9:
            assert (mb > 0) == (mh > 0)


def test_F_is_permuted_embedding(ctx):
    F, P = build_F(ctx)
    H = embed_ball(make_E(ctx))
    np.testing.assert_allclose(adjoint(P) @ P, np.eye(P.shape[0]))
    for h, f in zip(H, F):
        np.testing.assert_allclose(P.T @ h @ P, f)


@pytest.mark.parametrize("s,dim", [(1, 18), (2, 72)])
def test_ball_minimal_certificate(s, dim, ctx1, ctx2):
    ctx = ctx1 if s == 1 else ctx2
    cert = verify_E_ball_minimal(ctx)
    assert cert["algebra_dim"] == dim
    assert cert["commutant_dim"] == 2
    assert cert["projections_match"]
    assert sorted(p["rank"] for p in cert["reducing_projections"]) == [0, 3 * s, 3 * s, 6 * s]
    assert cert["passed"]


def test_ball_minimal_refuses_failed_hypotheses(ctx_commuting):
    with pytest.raises(HypothesisError):
        verify_E_ball_minimal(ctx_commuting)


def test_probe_self_consistent(ctx2):
    E = make_E(ctx2)
    assert ball_equivalent_probe(E, E, maxlen=6)["verdict"] == "consistent-up-to-maxlen"


def test_probe_unitary_equivalence(rng):
    G = random_complex((2, 3, 2), rng)
    V, U = random_unitary(3, rng), random_unitary(2, rng)
    F = np.stack([adjoint(V) @ g @ U for g in G])
    assert ball_equivalent_probe(G, F)["verdict"] == "consistent-up-to-maxlen"


def test_probe_shape_mismatch(rng):
    assert ball_equivalent_probe(random_complex((2, 2, 2), rng), random_complex((2, 3, 3), rng))["verdict"] == "distinct"


def test_probe_row_vs_column_balls(ctx2):
    s = ctx2.s

    def pad(G):
        out = np.zeros((2, 3 * s, 3 * s), dtype=complex)
        out[:, : G.shape[1], : G.shape[2]] = G
        return out

    report = ball_equivalent_probe(pad(make_Er(ctx2)), pad(make_Ec(ctx2)), maxlen=6)
    assert report["verdict"] == "distinct"


def test_probe_distinguishes_scaled(rng):
    G = random_complex((2, 2, 2), rng)
    assert ball_equivalent_probe(G, 0.5 * G, maxlen=4)["verdict"] == "distinct"


def test_kernel_of_E_is_trivial(ctx):
    assert kernel_intersection(make_E(ctx)) == []


def test_kernel_of_R_is_first_block(ctx):
    s = ctx.s
    K = np.column_stack(kernel_intersection(make_R(ctx)))
    assert K.shape == (4 * s, s)
    # supported on the first s coordinates
    assert np.linalg.norm(K[s:]) < 1e-12

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freespec.errors import FreespecError, NotNilpotentError
from freespec.freefun import (
    PowerSeries,
    check_intertwining,
    eval_series,
    julia_matrix,
    linearize_at_S,
    linearized_value,
    nilpotency_order,
    nilpotent_eval,
    s_tensor,
    series_gate_radius,
    series_of_realization,
)
from freespec.freesets import FreePolynomial, Realization, eval_poly, rational_eval, tuple_direct_sum
from freespec.linalg import adjoint, op_norm, random_complex, random_unitary
from freespec.sampling import trial_rng
from freespec.suites import block_triangular_instance, random_polynomial

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_nilpotency_of_zero():
    assert nilpotency_order(np.zeros((2, 3, 3))) == 1


def test_nilpotency_of_S_tensor(rng):
    assert nilpotency_order(s_tensor(random_complex((2, 3, 3), rng))) == 2


def test_nilpotency_of_upper_triangular(rng):
    for n in (2, 3, 4):
        X = np.stack([np.triu(random_complex((n, n), rng), 1) for _ in range(2)])
        m = nilpotency_order(X)
        assert m is not None and m <= n


def test_non_nilpotent(rng):
    assert nilpotency_order(random_complex((2, 2, 2), rng), cap=10) is None


def test_nilpotent_eval_drops_long_words(rng):
    F = PowerSeries(2, {(): 1.0, (1,): 1.0, (1, 2): 1.0}, 2)
    X = random_complex((2, 2, 2), rng)
    SX = s_tensor(X)
    np.testing.assert_allclose(nilpotent_eval(F, SX), np.eye(4) + SX[0], atol=1e-14)


def test_exp_series_on_order_three(rng):
    from math import factorial
    from itertools import product

    coeffs = {w: 1.0 / factorial(len(w)) for k in range(7) for w in product((1, 2), repeat=k)}
    F = PowerSeries(2, coeffs, 6)
    X = np.stack([np.triu(random_complex((3, 3), rng), 1) for _ in range(2)])
    assert nilpotency_order(X) == 3
    short = PowerSeries(2, {w: c for w, c in coeffs.items() if len(w) <= 2}, 2)
    np.testing.assert_allclose(nilpotent_eval(F, X), eval_poly(short, X), atol=1e-12)


def test_nilpotent_eval_needs_long_enough_series(rng):
    X = np.stack([np.triu(random_complex((4, 4), rng), 1) for _ in range(2)])
    with pytest.raises(NotNilpotentError):
        nilpotent_eval(PowerSeries(2, {(1,): 1.0}, 1), X)


def test_nilpotent_eval_matches_dense_poly():
    for i in range(30):
        rng = trial_rng(0, "dense", i)
        F = random_polynomial(2, 3, rng)
        X = s_tensor(random_complex((2, 2, 2), rng))
        np.testing.assert_allclose(nilpotent_eval(F, X), eval_poly(F, X), atol=1e-12)


def test_linearize_reads_coefficients():
    F = PowerSeries(2, {(): 3.0, (1,): 2.0, (2,): -1.0, (1, 2): 7.0})
    lin = linearize_at_S(F)
    assert lin["f0"][0, 0] == 3.0
    assert [e[0, 0] for e in lin["ell"]] == [2.0, -1.0]


def test_no_affine_part_vanishes_on_S(rng):
    F = PowerSeries(2, {(1, 1): 1.0, (2, 1): 2.0}, 2)
    lin = linearize_at_S(F)
    assert not lin["f0"].any() and not any(e.any() for e in lin["ell"])
    assert np.max(np.abs(nilpotent_eval(F, s_tensor(random_complex((2, 2, 2), rng))))) == 0


def test_linearization_contract():
    for i in range(100):
        rng = trial_rng(1, "lin", i)
        F = random_polynomial(2, int(rng.integers(1, 5)), rng)
        n = int(rng.integers(1, 4))
        X = random_complex((2, n, n), rng)
        err = np.max(np.abs(nilpotent_eval(F, s_tensor(X)) - linearized_value(linearize_at_S(F), X)))
        assert err <= 1e-12


def test_julia_zero_is_identity():
    np.testing.assert_allclose(julia_matrix(np.zeros((2, 3)), 0.5, 1j), np.eye(5))


def test_julia_unitary():
    for i in range(100):
        rng = trial_rng(2, "julia", i)
        M = random_complex((int(rng.integers(1, 4)), int(rng.integers(1, 4))), rng)
        rho = rng.uniform(0.05, 0.95) / op_norm(M)
        J = julia_matrix(M, rho, np.exp(2j * np.pi * rng.uniform()))
        assert np.linalg.norm(adjoint(J) @ J - np.eye(J.shape[0]), 2) <= 1e-10


def test_julia_small_rho(rng):
    M = random_complex((2, 2), rng) / 3
    d1 = np.linalg.norm(julia_matrix(M, 1e-2, 1.0) - np.eye(4), 2)
    d2 = np.linalg.norm(julia_matrix(M, 1e-3, 1.0) - np.eye(4), 2)
    assert d2 == pytest.approx(d1 / 10, rel=0.05)


def test_julia_rejects_large_rho():
    with pytest.raises(FreespecError):
        julia_matrix(np.eye(2), 1.0, 1.0)


def test_series_of_realization_coefficients(rng):
    r = Realization(random_complex((2, 2, 2), rng), random_complex(2, rng), random_complex(2, rng))
    F = series_of_realization(r, 3)
    A1, A2 = r.A
    np.testing.assert_allclose(F.coeff((1, 2))[0, 0], np.vdot(r.c, A1 @ A2 @ r.b))


def test_series_gate_refuses_far_points(rng):
    r = Realization(random_complex((2, 2, 2), rng), random_complex(2, rng), random_complex(2, rng))
    F = series_of_realization(r, 4)
    X = random_complex((2, 2, 2), rng)
    X *= 2 * series_gate_radius(F) / op_norm(np.hstack(list(X)))
    with pytest.raises(FreespecError):
        eval_series(F, X)


@settings(max_examples=15, deadline=None)
@given(seeds)
def test_direct_sums_respected(seed):
    rng = np.random.default_rng(seed)
    F = random_polynomial(2, 3, rng)
    X, Y = 0.3 * random_complex((2, 2, 2), rng), 0.3 * random_complex((2, 1, 1), rng)
    fXY = eval_poly(F, tuple_direct_sum(X, Y))
    fX, fY = eval_poly(F, X), eval_poly(F, Y)
    np.testing.assert_allclose(fXY[:2, :2], fX, atol=1e-10)
    np.testing.assert_allclose(fXY[2:, 2:], fY, atol=1e-10)
    assert np.max(np.abs(fXY[:2, 2:])) <= 1e-10


def test_intertwining_identity(rng):
    F = random_polynomial(2, 3, rng)
    X = random_complex((2, 3, 3), rng)
    assert check_intertwining(F, X, X, np.eye(3), gate=False) <= 1e-12


def test_intertwining_block_triangular(rng):
    for i in range(20):
        rng = trial_rng(3, "intertwine", i)
        F = random_polynomial(2, 3, rng)
        X = 0.5 * random_complex((2, 2, 2), rng)
        Y, G = block_triangular_instance(X, rng)
        assert check_intertwining(F, X, Y, G, gate=False) <= 1e-9


def test_intertwining_left_orientation(rng):
    F = random_polynomial(2, 2, rng)
    X = 0.5 * random_complex((2, 2, 2), rng)
    Y, G = block_triangular_instance(X, rng)
    # transposed instance: G* X* = Y* G*
    Xa, Ya = np.stack([adjoint(x) for x in X]), np.stack([adjoint(y) for y in Y])
    assert check_intertwining(F, Xa, Ya, adjoint(G), orientation="left", gate=False) <= 1e-9


def test_intertwining_unitary_invariance(rng):
    F = random_polynomial(2, 3, rng)
    X = 0.5 * random_complex((2, 2, 2), rng)
    Y, G = block_triangular_instance(X, rng)
    U, V = random_unitary(X.shape[1], rng), random_unitary(Y.shape[1], rng)
    Xc = np.stack([adjoint(U) @ x @ U for x in X])
    Yc = np.stack([adjoint(V) @ y @ V for y in Y])
    r1 = check_intertwining(F, X, Y, G, gate=False)
    r2 = check_intertwining(F, Xc, Yc, adjoint(U) @ G @ V, gate=False)
    assert abs(r1 - r2) <= 1e-12


def test_intertwining_hypothesis_checked(rng):
    X = random_complex((2, 2, 2), rng)
    with pytest.raises(FreespecError):
        check_intertwining(random_polynomial(2, 1, rng), X, 2 * X, np.eye(2), gate=False)


def test_rational_intertwining(rng):
    r = Realization(random_complex((2, 3, 3), rng), random_complex(3, rng), random_complex(3, rng))
    X = random_complex((2, 2, 2), rng)
    Y, G = block_triangular_instance(X, rng)
    from freespec.freesets import lambda_pencil

    t = 0.5 / op_norm(lambda_pencil(r.A, Y))
    assert check_intertwining(r, t * X, t * Y, G) <= 1e-9

"""Seeded verification suites, one per family of structural claims.

Each suite takes a :class:`~freespec.freesets.PencilContext` and a
:class:`RunConfig` and returns a JSON-ready report with a boolean ``passed``.
Reports contain no timings or other run-dependent data, so the same seed and
config always give the same bytes, with or without worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from . import autanalysis as aut
from .ballmin import verify_E_ball_minimal
from .errors import HypothesisError
from .freefun import (
    PowerSeries,
    check_intertwining,
    julia_matrix,
    linearize_at_S,
    linearized_value,
    nilpotent_eval,
    s_tensor,
    series_gate_radius,
    series_of_realization,
    eval_series,
)
from .freesets import (
    DEFAULT_EPS,
    PencilContext,
    Realization,
    Region,
    ball_noninclusion_witnesses,
    boundedness_constant,
    fp_margin,
    fp_membership_quad,
    lambda_pencil,
    make_E,
    make_Ec,
    make_Er,
    make_R,
    not_a_ball_witnesses,
    rational_eval,
    row_matrix,
    spectraball_margin,
)
from .linalg import adjoint, op_norm, random_complex
from .sampling import calibrate_scale, gaussian_tuple, run_trials, trial_rng


@dataclass
class RunConfig:
    eps: float = DEFAULT_EPS
    seed: int = 0
    samples: int = 100
    levels: list = field(default_factory=lambda: [1, 2, 3])
    workers: int = 1

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def to_json(self) -> dict:
        return {"eps": self.eps, "seed": self.seed, "samples": self.samples, "levels": list(self.levels)}


def _balanced(label, margin, g, n, cfg):
    scale = calibrate_scale(margin, g, n, trial_rng(cfg.seed, f"{label}:calibrate:{n}"))

    def draw(i):
        return scale * gaussian_tuple(g, n, trial_rng(cfg.seed, f"{label}:{n}", i))

    return scale, draw


def suite_fp_alt(ctx: PencilContext, cfg: RunConfig) -> dict:
    """The four membership characterizations agree off the margin band."""
    kappa = boundedness_constant(ctx)
    levels = {}
    ok = True
    for n in cfg.levels:
        scale, draw = _balanced("fp-alt", lambda X: fp_margin(ctx, X), 2, n, cfg)

        def trial(i, draw=draw):
            X = draw(i)
            quad = fp_membership_quad(ctx, X, cfg.eps)
            return quad, op_norm(row_matrix(X))

        inside = compared = disagreements = 0
        max_row_inside = 0.0
        for quad, row in run_trials(trial, cfg.samples, cfg.workers):
            regions = {m.region for m in quad.values()}
            if any(abs(m.margin) <= cfg.eps for m in quad.values()):
                continue
            compared += 1
            if len(regions) > 1:
                disagreements += 1
            if quad["L"].inside:
                inside += 1
                max_row_inside = max(max_row_inside, row)
        levels[str(n)] = {
            "scale": scale,
            "compared": compared,
            "inside": inside,
            "disagreements": disagreements,
            "max_row_norm_inside": max_row_inside,
        }
        ok &= disagreements == 0 and max_row_inside <= kappa
    return {"suite": "fp-alt", "boundedness_constant": kappa, "levels": levels, "passed": ok}


def suite_ball_decomp(ctx: PencilContext, cfg: RunConfig, witness_margin: float = 0.01) -> dict:
    """The spectraball of E is the intersection of the row and column balls and equals that of R."""
    R, E, Er, Ec = make_R(ctx), make_E(ctx), make_Er(ctx), make_Ec(ctx)
    levels = {}
    ok = True
    for n in cfg.levels:
        scale, draw = _balanced("ball-decomp", lambda X: spectraball_margin(E, X), 2, n, cfg)

        def trial(i, draw=draw):
            X = draw(i)
            return [spectraball_margin(T, X) for T in (E, Er, Ec, R)]

        decomp_bad = r_bad = compared = 0
        for mE, mr, mc, mR in run_trials(trial, cfg.samples, cfg.workers):
            if min(abs(mE), abs(mr), abs(mc), abs(mR)) <= cfg.eps:
                continue
            compared += 1
            decomp_bad += (mE > 0) != (mr > 0 and mc > 0)
            r_bad += (mE > 0) != (mR > 0)
        levels[str(n)] = {"scale": scale, "compared": compared, "decomp_disagreements": decomp_bad,
                          "R_vs_E_disagreements": r_bad}
        ok &= decomp_bad == 0 and r_bad == 0
    wit = ball_noninclusion_witnesses(ctx, cfg.eps)
    for w in wit.values():
        w["ok"] = w["inside"]["margin"] > witness_margin and w["outside"]["margin"] < -witness_margin
        ok &= w["ok"]
    return {"suite": "ball-decomp", "levels": levels, "witnesses": wit, "passed": bool(ok)}


def suite_not_a_ball(ctx: PencilContext, cfg: RunConfig, closure_margin: float = 0.01) -> dict:
    w = not_a_ball_witnesses(ctx, eps=cfg.eps)
    checks = {
        "boundary_point_L_in_band": w["boundary_point"]["L"]["region"] == Region.BOUNDARY.value,
        "twisted_point_outside_closure": w["twisted_point_L_prime_star_min_eig"] < -closure_margin,
        "scaled_point_inside": w["scaled_point"]["region"] == Region.INSIDE.value,
        "rotated_point_outside": w["rotated_scaled_point"]["region"] == Region.OUTSIDE.value,
        "rotated_boundary_outside_closure": w["rotated_boundary_L_prime_min_eig"] < 0,
    }
    if ctx.s == 1:
        checks["boundary_point_all_four_in_band"] = all(
            m["region"] == Region.BOUNDARY.value for m in w["boundary_point"].values()
        )
    return {"suite": "not-a-ball", "witnesses": w, "checks": checks, "passed": all(checks.values())}


def suite_ball_minimal(ctx: PencilContext, cfg: RunConfig) -> dict:
    try:
        cert = verify_E_ball_minimal(ctx, seed=cfg.seed)
    except HypothesisError as exc:
        return {"suite": "ball-minimal", "error": str(exc), "hypotheses": exc.report, "passed": False}
    return {"suite": "ball-minimal", "certificate": cert, "passed": cert["passed"]}


def suite_julia(ctx: PencilContext, cfg: RunConfig, tol: float = 1e-10) -> dict:
    def trial(i):
        rng = trial_rng(cfg.seed, "julia", i)
        p, q = rng.integers(1, 5, size=2)
        M = random_complex((p, q), rng)
        rho = rng.uniform(0.05, 0.95) / op_norm(M)
        z = np.exp(2j * np.pi * rng.uniform())
        J = julia_matrix(M, rho, z)
        I = np.eye(J.shape[0])
        return max(np.linalg.norm(adjoint(J) @ J - I, 2), np.linalg.norm(J @ adjoint(J) - I, 2))

    errs = run_trials(trial, cfg.samples, cfg.workers)
    passed = sum(e <= tol for e in errs)
    return {"suite": "julia", "checks": len(errs), "unitary": passed, "max_error": max(errs),
            "passed": passed == len(errs)}


def random_polynomial(g, degree, rng) -> PowerSeries:
    words = [w for k in range(degree + 1) for w in product(range(1, g + 1), repeat=k)]
    return PowerSeries(g, {w: random_complex((), rng) for w in words}, degree)


def random_realization(g, e, rng) -> Realization:
    A = random_complex((g, e, e), rng)
    c = random_complex(e, rng)
    b = random_complex(e, rng)
    return Realization(A, c / np.linalg.norm(c), b / np.linalg.norm(b))


def block_triangular_instance(X, rng):
    """``Y_j = [[X_j, 0], [Z_j, D_j]]`` and ``Gamma = [I 0]``, so ``X_j Gamma = Gamma Y_j`` exactly."""
    g, n, _ = X.shape
    m = int(rng.integers(1, 3))
    Z = random_complex((g, m, n), rng)
    D = random_complex((g, m, m), rng)
    Y = np.zeros((g, n + m, n + m), dtype=np.complex128)
    Y[:, :n, :n] = X
    Y[:, n:, :n] = Z
    Y[:, n:, n:] = D
    Gamma = np.hstack([np.eye(n), np.zeros((n, m))])
    return Y, Gamma


def suite_intertwine(ctx: PencilContext, cfg: RunConfig, tol: float = 1e-9) -> dict:
    def poly_trial(i):
        rng = trial_rng(cfg.seed, "intertwine:poly", i)
        F = random_polynomial(2, int(rng.integers(0, 4)), rng)
        n = int(rng.integers(1, 4))
        X = 0.5 * random_complex((2, n, n), rng)
        Y, Gamma = block_triangular_instance(X, rng)
        return check_intertwining(F, X, Y, Gamma, gate=False)

    r = random_realization(2, 3, trial_rng(cfg.seed, "intertwine:realization"))

    def rational_trial(i):
        rng = trial_rng(cfg.seed, "intertwine:rational", i)
        n = int(rng.integers(1, 4))
        X = random_complex((2, n, n), rng)
        Y, Gamma = block_triangular_instance(X, rng)
        t = 0.5 / max(op_norm(lambda_pencil(r.A, Y)), 1e-12)
        return check_intertwining(r, t * X, t * Y, Gamma)

    poly = run_trials(poly_trial, cfg.samples, cfg.workers)
    rat = run_trials(rational_trial, cfg.samples, cfg.workers)
    return {
        "suite": "intertwine",
        "polynomial": {"checks": len(poly), "max_residual": max(poly)},
        "rational": {"checks": len(rat), "max_residual": max(rat)},
        "passed": max(poly) <= tol and max(rat) <= tol,
    }


def suite_nilpotent(ctx: PencilContext, cfg: RunConfig, tol: float = 1e-12, trunc: int = 12) -> dict:
    def lin_trial(i):
        rng = trial_rng(cfg.seed, "nilpotent:lin", i)
        F = random_polynomial(2, int(rng.integers(1, 5)), rng)
        n = int(rng.integers(1, 4))
        X = random_complex((2, n, n), rng)
        lin = linearize_at_S(F)
        return float(np.max(np.abs(nilpotent_eval(F, s_tensor(X)) - linearized_value(lin, X))))

    def series_trial(i):
        rng = trial_rng(cfg.seed, "nilpotent:series", i)
        r = random_realization(2, int(rng.integers(1, 4)), rng)
        F = series_of_realization(r, trunc)
        n = int(rng.integers(1, 4))
        X = random_complex((2, n, n), rng)
        t = 0.99 * min(0.5 / op_norm(lambda_pencil(r.A, X)), series_gate_radius(F) / op_norm(row_matrix(X)))
        X = t * X
        return float(np.linalg.norm(eval_series(F, X) - rational_eval(r, X), 2))

    lin = run_trials(lin_trial, cfg.samples, cfg.workers)
    ser = run_trials(series_trial, cfg.samples, cfg.workers)
    series_tol = 2.0 ** -trunc * 2
    return {
        "suite": "nilpotent",
        "linearization": {"checks": len(lin), "max_error": max(lin), "tol": tol},
        "series_vs_rational": {"checks": len(ser), "max_error": max(ser), "tol": series_tol, "trunc": trunc},
        "passed": max(lin) <= tol and max(ser) <= series_tol,
    }


BAD_PERMUTATION = (1, 3, 5, 7, 2, 4, 8, 6)


def suite_althfp(ctx: PencilContext, cfg: RunConfig, tol: float = 1e-12, control: float = 0.1) -> dict:
    def trial(i):
        rng = trial_rng(cfg.seed, "althfp", i)
        jet = aut.random_jet(ctx, rng)
        n = int(rng.integers(1, 4))
        X = random_complex((2, n, n), rng)
        return aut.verify_althfP(jet, ctx, X), aut.verify_althfP(jet, ctx, X, BAD_PERMUTATION), bool(
            np.max(np.abs(jet.b)) > 0
        )

    res = run_trials(trial, cfg.samples, cfg.workers)
    good = [r[0] for r in res]
    bad = [r[1] for r in res]
    return {
        "suite": "althfp",
        "checks": len(res),
        "jets_with_nonzero_b": sum(r[2] for r in res),
        "max_residual": max(good),
        "min_control_residual": min(bad),
        "passed": max(good) <= tol and min(bad) > control,
    }


def trivial_jets():
    return [
        aut.AutJet.identity(),
        aut.AutJet.diagonal(1j, np.exp(0.7j)),
        aut.AutJet.swap(),
        aut.AutJet.swap(np.exp(0.7j), -1j),
    ]


def suite_jet_necessary(ctx: PencilContext, cfg: RunConfig, pres_tol: float = 1e-12) -> dict:
    R = make_R(ctx)
    identity_B_error = float(np.max(np.abs(aut.build_B(aut.AutJet.identity(), ctx) - R)))
    checks = {"identity_B_equals_R": identity_B_error <= 1e-14}
    trivial = []
    levels = [n for n in cfg.levels if n <= 3] or [1]
    scales = {n: aut.probe_scale(ctx, n, cfg.seed) for n in levels}
    for k, jet in enumerate(trivial_jets()):
        verdict = aut.classify_jet(jet, ctx)["verdict"]
        pres = aut.residual_pres1(jet, ctx)
        probe = aut.ball_agreement_probe(
            jet, ctx, levels=levels, trials=cfg.samples * len(levels), seed=cfg.seed + k,
            eps=cfg.eps, workers=cfg.workers, scales=scales,
        )
        trivial.append({"jet": jet, "verdict": verdict, "pres1": pres, "witness": probe["witness"]})
    checks["trivial_jets_classified_trivial"] = all(t["verdict"] == "trivial" for t in trivial)
    checks["trivial_jets_pres1_zero"] = all(t["pres1"] <= pres_tol for t in trivial)
    checks["trivial_jets_no_witness"] = all(t["witness"] is None for t in trivial)
    nonunitary = aut.classify_jet(aut.AutJet(np.zeros(2), np.diag([0.5, 1.0])), ctx)
    checks["nonunitary_rejected"] = nonunitary.get("violation") == "L_unitary"
    b_jet = aut.classify_jet(aut.AutJet([0.1, 0.1], np.eye(2)), ctx)
    expected = "b1_b2_zero" if ctx.s > 1 else "pres1_residual"
    checks["b1b2_jet_rejected"] = b_jet.get("violation") == expected

    def kernel_trial(i):
        from scipy.linalg import subspace_angles

        from .ballmin import kernel_intersection

        rng = trial_rng(cfg.seed, "jet-kernel", i)
        jet = aut.random_jet(ctx, rng)
        K = kernel_intersection(aut.build_B(jet, ctx), 1e-9)
        if len(K) != ctx.s:
            return len(K), np.inf
        return len(K), float(np.max(subspace_angles(np.column_stack(K), aut.kernel_subspace_expected(jet, ctx))))

    kern = run_trials(kernel_trial, min(cfg.samples, 50), cfg.workers)
    checks["kernel_dimension_s"] = all(k[0] == ctx.s for k in kern)
    checks["kernel_matches_B0_half_H1"] = max(k[1] for k in kern) <= 1e-8
    return {
        "suite": "jet-necessary",
        "identity_B_error": identity_B_error,
        "trivial_jets": trivial,
        "nonunitary_jet": nonunitary,
        "b1b2_jet": b_jet,
        "kernel": {"checks": len(kern), "max_angle": max(k[1] for k in kern)},
        "checks": checks,
        "passed": all(checks.values()),
    }


SUITES = {
    "fp-alt": suite_fp_alt,
    "ball-decomp": suite_ball_decomp,
    "not-a-ball": suite_not_a_ball,
    "ball-minimal": suite_ball_minimal,
    "julia": suite_julia,
    "intertwine": suite_intertwine,
    "nilpotent": suite_nilpotent,
    "althfp": suite_althfp,
    "jet-necessary": suite_jet_necessary,
}


def run_suite(name: str, ctx: PencilContext, cfg: RunConfig) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    report = SUITES[name](ctx, cfg)
    report["config"] = cfg.to_json()
    return report

"""Acceptance suite: one test per criterion, each prints a single PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` to see the report lines.
"""

import math
import time

import numpy as np
import pytest

from ehd_lab.arcs import (
    PI,
    Arc,
    eigenvalue,
    extrapolated_eigenvalue,
    legendre_first_zero,
    matched_homogeneity,
    random_arcs,
    shoot_oracle,
    substitution_terms,
    taylor_cone,
)
from ehd_lab.fields import (
    FreeBoundaryCurve,
    acf_phi,
    cusp_ratio,
    field_from_function,
    first_variation_residual,
    flux_identity_residual,
    jm_relation_residual,
    matched_field,
    monitor,
    random_test_fields,
    rescale_field,
    weiss_m,
)
from ehd_lab.partition import beta_star_connected, beta_star_two_component
from ehd_lab.solver import PRESETS, SolverConfig, inverse_transform, recover_u, solve

SEED = 20240601


@pytest.fixture
def report(capsys):
    def emit(number, title, checks):
        ok = all(passed for passed, _ in checks)
        detail = "; ".join(text for _, text in checks)
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}")
        failed = [text for passed, text in checks if not passed]
        assert ok, "failed: " + "; ".join(failed)

    return emit


def test_criterion_1_taylor_cone(report):
    t0 = time.perf_counter()
    cone = taylor_cone(1e-8)
    elapsed = time.perf_counter() - t0
    legendre_deg = math.degrees(legendre_first_zero(0.5))
    report(
        1,
        "Taylor cone",
        [
            (abs(cone.opening_deg - 98.6) <= 0.2, f"opening {cone.opening_deg:.4f} deg (98.6 +- 0.2)"),
            (elapsed < 5.0, f"runtime {elapsed:.2f} s (< 5)"),
            (
                abs(math.degrees(cone.theta_T) - legendre_deg) <= 0.1,
                f"theta_T {math.degrees(cone.theta_T):.5f} vs Legendre series {legendre_deg:.5f} deg (0.1)",
            ),
        ],
    )


def test_criterion_2_exact_eigenvalues(report):
    gas_q = extrapolated_eigenvalue((0.0, PI / 2), "gas", 2048)
    fluid_h = extrapolated_eigenvalue((0.0, PI), "fluid", 2048)
    gas_h = eigenvalue((0.0, PI), "gas", 2048).lam
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for arc in random_arcs(rng, 20, min_length=0.2):
        for phase in ("gas", "fluid"):
            grid = extrapolated_eigenvalue(arc, phase, 2048)
            worst = max(worst, abs(grid - shoot_oracle(arc, phase, 1e-10)) / max(1.0, abs(grid)))
    report(
        2,
        "exact eigenvalues",
        [
            (abs(gas_q - 2.0) <= 1e-6, f"lambda+(0,pi/2) err {abs(gas_q - 2):.1e}"),
            (abs(fluid_h - 2.0) <= 1e-6, f"lambda-(0,pi) err {abs(fluid_h - 2):.1e}"),
            (abs(gas_h) <= 1e-8, f"lambda+(0,pi) = {gas_h:.1e}"),
            (worst <= 1e-6, f"grid vs shooting on 20 arcs x 2 phases max rel diff {worst:.1e}"),
        ],
    )


def test_criterion_3_inequalities(report):
    rng = np.random.default_rng(SEED + 3)
    gap = min(
        eigenvalue(a, "fluid", 1024).lam - 1.0 - eigenvalue(a, "gas", 1024).lam
        for a in random_arcs(rng, 50)
    )

    violations = 0
    for _ in range(50):
        lo, hi = np.sort(rng.uniform(0.0, PI, 2))
        while hi - lo < 0.3:
            lo, hi = np.sort(rng.uniform(0.0, PI, 2))
        lo = 0.0 if rng.random() < 0.3 else lo
        inner_lo = lo + rng.uniform(0.0, 0.4) * (hi - lo)
        inner_hi = hi - rng.uniform(0.0, 0.4) * (hi - inner_lo)
        if inner_hi - inner_lo < 0.05 or (inner_lo == lo and inner_hi == hi):
            inner_lo += 0.05 * (hi - lo)
        for phase in ("gas", "fluid"):
            outer = eigenvalue(Arc(lo, hi), phase, 1024).lam
            inner = eigenvalue(Arc(inner_lo, inner_hi), phase, 1024).lam
            violations += inner < outer - 1e-8

    sub_err = 0.0
    for _ in range(20):
        lo, hi = np.sort(rng.uniform(0.0, PI, 2))
        while hi - lo < 0.3:
            lo, hi = np.sort(rng.uniform(0.0, PI, 2))
        c = rng.uniform(-1.0, 1.0, 3)

        def f(t, c=c, lo=lo, hi=hi):
            return (t - lo) * (hi - t) * (1.5 + c[0] + c[1] * math.cos(t) + c[2] * math.sin(2 * t))

        def df(t, c=c, lo=lo, hi=hi):
            p = 1.5 + c[0] + c[1] * math.cos(t) + c[2] * math.sin(2 * t)
            dp = -c[1] * math.sin(t) + 2 * c[2] * math.cos(2 * t)
            return (hi + lo - 2 * t) * p + (t - lo) * (hi - t) * dp

        lhs, rhs, _ = substitution_terms(f, df, (lo, hi))
        sub_err = max(sub_err, abs(lhs - rhs) / max(abs(rhs), 1e-300))

    report(
        3,
        "inequality suite",
        [
            (gap >= -1e-8, f"min lambda- - 1 - lambda+ on 50 arcs {gap:.4f}"),
            (violations == 0, f"domain monotonicity violations on 50 nested pairs x 2 phases: {violations}"),
            (sub_err <= 1e-9, f"substitution identity max rel err on 20 f {sub_err:.1e}"),
        ],
    )


def test_criterion_4_beta_star(report):
    t0 = time.perf_counter()
    conn = beta_star_connected(n_scan=256)
    doubled = beta_star_connected(n_scan=512)
    two = beta_star_two_component(connected=conn)
    elapsed = time.perf_counter() - t0
    matched = matched_homogeneity(1e-8)
    bound = 2 * math.sqrt(matched.alpha_star * (matched.alpha_star + 1))
    shift = abs(conn.minimizer[0] - doubled.minimizer[0])
    report(
        4,
        "beta* bound",
        [
            (conn.best_value >= 2 - 1e-6, f"connected {conn.best_value:.10f}"),
            (two.best_value >= 2 - 1e-6, f"two-component {two.best_value:.10f}"),
            (shift <= 1e-3, f"minimizer shift under scan doubling {shift:.1e}"),
            (conn.best_value <= bound + 1e-6, f"matched split bound {bound:.6f}"),
            (elapsed < 60.0, f"runtime {elapsed:.1f} s (< 60)"),
        ],
    )


def test_criterion_5_matched_homogeneity(report):
    grid = matched_homogeneity(1e-8)
    shoot = matched_homogeneity(1e-8, method="shoot")
    report(
        5,
        "matched homogeneity",
        [
            (grid.residual < 1e-8, f"residual {grid.residual:.1e}"),
            (
                abs(grid.alpha_star - shoot.alpha_star) <= 1e-4,
                f"alpha* grid {grid.alpha_star:.8f} vs shooting {shoot.alpha_star:.8f}",
            ),
        ],
    )


def _interior(f, lo=0.2, hi=0.9):
    return f.r[(f.r >= lo - 1e-12) & (f.r <= hi + 1e-12)]


def test_criterion_6_monotonicity_identities(report):
    rng = np.random.default_rng(SEED + 6)
    checks = []
    fields = {
        "u=-x1^2": field_from_function(lambda x1, x2: -(x1**2), 128, 128),
        "u=x2": field_from_function(lambda x1, x2: x2, 128, 128, phase="gas"),
    }
    for name, f in fields.items():
        tol = 10 * f.h**2
        radii = _interior(f)
        m = max(abs(weiss_m(f, r, 1.0)) for r in radii)
        flux = max(flux_identity_residual(f, r) for r in radii)
        fv = max(abs(first_variation_residual(f, t)) for t in random_test_fields(rng, 100, f))
        jm = jm_relation_residual(f, 1.0)
        sel = (jm.radii >= 0.2) & (jm.radii <= 0.9)
        jm_max = float(np.max(np.abs(jm.values[sel])))
        checks += [
            (m <= tol, f"{name} |M| {m:.1e}"),
            (flux <= tol, f"flux {flux:.1e}"),
            (fv <= tol * f.scale, f"first variation x100 {fv:.1e}"),
            (jm_max <= 10 * f.h, f"jm {jm_max:.1e}"),
        ]
    checks.append((True, f"10h^2 = {10 * fields['u=x2'].h ** 2:.1e}"))
    report(6, "monotonicity identities", checks)


def test_criterion_7_phi(report):
    one_phase = [
        field_from_function(lambda x1, x2: -(x1**2), 64, 64),
        field_from_function(lambda x1, x2: x2, 64, 64, phase="gas"),
    ]
    zero = all(np.all(monitor(f, "phi", beta_star=3.8).values == 0.0) for f in one_phase)
    matched = matched_homogeneity(1e-8)
    f = matched_field(128, 256, matched=matched)
    beta_star = beta_star_connected(n_scan=64).best_value
    phi = monitor(f, "phi", beta_star=beta_star)
    drop = float(np.min(np.diff(phi.values)))
    worst, gamma = 0.0, 0.25
    for rm in (0.5, 0.25):
        g = rescale_field(f, rm, gamma)
        lhs = acf_phi(g, 1.0, beta_star)
        rhs = rm ** (2 * (beta_star - 2 * gamma - 1)) * acf_phi(f, rm, beta_star)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    report(
        7,
        "ACF monitor",
        [
            (zero, "one-phase fields give Phi == 0"),
            (drop >= -f.tolerance(), f"matched field min step {drop:.1e} (tol {f.tolerance():.1e})"),
            (worst <= 1e-6, f"rescaling identity max rel err {worst:.1e}"),
        ],
    )


def test_criterion_8_solver(report):
    checks = []
    boxes = {"x1x2": dict(x2_min=0.1, x2_max=1.1), "neg_x1sq": {}}
    for name, box in boxes.items():
        errs = []
        for h in (0.05, 0.025, 0.0125):
            state = solve(SolverConfig(h=h, dirichlet=name, **box))
            x1, x2 = state.mesh
            errs.append(float(np.max(np.abs(state.v - PRESETS[name](x1, x2)))))
        ratios = [errs[k] / errs[k + 1] if errs[k + 1] > 0 else math.inf for k in range(2)]
        checks.append(
            (
                min(ratios) >= 3.5,
                f"{name} errors {', '.join(f'{e:.1e}' for e in errs)} ratios {', '.join(f'{r:.2f}' for r in ratios)}",
            )
        )
    big = solve(SolverConfig(h=0.005, dirichlet="mixed"))
    checks.append(
        (
            big.converged and big.iterations <= 25 and big.residual_norm <= 1e-10,
            f"Newton {big.v.shape[0]}x{big.v.shape[1]} nodes: {big.iterations} iterations, residual {big.residual_norm:.1e}",
        )
    )
    back = inverse_transform(recover_u(big))
    ident = float(np.max(np.abs(back - big.v)))
    checks.append((ident <= 4 * np.finfo(float).eps * np.max(np.abs(big.v)), f"recover/inverse identity {ident:.1e}"))
    report(8, "regularized solver", checks)


def test_criterion_9_cusp(report):
    t = np.linspace(0.0, 1.0, 50)
    worst = 0.0
    for angle in (0.1, 0.5, 0.9, 1.3):
        c = cusp_ratio(FreeBoundaryCurve(np.column_stack((t * math.sin(angle), t * math.cos(angle)))))
        worst = max(worst, float(np.max(np.abs(c.values[1:] - math.tan(angle)))) / max(1.0, math.tan(angle)))
    s = np.geomspace(1e-4, 0.5, 200)
    slope = cusp_ratio(FreeBoundaryCurve(np.column_stack((s**2, s)))).meta["slope"]
    report(
        9,
        "cusp diagnostic",
        [
            (worst <= 1e-12, f"straight rays max dev from tan(theta) {worst:.1e}"),
            (abs(slope - 1.0) <= 0.05, f"parabola log-log slope {slope:.4f}"),
        ],
    )

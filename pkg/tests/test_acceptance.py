"""End-to-end acceptance suite: one test per criterion, one printed verdict
line each.  Run with `pytest tests/test_acceptance.py -v -s` to see the table.

Oracles: analytic eigenvalues and closed forms for the calculus; a dense FD
solve for the Poisson path; high-accuracy scipy integration of the scalar
ODE (cross-checked against its closed form) for the constant scenario; the
bound/energy/certificate formulas evaluated independently of the stepper.
"""

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from chernflow import (
    ScalarField,
    StepperOptions,
    check_bounds,
    construct_case1,
    construct_case2,
    dissipation_identity_check,
    integrate,
    laplacian,
    laplacian_fd,
    make_grid,
    make_scenario,
    random_band_limited,
    run_flow,
    solve_dense_oracle,
    solve_mean_zero,
    stationary_identity_check,
)
from chernflow.cli import run_scenario
from chernflow.problem import ScenarioSpec

TWO_PI_SQ = 4.0 * np.pi ** 2


def report(num, ok, detail):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


# -- shared scenario runs (module scope keeps the expensive ones single) -----

@pytest.fixture(scope="module")
def constant_bundle():
    spec = ScenarioSpec(name="constant", n=2, points=(8, 8, 8, 8))
    bg, u0 = make_scenario(spec)
    opts = StepperOptions(method="explicit-rk4", dt_init=0.025,
                          residual_tol=5e-9, t_max=40.0, record_every=1,
                          keep_fields=True)
    return bg, u0, run_flow(u0, bg, opts)


@pytest.fixture(scope="module")
def case1_bundle():
    spec = ScenarioSpec(name="case1", n=1, points=(16, 16), seed=7)
    bg, u0 = make_scenario(spec)
    opts = StepperOptions(method="imex-lagged", dt_init=0.02,
                          residual_tol=1e-8, t_max=120.0, record_every=5)
    return spec, bg, u0, run_flow(u0, bg, opts)


@pytest.fixture(scope="module")
def case1_rk4_traj(case1_bundle):
    _, bg, u0, _ = case1_bundle
    opts = StepperOptions(method="explicit-rk4", dt_init=1.0,
                          residual_tol=1e-8, t_max=120.0, record_every=200)
    return run_flow(u0, bg, opts)


@pytest.fixture(scope="module")
def rough_bundle():
    spec = ScenarioSpec(name="rough-start", n=1, points=(16, 16), seed=7)
    bg, u0 = make_scenario(spec)
    opts = StepperOptions(method="imex-lagged", dt_init=0.01,
                          residual_tol=1e-8, t_max=120.0, record_every=5)
    return bg, u0, run_flow(u0, bg, opts)


@pytest.fixture(scope="module")
def case2_bundle():
    spec = ScenarioSpec(name="case2", n=1, points=(16, 16), seed=7)
    bg, u0 = make_scenario(spec)
    cert = construct_case2(bg, spec.a_search_points)
    opts = StepperOptions(method="imex-lagged", dt_init=0.02,
                          residual_tol=1e-8, t_max=120.0, record_every=5)
    return bg, u0, cert, run_flow(u0, bg, opts)


@pytest.fixture(scope="module")
def comparison_bundle(case1_bundle):
    _, bg, _, _ = case1_bundle
    cert = construct_case1(bg)
    opts = StepperOptions(method="imex-lagged", dt_init=0.02,
                          residual_tol=1e-8, t_max=120.0, record_every=5,
                          keep_fields=True)
    return bg, cert, run_flow(cert.u_star - 1.0, bg, opts)


# -- criteria ----------------------------------------------------------------

def test_criterion_1_calculus_oracle():
    # spectral Laplacian exact on band-limited data; FD oracle approaches it
    # at O(h^2) across {16, 32, 64} points per axis (n = 1)
    worst_exact = 0.0
    fd_errors = []
    for pts in (16, 32, 64):
        grid = make_grid(1, (pts, pts))
        x1, x2 = grid.coordinates()
        vals = (np.cos(2 * np.pi * x1) * np.cos(2 * np.pi * 2 * x2)
                + 0.5 * np.sin(2 * np.pi * 2 * x1))
        exact = (-(TWO_PI_SQ + TWO_PI_SQ * 4) * np.cos(2 * np.pi * x1)
                 * np.cos(2 * np.pi * 2 * x2)
                 - TWO_PI_SQ * 4 * 0.5 * np.sin(2 * np.pi * 2 * x1))
        u = ScalarField(grid, np.broadcast_to(vals, grid.shape).copy())
        lap = laplacian(u)
        scale = np.abs(exact).max()
        worst_exact = max(worst_exact,
                          np.abs(lap.values - exact).max() / scale)
        fd_errors.append(np.abs(laplacian_fd(u).values - lap.values).max())
    ratios = [c / f for c, f in zip(fd_errors, fd_errors[1:])]
    ok = worst_exact <= 1e-12 and all(3.0 <= r <= 5.5 for r in ratios)
    report(1, ok, f"spectral rel err {worst_exact:.2e}, "
                  f"FD h^2 ratios {[f'{r:.2f}' for r in ratios]}")


def test_criterion_2_poisson_round_trip():
    grid = make_grid(1, (16, 16))
    worst = 0.0
    for seed in range(10):
        g = random_band_limited(grid, seed)
        g = g - integrate(g)
        v = solve_mean_zero(g)
        worst = max(worst, np.abs(laplacian(v).values - g.values).max())
    dense_errors = []
    for pts in (16, 32):
        gg = make_grid(1, (pts, pts))
        g = random_band_limited(gg, 40, max_modes=2)
        g = g - integrate(g)
        gap = solve_dense_oracle(g).values - solve_mean_zero(g).values
        dense_errors.append(np.abs(gap).max())
    ratio = dense_errors[0] / dense_errors[1]
    ok = worst <= 1e-10 and 3.0 <= ratio <= 5.5
    report(2, ok, f"round trip {worst:.2e}, dense-oracle h^2 ratio {ratio:.2f}")


def test_criterion_3_analytic_fixed_point(constant_bundle):
    bg, u0, traj = constant_bundle
    # independent oracle: high-accuracy integration of du/dt = e^{-u} - 1
    sol = solve_ivp(lambda t, y: np.exp(-y) - 1.0, (0.0, traj.final_state.t),
                    [0.5], method="DOP853", rtol=1e-12, atol=1e-14,
                    dense_output=True)
    closed = lambda t: np.log(1.0 + (np.exp(0.5) - 1.0) * np.exp(-t))
    oracle_gap = max(abs(sol.sol(t)[0] - closed(t))
                     for t in np.linspace(0, traj.final_state.t, 50))
    worst = max(np.abs(r.u.values - sol.sol(r.t)[0]).max()
                for r in traj.records)
    ok = (traj.termination == "converged"
          and traj.final_state.u.sup_norm <= 1e-8
          and worst <= 1e-6
          and oracle_gap <= 1e-9)
    report(3, ok, f"converged at t={traj.final_state.t:.2f}, "
                  f"|u_final|={traj.final_state.u.sup_norm:.2e}, "
                  f"ODE-trajectory gap {worst:.2e}")


def test_criterion_4_energy_monotone_and_dissipation(
        constant_bundle, case1_bundle, case1_rk4_traj, rough_bundle,
        case2_bundle, comparison_bundle):
    trajs = {
        "constant": constant_bundle[2],
        "case1-imex": case1_bundle[3],
        "case1-rk4": case1_rk4_traj,
        "rough": rough_bundle[2],
        "case2": case2_bundle[3],
        "comparison": comparison_bundle[2],
    }
    worst_rise = -np.inf
    for name, traj in trajs.items():
        e = traj.energies
        rise = (np.diff(e) - 1e-10 * (1.0 + np.abs(e[:-1]))).max()
        worst_rise = max(worst_rise, rise)
    # dissipation-identity mismatch at record spacing 1e-3
    spec = ScenarioSpec(name="constant", n=2, points=(8, 8, 8, 8))
    bg_c, u0_c = make_scenario(spec)
    seg_c = run_flow(u0_c, bg_c, StepperOptions(
        method="explicit-rk4", dt_init=1e-3, residual_tol=1e-12,
        t_max=0.5, record_every=1))
    # for the nonconstant scenario, start once the stiff initial layer has
    # decayed (fast modes amplify E''' beyond any fixed-spacing budget)
    _, bg_1, u0_1, _ = case1_bundle
    warm = run_flow(u0_1, bg_1, StepperOptions(
        method="explicit-rk4", dt_init=0.02, residual_tol=1e-12,
        t_max=1.0, record_every=10 ** 6))
    seg_1 = run_flow(warm.final_state.u, bg_1, StepperOptions(
        method="explicit-rk4", dt_init=2.5e-4, residual_tol=1e-12,
        t_max=0.6, record_every=4))
    mm_c = dissipation_identity_check(seg_c, bg_c)
    mm_1 = dissipation_identity_check(seg_1, bg_1)
    rates = max(r.dissipation for t in trajs.values() for r in t.records)
    ok = (worst_rise <= 0.0 and mm_c <= 1e-4 and mm_1 <= 1e-4
          and rates <= 1e-12)
    report(4, ok, f"worst energy rise {worst_rise:.2e}, mismatch "
                  f"constant {mm_c:.2e} / case1 {mm_1:.2e}, "
                  f"max rate {rates:.2e}")


def test_criterion_5_apriori_bounds(constant_bundle, case1_bundle,
                                    rough_bundle):
    worst = np.inf
    details = []
    for name, (bg, u0, traj) in {
        "constant": (constant_bundle[0], constant_bundle[1], constant_bundle[2]),
        "case1": (case1_bundle[1], case1_bundle[2], case1_bundle[3]),
        "rough-start": (rough_bundle[0], rough_bundle[1], rough_bundle[2]),
    }.items():
        rep = check_bounds(traj, bg, u0)
        worst = min(worst, rep.worst_lower, rep.worst_upper)
        details.append(f"{name} {min(rep.worst_lower, rep.worst_upper):+.2e}")
    ok = worst >= -1e-8
    report(5, ok, "worst slack per scenario: " + ", ".join(details))


def test_criterion_6_comparison_principle(comparison_bundle):
    bg, cert, traj = comparison_bundle
    worst = max(float((r.u.values - cert.u_star.values).max())
                for r in traj.records)
    ok = worst <= 1e-8 and traj.termination == "converged"
    report(6, ok, f"max crossing above u* is {worst:+.2e} "
                  f"over {len(traj.records)} records")


def test_criterion_7_case1_end_to_end(case1_bundle):
    _, bg, u0, traj = case1_bundle
    residual = traj.final_residual_sup
    gap = stationary_identity_check(traj.final_state.u, bg)
    ok = (traj.termination == "converged" and residual <= 1e-6
          and gap <= 1e-6)
    report(7, ok, f"converged at t={traj.final_state.t:.2f}, "
                  f"residual {residual:.2e}, curvature-integral gap {gap:.2e}")


def test_criterion_8_case2_end_to_end(case2_bundle):
    bg, u0, cert, traj = case2_bundle
    lam = bg.f.max_value
    u_star_gap = float((u0.values - cert.u_star.values).max())
    ok = (cert.slack_min >= -1e-10
          and abs(lam - 0.5 * cert.lambda_max) <= 1e-12
          and u_star_gap <= 0.0
          and traj.termination == "converged"
          and traj.final_residual_sup <= 1e-6)
    report(8, ok, f"lambda={lam:.3e} (=lambda_max/2), "
                  f"slack_min {cert.slack_min:+.2e}, "
                  f"residual {traj.final_residual_sup:.2e}")


def test_criterion_9_stepper_cross_validation(constant_bundle, case1_bundle,
                                              case1_rk4_traj):
    # limits agree on both scenarios
    bg_c, u0_c, traj_c = constant_bundle
    imex_c = run_flow(u0_c, bg_c, StepperOptions(
        method="imex-lagged", dt_init=0.02, residual_tol=5e-9,
        t_max=40.0, record_every=50))
    diff_const = np.abs(traj_c.final_state.u.values
                        - imex_c.final_state.u.values).max()
    _, bg_1, _, traj_1 = case1_bundle
    diff_case1 = np.abs(case1_rk4_traj.final_state.u.values
                        - traj_1.final_state.u.values).max()
    # measured orders on the constant scenario against the closed form
    spec = ScenarioSpec(name="constant", n=2, points=(8, 8, 8, 8))
    bg, u0 = make_scenario(spec)

    def final_error(method, dt):
        o = StepperOptions(method=method, dt_init=dt, residual_tol=1e-13,
                           t_max=1.0, record_every=10 ** 6)
        tr = run_flow(u0, bg, o)
        exact = np.log(1.0 + (np.exp(0.5) - 1.0) * np.exp(-tr.final_state.t))
        return np.abs(tr.final_state.u.values - exact).max()

    dts = np.array([0.2, 0.1, 0.05])
    slopes = {}
    for method in ("explicit-rk4", "imex-lagged"):
        errs = np.array([final_error(method, dt) for dt in dts])
        slopes[method] = np.polyfit(np.log(dts), np.log(errs), 1)[0]
    ok = (diff_const <= 1e-6 and diff_case1 <= 1e-6
          and 2.0 <= slopes["explicit-rk4"] <= 8.0
          and 0.5 <= slopes["imex-lagged"] <= 2.0)
    report(9, ok, f"limit gaps: constant {diff_const:.2e}, "
                  f"case1 {diff_case1:.2e}; measured orders "
                  f"rk4 {slopes['explicit-rk4']:.2f}, "
                  f"imex {slopes['imex-lagged']:.2f}")


def test_criterion_10_determinism(tmp_path):
    cfg = {"background": {"preset": "case1", "seed": 7}}
    code_a, _ = run_scenario(cfg, tmp_path / "a", canonical=True)
    code_b, _ = run_scenario(cfg, tmp_path / "b", canonical=True)
    bytes_a = (tmp_path / "a" / "case1_summary.json").read_bytes()
    bytes_b = (tmp_path / "b" / "case1_summary.json").read_bytes()
    ok = code_a == code_b == 0 and bytes_a == bytes_b
    report(10, ok, f"two canonical reruns: exit {code_a}/{code_b}, "
                   f"summaries {'identical' if bytes_a == bytes_b else 'DIFFER'} "
                   f"({len(bytes_a)} bytes)")

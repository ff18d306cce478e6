"""Built-in verification suites behind `chernflow verify`.

`quick` exercises the calculus oracles and algebraic identities; `full` adds
the flow-convergence checks.  Each check raises AssertionError on failure and
returns a one-line detail string otherwise.
"""

import numpy as np

from . import analysis, flow, poisson, problem, supersolution, torus


def _unit_grid_2d(points=32):
    return torus.make_grid(1, (points, points))


def _cos_x1(grid, k=1):
    x = grid.coordinates()[0]
    return torus.ScalarField(
        grid, np.broadcast_to(np.cos(2 * np.pi * k * x / grid.periods[0]),
                              grid.shape).copy())


def check_laplacian_single_mode():
    grid = _unit_grid_2d()
    u = _cos_x1(grid)
    lap = torus.laplacian(u)
    err = np.abs(lap.values + 4 * np.pi ** 2 * u.values).max() / (4 * np.pi ** 2)
    assert err <= 1e-12, f"single-mode Laplacian rel err {err:.3e}"
    return f"rel err {err:.1e}"

def check_fd_convergence():
    errs = []
    for pts in (16, 32):
        grid = _unit_grid_2d(pts)
        u = _cos_x1(grid, k=2)
        diff = torus.laplacian(u).values - torus.laplacian_fd(u).values
        errs.append(np.abs(diff).max())
    ratio = errs[0] / errs[1]
    assert 3.0 <= ratio <= 5.5, f"FD refinement ratio {ratio:.2f}, expected ~4"
    return f"h^2 ratio {ratio:.2f}"

def check_calculus_identities():
    grid = _unit_grid_2d(16)
    rng = np.random.default_rng(3)
    u = torus.random_band_limited(grid, rng)
    v = torus.random_band_limited(grid, rng)
    div = abs(torus.integrate(torus.laplacian(u)))
    assert div <= 1e-12 * (1 + u.sup_norm), f"divergence {div:.3e}"
    sym = abs(torus.integrate(u * torus.laplacian(v))
              - torus.integrate(v * torus.laplacian(u)))
    assert sym <= 1e-10 * u.sup_norm * v.sup_norm, f"self-adjointness {sym:.3e}"
    neg = torus.integrate(u * torus.laplacian(u))
    assert neg <= 1e-12, f"negative semidefiniteness {neg:.3e}"
    parts = abs(torus.integrate(torus.grad_norm_sq(u)) + neg) / abs(neg)
    assert parts <= 1e-10, f"integration by parts rel err {parts:.3e}"
    return "divergence, symmetry, sign, by-parts all hold"

def check_poisson_round_trip():
    grid = _unit_grid_2d(16)
    rng = np.random.default_rng(11)
    g = torus.random_band_limited(grid, rng)
    v = poisson.solve_mean_zero(g)
    err = np.abs(torus.laplacian(v).values - g.values).max()
    assert err <= 1e-10, f"round trip {err:.3e}"
    vp = poisson.solve_positive(g)
    assert vp.min_value == 1.0, f"positive solve min {vp.min_value!r}"
    return f"residual {err:.1e}, min(v2)=1"

def check_dense_oracle():
    grid = _unit_grid_2d(16)
    g = _cos_x1(grid)
    dense = poisson.solve_dense_oracle(g)
    exact = -g.values / (4 * np.pi ** 2)
    rel = np.abs(dense.values - exact).max() / np.abs(exact).max()
    assert rel <= 5e-2, f"dense oracle rel err {rel:.3e}"
    return f"rel err {rel:.1e}"

def check_residual_identities():
    grid = torus.make_grid(2, (8, 8, 8, 8))
    bg = problem.build_background(
        torus.ScalarField.constant(grid, -1.0),
        torus.ScalarField.constant(grid, -4.0))
    root = torus.ScalarField.constant(grid, -np.log(4.0))
    res = problem.residual(root, bg)
    assert res.sup_norm <= 1e-12, f"constant root residual {res.sup_norm:.3e}"
    rng = np.random.default_rng(5)
    u = torus.random_band_limited(grid, rng, max_modes=1)
    w = torus.exp_field(u, 2.0 / bg.n)
    lhs = (problem.chern_scalar_curvature(u, bg) - bg.f) * w
    gap = np.abs(lhs.values - problem.residual(u, bg).values).max()
    assert gap <= 1e-12, f"curvature/residual identity {gap:.3e}"
    return "constant root and pointwise identity hold"

def check_energy_first_variation():
    grid = _unit_grid_2d(16)
    rng = np.random.default_rng(9)
    bg = problem.build_background(
        torus.random_band_limited(grid, rng, amplitude=0.4, mean=-1.0),
        torus.random_band_limited(grid, rng, amplitude=0.5, mean=-1.0))
    u = torus.random_band_limited(grid, rng, amplitude=0.5)
    phi = torus.random_band_limited(grid, rng, amplitude=1.0)
    eps = 1e-5
    fd = (analysis.energy(u + eps * phi, bg)
          - analysis.energy(u - eps * phi, bg)) / (2 * eps)
    exact = torus.integrate(problem.residual(u, bg) * phi)
    rel = abs(fd - exact) / (1 + abs(exact))
    assert rel <= 1e-6, f"first variation rel err {rel:.3e}"
    return f"rel err {rel:.1e}"

def check_case1_constant_algebra():
    grid = torus.make_grid(2, (8, 8, 8, 8))
    bg = problem.build_background(
        torus.ScalarField.constant(grid, -1.0),
        torus.ScalarField.constant(grid, -1.0))
    cert = supersolution.construct_case1(bg)
    assert cert.slack_min >= -1e-10, f"slack {cert.slack_min:.3e}"
    # constant data: slack reduces to a e^{margin} - 1 with a = 1 + margin
    expect = (1 + supersolution.MARGIN) * np.exp(supersolution.MARGIN) - 1
    assert abs(cert.slack_min - expect) <= 1e-12, "constant-data slack formula"
    return f"slack {cert.slack_min:.2e} matches hand value"

def check_constant_flow():
    spec = problem.ScenarioSpec(name="constant", n=1, points=(8, 8))
    bg, u0 = problem.make_scenario(spec)
    opts = flow.StepperOptions(method="explicit-rk4", dt_init=0.05,
                               residual_tol=5e-9, t_max=40.0, record_every=10)
    traj = flow.run_flow(u0, bg, opts)
    assert traj.termination == "converged", traj.termination
    final = traj.final_state.u.sup_norm
    assert final <= 1e-8, f"|u_final| = {final:.3e}"
    # reference: dy/dt = f y - S0 for y = e^{2u/n} has the closed form below
    t = traj.final_state.t
    y = 1.0 + (np.exp(2 * 0.5) - 1.0) * np.exp(-t)
    err = abs(0.5 * np.log(y) - traj.final_state.u.values.flat[0])
    assert err <= 1e-6, f"ODE reference gap {err:.3e}"
    return f"converged at t={t:.2f}, |u|={final:.1e}"

def check_case1_flow():
    spec = problem.ScenarioSpec(name="case1", n=1, points=(8, 8), seed=7)
    bg, u0 = problem.make_scenario(spec)
    opts = flow.StepperOptions(method="imex-lagged", dt_init=0.02,
                               residual_tol=1e-8, t_max=120.0, record_every=20)
    traj = flow.run_flow(u0, bg, opts)
    assert traj.termination == "converged", traj.termination
    res = traj.final_residual_sup
    gap = analysis.stationary_identity_check(traj.final_state.u, bg)
    report = analysis.check_bounds(traj, bg, u0)
    assert res <= 1e-6, f"residual {res:.3e}"
    assert gap <= 1e-6, f"identity gap {gap:.3e}"
    assert report.all_hold, "a-priori bounds violated"
    mono = np.diff(traj.energies) <= 1e-10 * (1 + np.abs(traj.energies[:-1]))
    assert mono.all(), "energy increased"
    return f"residual {res:.1e}, gap {gap:.1e}, bounds+energy hold"

def check_comparison_principle():
    spec = problem.ScenarioSpec(name="case1", n=1, points=(8, 8), seed=7)
    bg, _ = problem.make_scenario(spec)
    cert = supersolution.construct_case1(bg)
    opts = flow.StepperOptions(method="imex-lagged", dt_init=0.02,
                               residual_tol=1e-8, t_max=80.0,
                               record_every=10, keep_fields=True)
    traj = flow.run_flow(cert.u_star - 1.0, bg, opts)
    worst = max(float((r.u.values - cert.u_star.values).max())
                for r in traj.records)
    assert worst <= 1e-8, f"flow crossed the super-solution by {worst:.3e}"
    return f"max crossing {worst:.1e}"

def check_case2_certificate():
    spec = problem.ScenarioSpec(name="case2", n=1, points=(8, 8), seed=7)
    bg, u0 = problem.make_scenario(spec)
    cert = supersolution.construct_case2(bg)
    assert cert.valid, f"slack {cert.slack_min:.3e}"
    assert cert.lambda_max > 0
    opts = flow.StepperOptions(method="imex-lagged", dt_init=0.02,
                               residual_tol=1e-8, t_max=120.0, record_every=20)
    traj = flow.run_flow(u0, bg, opts)
    assert traj.termination == "converged", traj.termination
    assert traj.final_residual_sup <= 1e-6
    return (f"lambda_max {cert.lambda_max:.3e}, "
            f"residual {traj.final_residual_sup:.1e}")


QUICK_CHECKS = [
    ("laplacian single mode", check_laplacian_single_mode),
    ("spectral vs FD refinement", check_fd_convergence),
    ("calculus identities", check_calculus_identities),
    ("poisson round trip", check_poisson_round_trip),
    ("poisson dense oracle", check_dense_oracle),
    ("residual identities", check_residual_identities),
    ("energy first variation", check_energy_first_variation),
    ("case1 constant-data certificate", check_case1_constant_algebra),
]

FULL_CHECKS = QUICK_CHECKS + [
    ("constant-scenario flow", check_constant_flow),
    ("case1 flow end to end", check_case1_flow),
    ("comparison principle", check_comparison_principle),
    ("case2 certificate and flow", check_case2_certificate),
]


def run_level(level):
    """Run a suite, print a pass/fail table, return the number of failures."""
    checks = QUICK_CHECKS if level == "quick" else FULL_CHECKS
    width = max(len(name) for name, _ in checks)
    failures = 0
    for name, fn in checks:
        try:
            detail = fn()
            print(f"PASS  {name:<{width}}  {detail}")
        except AssertionError as exc:
            failures += 1
            print(f"FAIL  {name:<{width}}  {exc}")
    print(f"{len(checks) - failures}/{len(checks)} checks passed")
    return failures

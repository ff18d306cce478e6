"""Sign-changing candidate curvature f = f0 + lambda: the admissible shift is
bounded by a searchable closed form, and for lambda below it the flow still
produces a metric with curvature f.  On complex dimension 1 an integral
predicate screens more general sign-changing candidates.
"""

import numpy as np

from chernflow import (
    StepperOptions,
    case3_predicate,
    construct_case2,
    make_scenario,
    run_flow,
    split_sign_changing,
)
from chernflow.problem import ScenarioSpec
from chernflow.supersolution import case2_lambda_max, case2_search

spec = ScenarioSpec(name="case2", n=1, points=(16, 16), seed=7)
bg, u0 = make_scenario(spec)

f0, lam = split_sign_changing(bg.f)
print(f"f = f0 + lambda with max f0 = {f0.max_value}, lambda = {lam:.6f}")
print(f"f changes sign: [{bg.f.min_value:.3f}, {bg.f.max_value:.3f}]")

cert = construct_case2(bg)
print(f"\nsearched certificate: a = {cert.a:.4f}, b = {cert.b:.4f}, "
      f"lambda_max = {cert.lambda_max:.6f}")
print(f"slack min = {cert.slack_min:+.3e} (lambda here is lambda_max/2)")

print("\nlambda_max along the a-grid (the search picks the peak):")
found = case2_search(bg.n, bg.gamma, bg.v0, f0, 48)
from chernflow import integrate
f0_mean = integrate(f0)
for a in np.geomspace(bg.gamma / f0_mean * 1.2, bg.gamma / f0_mean * 90, 8):
    val, _ = case2_lambda_max(a, bg.n, bg.gamma, f0_mean, found.c0_min,
                              found.c0_max, found.c2_min, found.c2_max)
    print(f"  a = {a:8.3f}:  lambda_max(a) = {val:.6f}")

opts = StepperOptions(method="imex-lagged", dt_init=0.02, residual_tol=1e-8,
                      t_max=120.0, record_every=20)
traj = run_flow(u0, bg, opts)
print(f"\nflow from u* - 1: {traj.termination} at t = {traj.final_state.t:.2f}, "
      f"final residual {traj.final_residual_sup:.2e}")

lhs, rhs, holds = case3_predicate(bg, euler_char=0, C_M=1.0)
print(f"\nintegral predicate (chi = 0, C_M = 1): lhs = {lhs:.4e}, "
      f"rhs = {rhs:.4e}, holds = {holds}")
print("(the exponent (pi - 2 pi chi + 1)/(pi - 1) is implemented verbatim;"
      "\n C_M is an input so its sensitivity can be explored)")

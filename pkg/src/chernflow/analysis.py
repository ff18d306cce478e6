"""Energy functional, dissipation identity, and a-priori bound checkers.

The checkers consume recorded trajectories and compare them against the
closed-form bounds; they never re-run the stepper, so a stepper bug cannot
certify itself.
"""

from dataclasses import dataclass

import numpy as np

from .errors import TooFewRecords, ZeroF
from .torus import ScalarField, grad_norm_sq, integrate, laplacian


def energy(u, bg):
    """E(u) = 1/2 int |grad u|^2 + int S0 u - (n/2) int f e^{2u/n}."""
    n = bg.n
    grad_term = 0.5 * integrate(grad_norm_sq(u))
    linear_term = integrate(bg.S0 * u)
    w = np.exp(2.0 * u.values / n)
    weight_term = 0.5 * n * integrate(ScalarField(bg.grid, bg.f.values * w))
    return grad_term + linear_term - weight_term


def lower_bound_constant(bg, u0):
    """Time-uniform floor for the flow started at u0 (returns the bound -C0)."""
    if bg.f_sup == 0.0:
        raise ZeroF("lower bound undefined: sup-norm of f vanishes")
    n = bg.n
    v0 = bg.v0.values
    branch1 = float((u0.values - v0).min())
    branch2 = 0.5 * n * np.log(
        -bg.gamma / (bg.f_sup * np.exp((2.0 / n) * v0.max())))
    return min(branch1, float(branch2)) + float(v0.min())


def upper_bound_value(bg, u0, t):
    """Affine-in-time ceiling max{0, max u0} + C1 t + osc(v0) at flow time t."""
    c1 = growth_constant(bg)
    v0 = bg.v0.values
    return max(0.0, u0.max_value) + c1 * t + float(v0.max() - v0.min())


def growth_constant(bg):
    """C1 = (n/2)(sup|f| - mean S0), the linear growth rate of the ceiling."""
    return 0.5 * bg.n * (bg.f_sup - bg.gamma)


@dataclass(frozen=True)
class BoundReport:
    """Per-record slack of the lower/upper bounds along a trajectory."""

    lower_bound: float
    C0: float
    C1: float
    times: np.ndarray
    lower_slacks: np.ndarray
    upper_slacks: np.ndarray
    worst_lower: float
    worst_upper: float

    @property
    def all_hold(self):
        return bool(self.worst_lower >= -1e-8 and self.worst_upper >= -1e-8)


def check_bounds(trajectory, bg, u0):
    """Evaluate both bound formulas at every record of a trajectory."""
    lb = lower_bound_constant(bg, u0)
    c1 = growth_constant(bg)
    times = np.array([r.t for r in trajectory.records])
    lower = np.array([r.u_min - lb for r in trajectory.records])
    upper = np.array([
        upper_bound_value(bg, u0, r.t) - r.u_max for r in trajectory.records])
    return BoundReport(
        lower_bound=lb,
        C0=-lb,
        C1=c1,
        times=times,
        lower_slacks=lower,
        upper_slacks=upper,
        worst_lower=float(lower.min()),
        worst_upper=float(upper.min()),
    )


def _time_derivative(tm, t0, tp, em, e0, ep):
    """Second-order three-point derivative at t0 (handles nonuniform spacing)."""
    hm = t0 - tm
    hp = tp - t0
    return (hm * hm * ep + (hp * hp - hm * hm) * e0 - hp * hp * em) / (
        hm * hp * (hm + hp))


def dissipation_rate(u, dudt, bg):
    """-(2/n) int |du/dt|^2 e^{2u/n}, the exact energy decay rate at a state."""
    n = bg.n
    w = np.exp(2.0 * u.values / n)
    return -(2.0 / n) * integrate(ScalarField(bg.grid, dudt.values ** 2 * w))


def _record_rate(record, bg):
    if record.u is not None:
        # recompute du/dt from the stored field: decouples the check from
        # whatever the stepper recorded
        n = bg.n
        lap = laplacian(record.u)
        w = np.exp(2.0 * record.u.values / n)
        dudt = 0.5 * n * (lap.values - bg.S0.values + bg.f.values * w) / w
        return dissipation_rate(record.u, ScalarField(bg.grid, dudt), bg)
    return record.dissipation


def dissipation_identity_check(trajectory, bg):
    """Worst relative mismatch between dE/dt and the dissipation integral.

    Uses centered differences of the recorded energies against the analytic
    rate at each interior record; returns the max of
    |dE/dt - rate| / (1 + |dE/dt|).
    """
    recs = trajectory.records
    if len(recs) < 3:
        raise TooFewRecords(f"need at least 3 records, have {len(recs)}")
    worst = 0.0
    for k in range(1, len(recs) - 1):
        dedt = _time_derivative(
            recs[k - 1].t, recs[k].t, recs[k + 1].t,
            recs[k - 1].energy, recs[k].energy, recs[k + 1].energy)
        rate = _record_rate(recs[k], bg)
        worst = max(worst, abs(dedt - rate) / (1.0 + abs(dedt)))
    return worst


def stationary_identity_check(u, bg):
    """|int f e^{2u/n} - gamma|: vanishes exactly at stationary states."""
    n = bg.n
    w = np.exp(2.0 * u.values / n)
    return abs(integrate(ScalarField(bg.grid, bg.f.values * w)) - bg.gamma)

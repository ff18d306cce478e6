"""Time integration of the conformal curvature flow.

The flow evolves w = e^{2u/n} by dw/dt = laplacian(u) - S0 + f w, which in
the u variable reads

    du/dt = (n/2) e^{-2u/n} (laplacian(u) - S0 + f e^{2u/n}).

Integration happens in u: the a-priori bounds keep u bounded, so e^{-2u/n}
stays well conditioned, whereas stepping w directly risks losing positivity.
Two steppers are provided: classical RK4, and a lagged-coefficient
semi-implicit Euler scheme whose implicit solve is diagonal in Fourier space.
"""

from dataclasses import dataclass

import numpy as np

from . import analysis
from .errors import StepFailure, StepUnstable
from .torus import ScalarField, laplacian_values, _spectral_ops, _rfft, _irfft

#: extent of the RK4 stability interval on the negative real axis
_RK4_REAL_AXIS = 2.785

_METHODS = ("explicit-rk4", "imex-lagged")


@dataclass(frozen=True)
class StepperOptions:
    method: str = "imex-lagged"
    dt_init: float = 0.01
    dt_safety: float = 0.8
    residual_tol: float = 1e-8
    t_max: float = 50.0
    record_every: int = 10
    keep_fields: bool = False

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown stepper method {self.method!r}")
        if self.dt_init <= 0 or self.dt_safety <= 0 or self.t_max < 0:
            raise ValueError("stepper parameters must be positive")
        if not 0 < self.residual_tol < 1:
            raise ValueError("residual_tol must lie in (0, 1)")
        if self.record_every < 1:
            raise ValueError("record_every must be a positive integer")


@dataclass(frozen=True)
class FlowState:
    """Snapshot of the flow: u at time t plus the caches w and dw/dt."""

    u: ScalarField
    t: float
    w: ScalarField
    rhs: ScalarField  # laplacian(u) - S0 + f w, i.e. dw/dt

    @classmethod
    def create(cls, u, bg, t=0.0):
        n = bg.n
        w = np.exp((2.0 / n) * u.values)
        lap = laplacian_values(u.values, bg.grid)
        rhs = lap - bg.S0.values + bg.f.values * w
        return cls(u=u, t=float(t),
                   w=ScalarField(bg.grid, w),
                   rhs=ScalarField(bg.grid, rhs))


def rhs_u(state, bg):
    """du/dt at a state: (n/2) e^{-2u/n} (lap u - S0 + f e^{2u/n})."""
    n = bg.n
    return ScalarField(bg.grid, 0.5 * n * state.rhs.values / state.w.values)


def _dudt_values(u, bg):
    n = bg.n
    w = np.exp((2.0 / n) * u)
    lap = laplacian_values(u, bg.grid)
    return 0.5 * n * (lap - bg.S0.values + bg.f.values * w) / w


def explicit_stability_limit(state, bg, safety=1.0):
    """Diffusion CFL dt <= safety * h^2 / (2n * c) with c = (n/2) e^{-2 min u / n}.

    h is the smallest grid spacing and c the peak effective diffusivity.
    This is the coarse parabolic bound; see `spectral_stability_limit` for
    the sharper limit the Fourier Laplacian actually imposes on RK4.
    """
    n = bg.n
    h = min(bg.grid.spacings)
    c = 0.5 * n * np.exp(-(2.0 / n) * state.u.values.min())
    return safety * h * h / (2.0 * n * c)


def spectral_stability_limit(state, bg, safety=1.0):
    """RK4 limit for the full Fourier symbol: dt <= 2.785 / (c sum_a (pi/h_a)^2)."""
    n = bg.n
    c = 0.5 * n * np.exp(-(2.0 / n) * state.u.values.min())
    lam_max = c * sum((np.pi / h) ** 2 for h in bg.grid.spacings)
    return safety * _RK4_REAL_AXIS / lam_max


def _rk4_raw(u, k1, bg, dt):
    k2 = _dudt_values(u + 0.5 * dt * k1, bg)
    k3 = _dudt_values(u + 0.5 * dt * k2, bg)
    k4 = _dudt_values(u + dt * k3, bg)
    out = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    if not np.all(np.isfinite(out)):
        raise StepUnstable(f"explicit step produced non-finite values at dt={dt}")
    return out


def _imex_raw(u, dudt, bg, dt):
    n = bg.n
    grid = bg.grid
    c = 0.5 * n * np.exp(-(2.0 / n) * u.min())
    w = np.exp((2.0 / n) * u)
    lap_u = (2.0 / n) * w * dudt + bg.S0.values - bg.f.values * w
    explicit = dudt - c * lap_u
    _, lam, _, _ = _spectral_ops(grid)
    rh = _rfft(u + dt * explicit, grid)
    out = _irfft(rh / (1.0 - dt * c * lam), grid)
    if not np.all(np.isfinite(out)):
        raise StepUnstable(f"imex step produced non-finite values at dt={dt}")
    return out


def step_explicit(state, bg, dt):
    """One classical RK4 step in the u variable.

    Callers must respect the stability limits above; a step that produces
    non-finite values raises StepUnstable.
    """
    u = state.u.values
    k1 = 0.5 * bg.n * state.rhs.values / state.w.values
    out = _rk4_raw(u, k1, bg, dt)
    return FlowState.create(ScalarField(bg.grid, out), bg, state.t + dt)


def step_imex(state, bg, dt):
    """Lagged-coefficient semi-implicit Euler step.

    Solves (I - dt c lap) u+ = u + dt (du/dt - c lap u) spectrally with the
    frozen scalar c = (n/2) e^{-2 min u / n}; freezing at the peak
    diffusivity keeps the explicit remainder (c(x) - c) lap u damped, so the
    scheme is unconditionally stable and first-order accurate.
    """
    u = state.u.values
    dudt = 0.5 * bg.n * state.rhs.values / state.w.values
    out = _imex_raw(u, dudt, bg, dt)
    return FlowState.create(ScalarField(bg.grid, out), bg, state.t + dt)


@dataclass
class TrajectoryRecord:
    t: float
    energy: float
    u_min: float
    u_max: float
    dudt_sup: float
    residual_sup: float
    dissipation: float
    dt: float
    dissipation_mismatch: float = float("nan")
    u: ScalarField = None


@dataclass
class FlowTrajectory:
    """Time-stamped diagnostics of one flow run plus the final state."""

    records: list
    final_state: FlowState
    termination: str  # "converged" | "t_max" | "step_failure"

    @property
    def times(self):
        return np.array([r.t for r in self.records])

    @property
    def energies(self):
        return np.array([r.energy for r in self.records])

    @property
    def final_residual_sup(self):
        return self.records[-1].residual_sup


def _is_uniform(values):
    return values.min() == values.max()


def _make_record(u_vals, t, dudt, bg, dt, keep):
    n = bg.n
    grid = bg.grid
    w = np.exp((2.0 / n) * u_vals)
    resid = (2.0 / n) * w * dudt  # equals -(stationary residual) pointwise
    field = ScalarField(grid, u_vals)
    diss = -(2.0 / n) * grid.volume * float((dudt * dudt * w).mean())
    return TrajectoryRecord(
        t=float(t),
        energy=analysis.energy(field, bg),
        u_min=float(u_vals.min()),
        u_max=float(u_vals.max()),
        dudt_sup=float(np.abs(dudt).max()),
        residual_sup=float(np.abs(resid).max()),
        dissipation=diss,
        dt=float(dt),
        u=field if keep else None,
    )


def _fill_mismatches(records):
    for k in range(1, len(records) - 1):
        dedt = analysis._time_derivative(
            records[k - 1].t, records[k].t, records[k + 1].t,
            records[k - 1].energy, records[k].energy, records[k + 1].energy)
        records[k].dissipation_mismatch = abs(dedt - records[k].dissipation) / (
            1.0 + abs(dedt))


#: per-step cap on sup|du| for the first-order stepper; keeps violent
#: transients (rough starts) accurate enough to respect the a-priori bounds
_IMEX_DU_CAP = 0.1


def _controlled_dt(u_vals, bg, opts, data_uniform, t_remaining, dudt_sup):
    if opts.method == "imex-lagged":
        dt = opts.dt_init
        if dudt_sup > 0.0:
            dt = min(dt, _IMEX_DU_CAP / dudt_sup)
    else:
        n = bg.n
        u_min = u_vals.min()
        if data_uniform and _is_uniform(u_vals):
            # spatially uniform dynamics: the Fourier coefficients of every
            # nonzero mode are exactly zero, so only the scalar reaction
            # rate |S0| e^{-2u/n} limits RK4
            lam_ode = np.abs(bg.S0.values).max() * np.exp(-(2.0 / n) * u_min)
            dt = min(opts.dt_init, opts.dt_safety * _RK4_REAL_AXIS / lam_ode)
        else:
            c = 0.5 * n * np.exp(-(2.0 / n) * u_min)
            h = min(bg.grid.spacings)
            cfl = h * h / (2.0 * n * c)
            spectral = _RK4_REAL_AXIS / (
                c * sum((np.pi / hh) ** 2 for hh in bg.grid.spacings))
            dt = min(opts.dt_init, opts.dt_safety * min(cfl, spectral))
    return min(dt, t_remaining)


_MAX_STEPS = 2_000_000
_MAX_RETRIES = 16


def run_flow(u0, bg, opts):
    """Integrate the flow from u0 until du/dt is small or t_max is reached.

    Diagnostics are recorded every `record_every` accepted steps (plus the
    initial and final states).  Convergence means sup |du/dt| < residual_tol,
    which directly witnesses stationarity of the limit; the final stationary
    residual itself is reported in the last record.
    """
    grid = bg.grid
    explicit = opts.method == "explicit-rk4"
    data_uniform = _is_uniform(bg.S0.values) and _is_uniform(bg.f.values)

    u_vals = u0.values
    t = 0.0
    dudt = _dudt_values(u_vals, bg)
    records = [_make_record(u_vals, t, dudt, bg, 0.0, opts.keep_fields)]
    termination = None
    steps = 0
    t_end = opts.t_max

    def partial():
        recs = list(records)
        _fill_mismatches(recs)
        return FlowTrajectory(
            records=recs,
            final_state=FlowState.create(ScalarField(grid, u_vals), bg, t),
            termination="step_failure",
        )

    while True:
        dudt_sup = float(np.abs(dudt).max())
        if dudt_sup < opts.residual_tol:
            termination = "converged"
            break
        if t >= t_end - 1e-12 * (1.0 + t_end):
            termination = "t_max"
            break
        if steps >= _MAX_STEPS:
            raise StepFailure("step budget exhausted", trajectory=partial())
        dt = _controlled_dt(u_vals, bg, opts, data_uniform, t_end - t, dudt_sup)
        for _ in range(_MAX_RETRIES):
            try:
                if explicit:
                    u_new = _rk4_raw(u_vals, dudt, bg, dt)
                else:
                    u_new = _imex_raw(u_vals, dudt, bg, dt)
                break
            except StepUnstable:
                dt *= 0.5
        else:
            raise StepFailure(
                f"step kept failing down to dt={dt}", trajectory=partial())
        u_vals = u_new
        t += dt
        dudt = _dudt_values(u_vals, bg)
        steps += 1
        if steps % opts.record_every == 0:
            records.append(_make_record(u_vals, t, dudt, bg, dt, opts.keep_fields))

    if records[-1].t != t:
        records.append(_make_record(u_vals, t, dudt, bg, records[-1].dt,
                                    opts.keep_fields))
    _fill_mismatches(records)
    final = FlowState.create(ScalarField(grid, u_vals), bg, t)
    return FlowTrajectory(records=records, final_state=final,
                          termination=termination)

"""Problem data for the prescribed-curvature flow: the background pair
(S0, f), its derived scalars, the curvature/residual operators, and the
scenario presets used by the run harness.

The stationary equation is -laplacian(u) + S0 = f e^{2u/n}; the standing
hypothesis is that S0 integrates to a negative value.
"""

from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import BadRecipe, GridMismatch, NonNegativeDegree
from .poisson import solve_mean_zero
from .torus import (
    ScalarField,
    exp_field,
    laplacian,
    make_grid,
    integrate,
    random_band_limited,
    _rfft,
)


@dataclass(frozen=True)
class Background:
    """Validated problem data with cached derived quantities.

    gamma   -- integral of S0 (must be negative)
    f_mean  -- integral of f
    f_sup   -- sup-norm of f
    v0      -- mean-zero potential with laplacian(v0) = S0 - gamma
    """

    grid: object
    S0: ScalarField
    f: ScalarField
    gamma: float
    f_mean: float
    f_sup: float
    v0: ScalarField

    @property
    def n(self):
        return self.grid.complex_dim


def build_background(S0, f):
    """Validate the hypothesis gamma < 0 and cache the derived data."""
    if S0.grid != f.grid:
        raise GridMismatch("S0 and f must live on the same grid")
    gamma = integrate(S0)
    if gamma >= 0:
        raise NonNegativeDegree(
            f"integral of S0 is {gamma!r}; the flow requires a negative value")
    v0 = solve_mean_zero(S0 - gamma)
    return Background(
        grid=S0.grid,
        S0=S0,
        f=f,
        gamma=gamma,
        f_mean=integrate(f),
        f_sup=f.sup_norm,
        v0=v0,
    )


def conformal_factor(u, n):
    """The weight w = e^{2u/n} carried by the conformal metric."""
    return exp_field(u, 2.0 / n)


def chern_scalar_curvature(u, bg):
    """Scalar curvature of the conformally changed metric: e^{-2u/n}(-lap u + S0)."""
    if u.grid != bg.grid:
        raise GridMismatch("u must live on the background grid")
    n = bg.n
    lap = laplacian(u)
    vals = np.exp(-2.0 * u.values / n) * (-lap.values + bg.S0.values)
    return ScalarField(bg.grid, vals)


def residual(u, bg):
    """Stationary-equation defect: -lap u + S0 - f e^{2u/n} (zero iff solved)."""
    if u.grid != bg.grid:
        raise GridMismatch("u must live on the background grid")
    n = bg.n
    lap = laplacian(u)
    w = np.exp(2.0 * u.values / n)
    return ScalarField(bg.grid, -lap.values + bg.S0.values - bg.f.values * w)


def necessary_condition(f):
    """True iff min f < 0 (required for the stationary equation to be solvable)."""
    return bool(f.values.min() < 0.0)


# -- scenarios ---------------------------------------------------------------

PRESETS = ("constant", "case1", "case2", "rough-start", "custom")

PRESET_DEFAULTS = {
    "constant": dict(n=2, points=(8, 8, 8, 8)),
    "case1": dict(n=1, points=(16, 16)),
    "case2": dict(n=1, points=(16, 16)),
    "rough-start": dict(n=1, points=(16, 16)),
    "custom": dict(n=1, points=(16, 16)),
}

PRESET_STEPPERS = {
    "constant": dict(method="explicit-rk4", dt_init=0.025, residual_tol=5e-9,
                     t_max=40.0, record_every=1),
    "case1": dict(method="imex-lagged", dt_init=0.02, residual_tol=1e-8,
                  t_max=120.0, record_every=5),
    "case2": dict(method="imex-lagged", dt_init=0.02, residual_tol=1e-8,
                  t_max=120.0, record_every=5),
    "rough-start": dict(method="imex-lagged", dt_init=0.01, residual_tol=1e-8,
                        t_max=120.0, record_every=5),
    "custom": dict(method="imex-lagged", dt_init=0.02, residual_tol=1e-8,
                   t_max=120.0, record_every=5),
}


@dataclass(frozen=True)
class ScenarioSpec:
    """Deterministic recipe for a (Background, u0) pair.

    Recipes must produce band-limited fields (highest mode at most one third
    of Nyquist) so the spectral calculus is exact on them.
    """

    name: str
    n: int
    points: tuple
    periods: tuple = None
    seed: int = 7
    s0_expr: str = None
    f_expr: str = None
    lambda_value: float = None
    a_search_points: int = 48
    stepper: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.name not in PRESETS:
            raise BadRecipe(f"unknown scenario preset {self.name!r}")
        periods = self.periods or (1.0,) * (2 * self.n)
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "periods", tuple(periods))


def preset_stepper_defaults(name):
    if name not in PRESET_STEPPERS:
        raise BadRecipe(f"unknown scenario preset {name!r}")
    return dict(PRESET_STEPPERS[name])


_EXPR_NAMES = {
    "pi": np.pi,
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "sqrt": np.sqrt,
    "abs": np.abs,
}


def eval_field_expr(expr, grid):
    """Evaluate a coordinate expression (variables x1..x{2n}) to a field."""
    ns = dict(_EXPR_NAMES)
    for a, x in enumerate(grid.coordinates()):
        ns[f"x{a + 1}"] = x
    try:
        code = compile(expr, "<field expression>", "eval")
        vals = eval(code, {"__builtins__": {}}, ns)
    except Exception as exc:
        raise BadRecipe(f"cannot evaluate field expression {expr!r}: {exc}") from exc
    vals = np.broadcast_to(np.asarray(vals, dtype=np.float64), grid.shape).copy()
    f = ScalarField(grid, vals)
    _require_band_limited(f)
    return f


def _require_band_limited(f):
    """Reject fields with spectral mass above one third of Nyquist."""
    grid = f.grid
    fh = _rfft(f.values, grid)
    power = np.abs(fh) ** 2
    total = power.sum()
    if total == 0.0:
        return
    d = grid.ndim_real
    mask = np.zeros(power.shape, dtype=bool)
    for a, p in enumerate(grid.shape):
        cutoff = p // 6
        if a == d - 1:
            k = np.arange(power.shape[a])
        else:
            k = np.abs(np.fft.fftfreq(p, d=1.0 / p)).astype(int)
        shape = [1] * d
        shape[a] = power.shape[a]
        mask |= (k > cutoff).reshape(shape)
    if power[mask].sum() > 1e-10 * total:
        raise BadRecipe("field expression is not band-limited "
                        "(spectral mass above one third of Nyquist)")


def make_scenario(spec):
    """Build (Background, u0) deterministically from a ScenarioSpec."""
    grid = make_grid(spec.n, spec.points, spec.periods)
    rng_s0, rng_f, rng_u0 = (
        np.random.default_rng(s)
        for s in np.random.SeedSequence(spec.seed).spawn(3)
    )
    name = spec.name
    if name == "constant":
        S0 = ScalarField.constant(grid, -1.0)
        f = ScalarField.constant(grid, -1.0)
        u0 = ScalarField.constant(grid, 0.5)
        return build_background(S0, f), u0

    if name == "custom":
        if not spec.s0_expr or not spec.f_expr:
            raise BadRecipe("custom scenarios need both s0_expr and f_expr")
        S0 = eval_field_expr(spec.s0_expr, grid)
        f = eval_field_expr(spec.f_expr, grid)
        u0 = ScalarField.constant(grid, 0.0)
        return build_background(S0, f), u0

    S0 = random_band_limited(grid, rng_s0, amplitude=0.4, mean=-1.0)

    if name in ("case1", "rough-start"):
        r = random_band_limited(grid, rng_f, amplitude=1.0)
        f = r - r.max_value  # f <= 0 with max f = 0 attained
        if f.sup_norm == 0.0:
            raise BadRecipe("degenerate recipe: f is identically zero")
        amp = 3.0 if name == "rough-start" else 0.3
        u0 = random_band_limited(grid, rng_u0, amplitude=amp)
        return build_background(S0, f), u0

    # case2: f = f0 + lambda with max f0 = 0; lambda defaults to half the
    # largest admissible value for the searched certificate constants.
    r = random_band_limited(grid, rng_f, amplitude=1.0)
    f0 = r - r.max_value
    if f0.sup_norm == 0.0:
        raise BadRecipe("degenerate recipe: f0 is identically zero")
    from .supersolution import case2_search  # deferred: avoids module cycle

    gamma = integrate(S0)
    if gamma >= 0:
        raise NonNegativeDegree(f"integral of S0 is {gamma!r}")
    v0 = solve_mean_zero(S0 - gamma)
    found = case2_search(grid.complex_dim, gamma, v0, f0, spec.a_search_points)
    lam = spec.lambda_value if spec.lambda_value is not None else 0.5 * found.lambda_max
    if lam <= 0:
        raise BadRecipe(f"case2 needs a positive lambda, got {lam!r}")
    f = f0 + lam
    bg = build_background(S0, f)
    u_star = v0 + found.a * found.v2 + found.b
    u0 = u_star - 1.0
    return bg, u0

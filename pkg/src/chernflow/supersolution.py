"""Construction and pointwise certification of super-solutions.

A super-solution is a function u* with -lap(u*) + S0 - f e^{2u*/n} >= 0 at
every node; flows started below u* stay below it, which is what makes these
certificates useful.  Two constructions are implemented:

* nonpositive f (not identically zero): u* = v0 + a v1 + b with
  lap(v1) = mean(f) - f, a >= mean(S0)/mean(f) and
  b >= (n/2) ln a - min(v0) - a min(v1);
* sign-changing f = f0 + lambda (max f0 = 0): u* = v0 + a v2 + b with
  lap(v2) = mean(f0) - f0 and v2 > 0, which admits lambda up to

      lambda_max(a) = (mean(S0) - a mean(f0)) e^{-(2/n)(max v0 + a max v2 + b)}

  once e^{(2/n)b} = a e^{-(2/n)(min v0 + a min v2)} pins b.

For the remaining sign-changing cases on complex dimension 1 only the scalar
admissibility predicate is evaluated; the construction behind it is external
to this package.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateF,
    GridMismatch,
    LambdaTooLarge,
    NotSignChanging,
    WrongDimension,
    WrongSign,
)
from .poisson import solve_mean_zero, solve_positive
from .torus import ScalarField, integrate, laplacian

#: multiplicative/additive headroom applied to the inequality constants
MARGIN = 1e-6


@dataclass(frozen=True)
class SuperSolutionCertificate:
    """A candidate u* with the constants that produced it and its slack.

    slack_min is the min over nodes of -lap(u*) + S0 - f e^{2u*/n};
    a valid certificate has slack_min >= -1e-10.
    """

    u_star: ScalarField
    case_tag: str  # "case1" | "case2" | "external"
    a: float
    b: float
    lambda_max: float
    slack_min: float
    c0_min: float
    c0_max: float
    c1_min: float = None
    c2_min: float = None
    c2_max: float = None

    @property
    def valid(self):
        return bool(self.slack_min >= -1e-10)

    def as_dict(self):
        return {
            "case": self.case_tag,
            "a": self.a,
            "b": self.b,
            "lambda_max": self.lambda_max,
            "slack_min": self.slack_min,
            "c0_min": self.c0_min,
            "c0_max": self.c0_max,
            "c1_min": self.c1_min,
            "c2_min": self.c2_min,
            "c2_max": self.c2_max,
        }


def verify_supersolution(u_star, bg):
    """Certificate-independent recheck: min over nodes of the slack field."""
    if u_star.grid != bg.grid:
        raise GridMismatch("u_star must live on the background grid")
    n = bg.n
    lap = laplacian(u_star)
    slack = -lap.values + bg.S0.values - bg.f.values * np.exp(
        (2.0 / n) * u_star.values)
    return float(slack.min())


def construct_case1(bg):
    """Super-solution for nonpositive, not identically zero f."""
    f = bg.f
    if f.max_value > 0.0:
        raise WrongSign(f"f has a positive node (max f = {f.max_value!r})")
    if f.sup_norm == 0.0:
        raise DegenerateF("f is identically zero")
    n = bg.n
    v0 = bg.v0
    v1 = solve_mean_zero(bg.f_mean - f)
    c0_min, c0_max = v0.min_value, v0.max_value
    c1_min = v1.min_value
    a = max(bg.gamma / bg.f_mean, 1.0) * (1.0 + MARGIN)
    b = 0.5 * n * np.log(a) - c0_min - a * c1_min + MARGIN
    u_star = v0 + a * v1 + b
    slack_min = verify_supersolution(u_star, bg)
    return SuperSolutionCertificate(
        u_star=u_star, case_tag="case1", a=float(a), b=float(b),
        lambda_max=None, slack_min=slack_min,
        c0_min=c0_min, c0_max=c0_max, c1_min=c1_min,
    )


def split_sign_changing(f):
    """Write a sign-changing f as f0 + lambda with max f0 = 0 exactly.

    lambda is the max node value, so f0 = f - lambda vanishes exactly at the
    argmax.  Adding lambda back reproduces f to within one ulp per node (the
    algebraic identity cannot round-trip bit-exactly in floating point: the
    reals that round to a given f_j may contain no representable f0_j).
    """
    fmax = f.values.max()
    fmin = f.values.min()
    if not (fmax > 0.0 and fmin < 0.0):
        raise NotSignChanging(
            f"f must attain both signs (range [{fmin!r}, {fmax!r}])")
    lam = float(fmax)
    return ScalarField(f.grid, f.values - lam), lam


@dataclass(frozen=True)
class Case2Constants:
    """Outcome of the a-grid search for the sign-changing construction."""

    a: float
    b: float
    lambda_max: float
    v2: ScalarField
    c2_min: float
    c2_max: float
    c0_min: float
    c0_max: float


def case2_lambda_max(a, n, gamma, f0_mean, c0_min, c0_max, c2_min, c2_max,
                     b=None):
    """Largest admissible lambda for given a (and b, default: its equality value)."""
    if b is None:
        b = 0.5 * n * np.log(a) - (c0_min + a * c2_min)
    lam = (gamma - a * f0_mean) * np.exp(-(2.0 / n) * (c0_max + a * c2_max + b))
    return float(lam), float(b)


def case2_search(n, gamma, v0, f0, a_search_points=48):
    """Scan a over a log grid in (gamma/mean(f0), 100 gamma/mean(f0)].

    Returns the constants maximizing lambda_max; ties break to the smaller a.
    """
    f0_mean = integrate(f0)
    v2 = solve_positive(f0_mean - f0)
    c0_min, c0_max = v0.min_value, v0.max_value
    c2_min, c2_max = v2.min_value, v2.max_value
    ratio = gamma / f0_mean  # both negative, so positive
    best = None
    for j in range(1, a_search_points + 1):
        a = ratio * 100.0 ** (j / a_search_points)
        lam, b = case2_lambda_max(a, n, gamma, f0_mean,
                                  c0_min, c0_max, c2_min, c2_max)
        if best is None or lam > best.lambda_max:
            best = Case2Constants(a=float(a), b=b, lambda_max=lam, v2=v2,
                                  c2_min=c2_min, c2_max=c2_max,
                                  c0_min=c0_min, c0_max=c0_max)
    return best


def construct_case2(bg, a_search_points=48):
    """Super-solution for sign-changing f = f0 + lambda (max f0 = 0).

    Raises LambdaTooLarge (carrying the achieved lambda_max) when the shift
    baked into bg.f exceeds what any sampled a admits.
    """
    f0, lam = split_sign_changing(bg.f)
    found = case2_search(bg.n, bg.gamma, bg.v0, f0, a_search_points)
    if lam > found.lambda_max:
        raise LambdaTooLarge(
            f"lambda={lam!r} exceeds achievable lambda_max={found.lambda_max!r}",
            lambda_max=found.lambda_max)
    u_star = bg.v0 + found.a * found.v2 + found.b
    slack_min = verify_supersolution(u_star, bg)
    return SuperSolutionCertificate(
        u_star=u_star, case_tag="case2", a=found.a, b=found.b,
        lambda_max=found.lambda_max, slack_min=slack_min,
        c0_min=found.c0_min, c0_max=found.c0_max,
        c2_min=found.c2_min, c2_max=found.c2_max,
    )


def case3_predicate(bg, euler_char, C_M):
    """Admissibility inequality for sign-changing f on complex dimension 1.

    Computes both sides of

        int f+ e^{2 v0} / sup|f e^{2 v0}|
            <= C_M (int f- e^{2 v0} / sup|f e^{2 v0}|)^theta,

    theta = (pi - 2 pi chi + 1)/(pi - 1), and reports (lhs, rhs, holds).
    The constant C_M is an input; no super-solution is constructed here.
    """
    if bg.n != 1:
        raise WrongDimension(
            f"predicate requires complex dimension 1, grid has {bg.n}")
    weight = np.exp((2.0 / bg.n) * bg.v0.values)
    g_sup = float(np.abs(bg.f.values * weight).max())
    if g_sup == 0.0:
        raise DegenerateF("f e^{2 v0} vanishes identically")
    f_plus = np.maximum(bg.f.values, 0.0)
    f_minus = np.maximum(-bg.f.values, 0.0)
    theta = (np.pi - 2.0 * np.pi * euler_char + 1.0) / (np.pi - 1.0)
    lhs = integrate(ScalarField(bg.grid, f_plus * weight)) / g_sup
    rhs = C_M * (integrate(ScalarField(bg.grid, f_minus * weight)) / g_sup) ** theta
    return float(lhs), float(rhs), bool(lhs <= rhs)

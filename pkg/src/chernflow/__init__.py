"""Numerical laboratory for a prescribed-curvature conformal flow on flat
tori: spectral calculus, mean-zero Poisson solves, flow integration,
super-solution certificates, and a-priori bound/energy checkers.
"""

from .analysis import (
    BoundReport,
    check_bounds,
    dissipation_identity_check,
    dissipation_rate,
    energy,
    growth_constant,
    lower_bound_constant,
    stationary_identity_check,
    upper_bound_value,
)
from .flow import (
    FlowState,
    FlowTrajectory,
    StepperOptions,
    TrajectoryRecord,
    explicit_stability_limit,
    rhs_u,
    run_flow,
    spectral_stability_limit,
    step_explicit,
    step_imex,
)
from .poisson import solve_dense_oracle, solve_mean_zero, solve_positive
from .problem import (
    Background,
    ScenarioSpec,
    build_background,
    chern_scalar_curvature,
    conformal_factor,
    make_scenario,
    necessary_condition,
    preset_stepper_defaults,
    residual,
)
from .snapshots import read_snapshot, write_snapshot, write_trajectory_csv
from .supersolution import (
    SuperSolutionCertificate,
    case3_predicate,
    construct_case1,
    construct_case2,
    split_sign_changing,
    verify_supersolution,
)
from .torus import (
    ScalarField,
    TorusGrid,
    exp_field,
    grad_norm_sq,
    integrate,
    laplacian,
    laplacian_fd,
    make_grid,
    random_band_limited,
)
from . import errors

__version__ = "0.1.0"

__all__ = [
    "Background",
    "BoundReport",
    "FlowState",
    "FlowTrajectory",
    "ScalarField",
    "ScenarioSpec",
    "StepperOptions",
    "SuperSolutionCertificate",
    "TorusGrid",
    "TrajectoryRecord",
    "build_background",
    "case3_predicate",
    "check_bounds",
    "chern_scalar_curvature",
    "conformal_factor",
    "construct_case1",
    "construct_case2",
    "dissipation_identity_check",
    "dissipation_rate",
    "energy",
    "errors",
    "explicit_stability_limit",
    "exp_field",
    "grad_norm_sq",
    "growth_constant",
    "integrate",
    "laplacian",
    "laplacian_fd",
    "lower_bound_constant",
    "make_grid",
    "make_scenario",
    "necessary_condition",
    "preset_stepper_defaults",
    "random_band_limited",
    "read_snapshot",
    "residual",
    "rhs_u",
    "run_flow",
    "solve_dense_oracle",
    "solve_mean_zero",
    "solve_positive",
    "spectral_stability_limit",
    "split_sign_changing",
    "stationary_identity_check",
    "step_explicit",
    "step_imex",
    "upper_bound_value",
    "verify_supersolution",
    "write_snapshot",
    "write_trajectory_csv",
]

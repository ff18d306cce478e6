"""Command-line front end: scenario runs, verification suites, certificate
construction, and parameter sweeps.

Exit codes: 0 success, 1 configuration error, 2 check/construction failure,
3 non-convergence.
"""

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import analysis, flow, problem, supersolution
from .config import load_config, set_dotted
from .errors import (
    ChernFlowError,
    ConfigError,
    LambdaTooLarge,
    StepFailure,
    WrongDimension,
)
from .snapshots import dump_json, write_snapshot, write_trajectory_csv

_GAP_TOL = 1e-6
_SLACK_TOL = -1e-8


def scenario_from_config(cfg):
    """Resolve a validated config dict into (ScenarioSpec, StepperOptions)."""
    bgc = cfg.get("background", {})
    preset = bgc.get("preset")
    if preset is not None and (bgc.get("s0_expr") or bgc.get("f_expr")):
        raise ConfigError("'background.preset' conflicts with expression keys")
    if preset is None:
        if not (bgc.get("s0_expr") and bgc.get("f_expr")):
            raise ConfigError(
                "background needs either 'preset' or both 's0_expr' and 'f_expr'")
        preset = "custom"
    if preset not in problem.PRESETS:
        raise ConfigError(f"unknown value for 'background.preset': {preset!r}")

    defaults = problem.PRESET_DEFAULTS[preset]
    gridc = cfg.get("grid", {})
    n = gridc.get("n", defaults["n"])
    points = gridc.get("points", defaults["points"])
    if isinstance(points, int):
        points = (points,) * (2 * n)
    periods = tuple(gridc.get("periods", (1.0,) * (2 * n)))

    sup = cfg.get("supersolution", {})
    spec = problem.ScenarioSpec(
        name=preset,
        n=n,
        points=tuple(points),
        periods=periods,
        seed=bgc.get("seed", 7),
        s0_expr=bgc.get("s0_expr"),
        f_expr=bgc.get("f_expr"),
        lambda_value=sup.get("lambda"),
        a_search_points=sup.get("a_search_points", 48),
    )
    stepper = dict(problem.preset_stepper_defaults(preset))
    stepper.update(cfg.get("flow", {}))
    try:
        opts = flow.StepperOptions(**stepper)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad [flow] options: {exc}") from exc
    return spec, opts


def _grid_descriptor(grid):
    return {
        "n": grid.complex_dim,
        "points": list(grid.points_per_axis),
        "periods": list(grid.periods),
    }


def _attempt_certificate(spec, bg):
    """Certificate for the scenario's construction, plus an error tag."""
    try:
        if spec.name == "case2":
            cert = supersolution.construct_case2(bg, spec.a_search_points)
        elif bg.f.max_value <= 0.0 and bg.f_sup > 0.0:
            cert = supersolution.construct_case1(bg)
        else:
            return None, None
    except LambdaTooLarge as exc:
        return None, f"LambdaTooLarge: {exc} (lambda_max={exc.lambda_max!r})"
    except ChernFlowError as exc:
        return None, f"{type(exc).__name__}: {exc}"
    if not cert.valid:
        return cert, f"certificate slack_min={cert.slack_min!r} below -1e-10"
    return cert, None


def run_scenario(cfg, out_dir, canonical=False):
    """Full pipeline: scenario -> flow -> checkers -> artifacts on disk.

    Returns (exit_code, summary_dict).
    """
    started = time.perf_counter()
    spec, opts = scenario_from_config(cfg)
    bg, u0 = problem.make_scenario(spec)
    cert, cert_error = _attempt_certificate(spec, bg)

    try:
        traj = flow.run_flow(u0, bg, opts)
    except StepFailure as exc:
        traj = exc.trajectory

    report = analysis.check_bounds(traj, bg, u0)
    gap = analysis.stationary_identity_check(traj.final_state.u, bg)
    converged = traj.termination == "converged"
    checks_pass = (
        report.all_hold
        and cert_error is None
        and (not converged or gap <= _GAP_TOL * (1.0 + abs(bg.gamma)))
    )

    summary = {
        "scenario": spec.name,
        "seed": spec.seed,
        "grid": _grid_descriptor(bg.grid),
        "gamma": bg.gamma,
        "f_mean": bg.f_mean,
        "f_sup": bg.f_sup,
        "termination": traj.termination,
        "final_residual_sup": traj.final_residual_sup,
        "final_energy": traj.records[-1].energy,
        "bounds": {
            "lower_bound": report.lower_bound,
            "C1": report.C1,
            "worst_lower_slack": report.worst_lower,
            "worst_upper_slack": report.worst_upper,
        },
        "stationary_identity_gap": gap,
        "certificate": cert.as_dict() if cert is not None else None,
        "certificate_error": cert_error,
        "checks_pass": checks_pass,
        "duration_seconds": None if canonical else time.perf_counter() - started,
    }

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_trajectory_csv(traj, out / f"{spec.name}_trajectory.csv")
    write_snapshot(traj.final_state.u, out / f"{spec.name}_final_u.txt")
    dump_json(summary, out / f"{spec.name}_summary.json")

    if not checks_pass:
        return 2, summary
    if not converged:
        return 3, summary
    return 0, summary


def cmd_run(args):
    try:
        cfg = load_config(args.config)
        code, summary = run_scenario(cfg, args.out, canonical=args.canonical)
    except ChernFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{summary['scenario']}: {summary['termination']}, "
          f"residual={summary['final_residual_sup']:.3e}, "
          f"checks={'pass' if summary['checks_pass'] else 'FAIL'}")
    return code


def cmd_verify(args):
    from . import verify

    if args.level not in ("quick", "full"):
        print(f"error: unknown verification level {args.level!r}", file=sys.stderr)
        return 1
    failures = verify.run_level(args.level)
    return 2 if failures else 0


def cmd_supersolution(args):
    try:
        cfg = load_config(args.config)
        sup = cfg.get("supersolution", {})
        case = sup.get("case")
        if case not in ("case1", "case2", "case3-predicate"):
            raise ConfigError(
                f"'supersolution.case' must be case1|case2|case3-predicate, got {case!r}")
        spec, _ = scenario_from_config(cfg)
        bg, _ = problem.make_scenario(spec)
    except ChernFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    try:
        if case == "case3-predicate":
            lhs, rhs, holds = supersolution.case3_predicate(
                bg, sup.get("euler_char", 0), sup.get("C_M", 1.0))
            document = {"case": "case3-predicate", "lhs": lhs, "rhs": rhs,
                        "holds": holds, "grid": _grid_descriptor(bg.grid)}
            dump_json(document, out / "case3_predicate.json")
            print(f"case3 predicate: lhs={lhs:.6e} rhs={rhs:.6e} holds={holds}")
            return 0
        if case == "case1":
            cert = supersolution.construct_case1(bg)
        else:
            cert = supersolution.construct_case2(bg, spec.a_search_points)
    except WrongDimension as exc:
        print(f"error: WrongDimension: {exc}", file=sys.stderr)
        return 1
    except ChernFlowError as exc:
        print(f"construction failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2

    document = dict(cert.as_dict(), grid=_grid_descriptor(bg.grid))
    dump_json(document, out / f"{case}_certificate.json")
    write_snapshot(cert.u_star, out / f"{case}_u_star.txt")
    lam = "none" if cert.lambda_max is None else f"{cert.lambda_max:.6e}"
    print(f"{case}: a={cert.a:.6e} b={cert.b:.6e} lambda_max={lam} "
          f"slack_min={cert.slack_min:.3e}")
    return 0 if cert.valid else 2


def cmd_sweep(args):
    try:
        cfg = load_config(args.config)
        sweep = cfg.get("sweep")
        if not sweep or "param" not in sweep or "values" not in sweep:
            raise ConfigError("sweep requires 'sweep.param' and 'sweep.values'")
        values = sweep["values"]
        if not values:
            raise ConfigError("'sweep.values' must not be empty")
        param = sweep["param"]
        base = {s: dict(t) for s, t in cfg.items() if s != "sweep"}
        base_seed = base.get("background", {}).get("seed", 7)
        runs = []
        for i, value in enumerate(values):
            run_cfg = set_dotted(base, param, value)
            # per-run seeds derive from the base seed and the sweep index
            run_cfg = set_dotted(run_cfg, "background.seed", base_seed + i)
            runs.append((i, value, run_cfg))
    except ChernFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    def one(run):
        i, value, run_cfg = run
        try:
            code, summary = run_scenario(run_cfg, out / f"run_{i:03d}",
                                         canonical=args.canonical)
        except ChernFlowError as exc:
            return i, value, 1, f"{type(exc).__name__}: {exc}", None
        return i, value, code, summary["termination"], summary

    workers = max(1, min(args.workers, len(runs)))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(one, runs))

    lines = ["index,value,seed,termination,final_residual_sup,exit_code"]
    worst = 0
    for i, value, code, termination, summary in results:
        residual = "" if summary is None else f"{summary['final_residual_sup']:.17g}"
        seed = base_seed + i
        lines.append(f"{i},{value},{seed},{termination},{residual},{code}")
        worst = max(worst, 0 if code == 0 else 2)
        print(f"run {i:03d} ({param}={value}): {termination} [exit {code}]")
    (out / "index.csv").write_text("\n".join(lines) + "\n")
    return worst


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="chernflow",
        description="Run and verify the prescribed-curvature conformal flow "
                    "on flat-torus backgrounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario end to end")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--out", default=".")
    p_run.add_argument("--canonical", action="store_true",
                       help="omit wall-clock data for byte-stable summaries")
    p_run.set_defaults(func=cmd_run)

    p_verify = sub.add_parser("verify", help="run the built-in check suites")
    p_verify.add_argument("level", nargs="?", default="quick")
    p_verify.set_defaults(func=cmd_verify)

    p_super = sub.add_parser("supersolution",
                             help="construct and certify a super-solution")
    p_super.add_argument("--config", required=True)
    p_super.add_argument("--out", default=".")
    p_super.set_defaults(func=cmd_supersolution)

    p_sweep = sub.add_parser("sweep", help="run a declared parameter sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", default="sweep_out")
    p_sweep.add_argument("--workers", type=int, default=4)
    p_sweep.add_argument("--canonical", action="store_true")
    p_sweep.set_defaults(func=cmd_sweep)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

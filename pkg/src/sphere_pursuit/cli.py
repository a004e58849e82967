"""Command-line interface: one scenario file in, artifact files out.

Subcommands mirror the scenario modes; each takes a scenario path and an
output directory. Exit codes: 0 success, 1 usage errors (bad arguments or a
malformed scenario), 2 numerical breakdown inside a computation. Outputs
are byte-stable across runs for identical scenarios.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import yaml

from .apollonius import (
    NumericalBreakdownError,
    boundary,
    classify_intercept,
    critical_alpha,
    intercept_point,
)
from .engagements import (
    TargetRegion,
    TwoPursuerConfig,
    evader_wins_guarding,
    guarding_threshold,
    pursuer_wins_guarding,
    two_pursuer_intercept,
)
from .geometry import (
    DegenerateConfigError,
    GameParams,
    SurfacePoint,
    arc_between,
    from_spherical,
    positions_at_separation,
    relative_config,
)
from .scenario import Scenario, ScenarioError, load_scenario
from .sim import run
from .strategies import equilibrium_evader_policy, equilibrium_pursuer_policy

__all__ = ["entry", "execute", "main"]


def _record(lines: list[tuple[str, object]]) -> str:
    return "\n".join(f"{key}: {value!r}" for key, value in lines) + "\n"


def _positions_for(scenario: Scenario, alpha: float | None) -> tuple[SurfacePoint, SurfacePoint]:
    if alpha is not None:
        return positions_at_separation(alpha, scenario.params)
    pursuer = from_spherical(*scenario.pursuer, scenario.params)
    evader = from_spherical(*scenario.evader, scenario.params)
    return pursuer, evader


def _intercept_record(
    scenario: Scenario, pursuer: SurfacePoint, evader: SurfacePoint
) -> str:
    params = scenario.params
    config = relative_config(pursuer, evader)
    bdry = boundary(pursuer, evader, params, scenario.n_samples)
    point, time = intercept_point(pursuer, evader, params)
    distance = bdry.min_arc_to(point)
    label = classify_intercept(bdry, point)
    return _record(
        [
            ("mode", scenario.mode),
            ("seed", scenario.seed),
            ("radius", params.radius),
            ("pursuer_speed", params.pursuer_speed),
            ("speed_ratio", params.speed_ratio),
            ("n_samples", scenario.n_samples),
            ("alpha", config.alpha),
            ("critical_alpha", critical_alpha(params)),
            ("point_x", point.x),
            ("point_y", point.y),
            ("point_z", point.z),
            ("time", time),
            ("distance_to_boundary", distance),
            ("inside_domain", bdry.contains_point(point)),
            ("classification", label),
        ]
    )


def _exec_simulate(scenario: Scenario, outdir: Path) -> None:
    params = scenario.params
    pursuer, evader = _positions_for(scenario, None)
    config = relative_config(pursuer, evader)
    traj = run(
        pursuer,
        evader,
        equilibrium_pursuer_policy(params),
        equilibrium_evader_policy(params),
        scenario.dt,
        scenario.max_time,
        params,
        capture_tol=scenario.capture_tol,
        tie_break=scenario.tie_break,
    )
    (outdir / "trajectory.csv").write_text(traj.to_csv())
    (outdir / "trajectory.txt").write_text(traj.to_records())
    (outdir / "summary.txt").write_text(
        _record(
            [
                ("mode", scenario.mode),
                ("seed", scenario.seed),
                ("radius", params.radius),
                ("pursuer_speed", params.pursuer_speed),
                ("speed_ratio", params.speed_ratio),
                ("dt", scenario.dt),
                ("capture_tol", scenario.capture_tol),
                ("tie_break", scenario.tie_break),
                ("max_time", scenario.max_time),
                ("initial_alpha", config.alpha),
                ("steps", len(traj.steps)),
                ("capture_time", traj.capture_time),
                ("capped", traj.capped),
                ("final_alpha", traj.final_alpha),
            ]
        )
    )


def _exec_apollonius(scenario: Scenario, outdir: Path) -> None:
    alphas = scenario.alphas if scenario.alphas is not None else (None,)
    for index, alpha in enumerate(alphas, start=1):
        pursuer, evader = _positions_for(scenario, alpha)
        bdry = boundary(pursuer, evader, scenario.params, scenario.n_samples)
        (outdir / f"boundary_{index}.csv").write_text(bdry.to_csv())
        (outdir / f"intercept_{index}.txt").write_text(
            _intercept_record(scenario, pursuer, evader)
        )


def _exec_intercept(scenario: Scenario, outdir: Path) -> None:
    alpha = scenario.alphas[0] if scenario.alphas is not None else None
    pursuer, evader = _positions_for(scenario, alpha)
    (outdir / "intercept_1.txt").write_text(_intercept_record(scenario, pursuer, evader))


def _exec_two_pursuer(scenario: Scenario, outdir: Path) -> None:
    spec = scenario.two_pursuer
    params_1 = scenario.params
    try:
        params_2 = GameParams(
            radius=params_1.radius,
            pursuer_speed=spec.pursuer_speed_2,
            speed_ratio=spec.speed_ratio_2,
        )
        cfg = TwoPursuerConfig(
            alpha_1=spec.alpha_1,
            alpha_2=spec.alpha_2,
            lambda_o=spec.lambda_o,
            params_1=params_1,
            params_2=params_2,
        )
    except ValueError as exc:
        raise ScenarioError(f"two_pursuer: {exc}") from exc
    result = two_pursuer_intercept(cfg, scenario.n_samples)
    p1, p2, evader = cfg.positions()
    arc_e = arc_between(evader, result.point)
    arc_1 = arc_between(p1, result.point)
    arc_2 = arc_between(p2, result.point)
    (outdir / "engagement.txt").write_text(
        _record(
            [
                ("mode", scenario.mode),
                ("seed", scenario.seed),
                ("radius", params_1.radius),
                ("alpha_1", cfg.alpha_1),
                ("alpha_2", cfg.alpha_2),
                ("lambda_o", cfg.lambda_o),
                ("speed_ratio_1", params_1.speed_ratio),
                ("speed_ratio_2", params_2.speed_ratio),
                ("pursuer_speed_1", params_1.pursuer_speed),
                ("pursuer_speed_2", params_2.pursuer_speed),
                ("case", result.case_tag),
                ("note", result.note),
                ("point_x", result.point.x),
                ("point_y", result.point.y),
                ("point_z", result.point.z),
                ("time", result.time),
                ("arc_evader", arc_e),
                ("arc_pursuer_1", arc_1),
                ("arc_pursuer_2", arc_2),
                ("arrival_time_evader", arc_e / params_1.evader_speed),
                ("arrival_time_pursuer_1", arc_1 / params_1.pursuer_speed),
                ("arrival_time_pursuer_2", arc_2 / params_2.pursuer_speed),
            ]
        )
    )


def _exec_guard(scenario: Scenario, outdir: Path) -> None:
    params = scenario.params
    alpha_in = scenario.alphas[0] if scenario.alphas is not None else None
    pursuer, evader = _positions_for(scenario, alpha_in)
    config = relative_config(pursuer, evader)
    bdry = boundary(pursuer, evader, params, scenario.n_samples)
    spec = scenario.target
    target = TargetRegion(
        center=from_spherical(spec.phi, spec.theta, params),
        angular_radius=spec.angular_radius,
    )
    evader_wins = evader_wins_guarding(bdry, target)
    pursuer_wins = pursuer_wins_guarding(bdry, target, config.alpha, params)
    (outdir / "verdict.txt").write_text(
        _record(
            [
                ("mode", scenario.mode),
                ("seed", scenario.seed),
                ("radius", params.radius),
                ("pursuer_speed", params.pursuer_speed),
                ("speed_ratio", params.speed_ratio),
                ("n_samples", scenario.n_samples),
                ("alpha", config.alpha),
                ("guarding_threshold", guarding_threshold(params)),
                ("target_phi", spec.phi),
                ("target_theta", spec.theta),
                ("target_angular_radius", spec.angular_radius),
                ("evader_wins", evader_wins),
                ("pursuer_wins", pursuer_wins),
            ]
        )
    )


_EXECUTORS = {
    "simulate": _exec_simulate,
    "apollonius": _exec_apollonius,
    "intercept": _exec_intercept,
    "two_pursuer": _exec_two_pursuer,
    "guard": _exec_guard,
}


def execute(scenario: Scenario, outdir: Path | str) -> int:
    """Run a scenario and write its artifacts; returns the process exit code."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    try:
        _EXECUTORS[scenario.mode](scenario, outdir)
    except (NumericalBreakdownError, DegenerateConfigError) as exc:
        print(f"numerical breakdown: {exc}", file=sys.stderr)
        return 2
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sphere-pursuit",
        description="Pursuit-evasion games on a sphere: playouts, dominance domains, "
        "intercepts, two-pursuer engagements, and target guarding.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, mode in (
        ("simulate", "simulate"),
        ("apollonius", "apollonius"),
        ("intercept", "intercept"),
        ("two-pursuer", "two_pursuer"),
        ("guard", "guard"),
    ):
        p = sub.add_parser(command, help=f"run a {mode} scenario")
        p.add_argument("scenario", type=Path, help="scenario YAML file")
        p.add_argument("outdir", type=Path, help="directory for output artifacts")
        p.set_defaults(mode=mode)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        scenario = load_scenario(args.scenario)
    except OSError as exc:
        print(f"cannot read scenario: {exc}", file=sys.stderr)
        return 1
    except (ScenarioError, yaml.YAMLError) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 1
    if scenario.mode != args.mode:
        print(
            f"scenario mode {scenario.mode!r} does not match subcommand {args.mode!r}",
            file=sys.stderr,
        )
        return 1
    try:
        return execute(scenario, args.outdir)
    except ScenarioError as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return 1


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()

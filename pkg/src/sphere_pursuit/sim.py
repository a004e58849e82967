"""Time-stepped playouts of arbitrary policies with capture detection.

A run is sequential and deterministic given its inputs; independent runs
share no state. Policies are total functions of the visible state
(pursuer, evader, relative configuration, time): the evader policy returns
(speed, heading) and is evaluated first within a step, then the pursuer
policy returns its heading. Capture is declared when the angular separation
drops to the capture tolerance; the antipodal separation is resolved by one
dispersal step (evader stands still, pursuer commits to the tie-break
direction in its world-frame tangent plane) after which play is ordinary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from .geometry import (
    GameParams,
    SurfacePoint,
    Vec3,
    _cross,
    _dot,
    _unit,
    relative_config,
    step_geodesic,
)
from .kinematics import ControlInput, advance
from .strategies import EvaderPolicy, PursuerPolicy, dispersal_controls, value

# Angular capture tolerance, radians. Exact collocation is unreachable in
# discrete time; every output records the tolerance used.
DEFAULT_CAPTURE_TOL = 1e-3

_CSV_HEADER = "t,Px,Py,Pz,Ex,Ey,Ez,alpha,u_P,u_E,v_E"


class PolicyError(ValueError):
    """A policy returned inadmissible controls; message identifies the step."""


class TrajectoryStep(NamedTuple):
    """State at the start of one executed step and the controls applied over it."""

    time: float
    pursuer: SurfacePoint
    evader: SurfacePoint
    alpha: float
    control: ControlInput


@dataclass(frozen=True)
class Trajectory:
    """Timestamped record of one playout.

    steps holds one record per executed step; the terminal state after the
    last step is kept in the final_* fields (no controls were evaluated
    there). capture_time is set exactly when the final separation is at or
    below the capture tolerance; capped marks runs stopped by max_time.
    """

    dt: float
    capture_tol: float
    steps: list[TrajectoryStep]
    final_time: float
    final_pursuer: SurfacePoint
    final_evader: SurfacePoint
    final_alpha: float
    capture_time: float | None
    capped: bool

    def to_csv(self) -> str:
        """CSV export, one row per step plus a terminal row with nan controls."""
        lines = [
            f"# dt={self.dt!r}",
            f"# capture_tol={self.capture_tol!r}",
            f"# capture_time={self.capture_time!r}",
            f"# capped={self.capped!r}",
            _CSV_HEADER,
        ]
        for s in self.steps:
            lines.append(_csv_row(s.time, s.pursuer, s.evader, s.alpha, s.control))
        lines.append(
            _csv_row(self.final_time, self.final_pursuer, self.final_evader, self.final_alpha, None)
        )
        return "\n".join(lines) + "\n"

    def to_records(self) -> str:
        """Structured-text export, one key=value record per step."""
        lines = [
            f"dt={self.dt!r} capture_tol={self.capture_tol!r} "
            f"capture_time={self.capture_time!r} capped={self.capped!r}"
        ]
        for s in self.steps:
            lines.append(_record_row(s.time, s.pursuer, s.evader, s.alpha, s.control))
        lines.append(
            _record_row(
                self.final_time, self.final_pursuer, self.final_evader, self.final_alpha, None
            )
        )
        return "\n".join(lines) + "\n"


def _csv_row(t, p, e, alpha, ctrl) -> str:
    u_p, u_e, v_e = ctrl if ctrl is not None else (math.nan, math.nan, math.nan)
    return (
        f"{t!r},{p.x!r},{p.y!r},{p.z!r},{e.x!r},{e.y!r},{e.z!r},"
        f"{alpha!r},{u_p!r},{u_e!r},{v_e!r}"
    )


def _record_row(t, p, e, alpha, ctrl) -> str:
    u_p, u_e, v_e = ctrl if ctrl is not None else (math.nan, math.nan, math.nan)
    return (
        f"t={t!r} Px={p.x!r} Py={p.y!r} Pz={p.z!r} Ex={e.x!r} Ey={e.y!r} Ez={e.z!r} "
        f"alpha={alpha!r} u_P={u_p!r} u_E={u_e!r} v_E={v_e!r}"
    )


def default_max_time(params: GameParams) -> float:
    """Generous playout cap: four times the value of the worst-case start."""
    return 4.0 * value(math.pi, params)


def dispersal_direction(point: SurfacePoint, tie_break: float) -> Vec3:
    """World-frame tangent direction selected by the dispersal tie-break.

    tie_break 0 points along +x projected onto the tangent plane at point
    (+y when the point sits on the x axis); positive angles rotate
    counterclockwise around the outward normal.
    """
    p_hat = _unit(point)
    for axis in ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)):
        d = _dot(axis, p_hat)
        base = (axis[0] - d * p_hat[0], axis[1] - d * p_hat[1], axis[2] - d * p_hat[2])
        if math.sqrt(_dot(base, base)) > 1e-6:
            break
    base = _unit(base)
    side = _cross(p_hat, base)
    cb, sb = math.cos(tie_break), math.sin(tie_break)
    return (
        cb * base[0] + sb * side[0],
        cb * base[1] + sb * side[1],
        cb * base[2] + sb * side[2],
    )


def run(
    pursuer0: SurfacePoint,
    evader0: SurfacePoint,
    pursuer_policy: PursuerPolicy,
    evader_policy: EvaderPolicy,
    dt: float,
    max_time: float,
    params: GameParams,
    *,
    capture_tol: float = DEFAULT_CAPTURE_TOL,
    tie_break: float = 0.0,
) -> Trajectory:
    """Play out the game until capture or max_time.

    Every executed step is recorded. Policies returning an inadmissible
    evader speed raise PolicyError naming the offending step.
    """
    if dt <= 0.0:
        raise ValueError(f"dt must be positive, got {dt}")
    if max_time < 0.0:
        raise ValueError(f"max_time must be nonnegative, got {max_time}")
    max_steps = math.ceil(max_time / dt - 1e-9)
    mu_cap = params.evader_speed * (1.0 + 1e-12)

    pursuer, evader = pursuer0, evader0
    steps: list[TrajectoryStep] = []
    capture_time: float | None = None
    capped = False
    k = 0
    while True:
        t = k * dt
        config = relative_config(pursuer, evader)
        if config.alpha <= capture_tol:
            capture_time = t
            break
        if k >= max_steps:
            capped = True
            break
        if config.degenerate:
            # Antipodal: evader stands still for this one step while the
            # pursuer commits to the tie-break direction.
            ctrl = dispersal_controls(tie_break, params)
            direction = dispersal_direction(pursuer, tie_break)
            new_pursuer = step_geodesic(pursuer, direction, params.pursuer_speed * dt)
            new_evader = evader
        else:
            v_e, u_e = evader_policy(pursuer, evader, config, t)
            u_p = pursuer_policy(pursuer, evader, config, t)
            if not 0.0 <= v_e <= mu_cap:
                raise PolicyError(
                    f"evader policy returned speed {v_e!r} outside [0, {params.evader_speed!r}] "
                    f"at step {k} (t={t!r})"
                )
            ctrl = ControlInput(u_p, u_e, v_e)
            new_pursuer, new_evader = advance(pursuer, evader, ctrl, dt, params, config=config)
        steps.append(TrajectoryStep(t, pursuer, evader, config.alpha, ctrl))
        pursuer, evader = new_pursuer, new_evader
        k += 1

    return Trajectory(
        dt=dt,
        capture_tol=capture_tol,
        steps=steps,
        final_time=t,
        final_pursuer=pursuer,
        final_evader=evader,
        final_alpha=config.alpha,
        capture_time=capture_time,
        capped=capped,
    )

"""Agent motion under heading controls and the reduced angular-distance rate.

Controls are held constant over a step and motion within the step is an
exact geodesic arc, so there is no integrator error in the positions; only
the controls themselves are piecewise constant. The great-circle frame is
recomputed from positions at every step because headings are defined in the
instantaneous frame.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .geometry import (
    DegenerateConfigError,
    GameParams,
    RelativeConfig,
    SurfacePoint,
    heading_to_velocity,
    relative_config,
    step_geodesic,
)

# Slack on the evader speed cap, relative to the cap itself.
_SPEED_CAP_SLACK = 1e-12


class ControlInput(NamedTuple):
    """One step of controls: both headings in radians, evader speed in length/time."""

    pursuer_heading: float
    evader_heading: float
    evader_speed: float


def alpha_rate(ctrl: ControlInput, params: GameParams) -> float:
    """Instantaneous rate of change of the angular separation.

    (v_E / R) cos(u_E) - (v_P / R) cos(u_P), valid whenever the great-circle
    frame exists.
    """
    r = params.radius
    return (ctrl.evader_speed / r) * math.cos(ctrl.evader_heading) - (
        params.pursuer_speed / r
    ) * math.cos(ctrl.pursuer_heading)


def check_evader_speed(speed: float, params: GameParams) -> None:
    """Raise ValueError unless 0 <= speed <= evader top speed."""
    cap = params.evader_speed
    if not 0.0 <= speed <= cap * (1.0 + _SPEED_CAP_SLACK):
        raise ValueError(f"evader speed {speed} outside [0, {cap}]")


def advance(
    pursuer: SurfacePoint,
    evader: SurfacePoint,
    ctrl: ControlInput,
    dt: float,
    params: GameParams,
    config: RelativeConfig | None = None,
) -> tuple[SurfacePoint, SurfacePoint]:
    """Step both agents exactly along the great circles of their velocities.

    config may be passed to reuse a frame already computed for this state;
    degenerate configurations are rejected (dispersal logic must resolve
    them before stepping).
    """
    if dt < 0.0:
        raise ValueError(f"dt must be nonnegative, got {dt}")
    if config is None:
        config = relative_config(pursuer, evader)
    if config.degenerate:
        raise DegenerateConfigError(
            "cannot advance a degenerate configuration; apply dispersal controls"
        )
    check_evader_speed(ctrl.evader_speed, params)
    d_p = heading_to_velocity(pursuer, config.frame, ctrl.pursuer_heading, 1.0)
    new_pursuer = step_geodesic(pursuer, d_p, params.pursuer_speed * dt)
    if ctrl.evader_speed > 0.0 and dt > 0.0:
        d_e = heading_to_velocity(evader, config.frame, ctrl.evader_heading, 1.0)
        new_evader = step_geodesic(evader, d_e, ctrl.evader_speed * dt)
    else:
        new_evader = evader
    return new_pursuer, new_evader

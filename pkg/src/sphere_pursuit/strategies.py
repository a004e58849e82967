"""Equilibrium feedback strategies and the value of the capture-time game.

For any separation strictly between 0 and pi both players' equilibrium play
is pure great-circle motion: the pursuer chases along the circle, the evader
flees along it at top speed, and the game lasts R*alpha/((1-mu)*v_P). At the
antipodal separation the frame is ambiguous; the rate-of-loss saddle there
makes the evader stand still while the pursuer commits to any direction.
"""

from __future__ import annotations

import math
from typing import Callable

from .geometry import GameParams, RelativeConfig, SurfacePoint
from .kinematics import ControlInput, check_evader_speed

# Policy signatures used by the simulation engine. The evader policy is
# evaluated before the pursuer policy within a step.
PursuerPolicy = Callable[[SurfacePoint, SurfacePoint, RelativeConfig, float], float]
EvaderPolicy = Callable[[SurfacePoint, SurfacePoint, RelativeConfig, float], tuple[float, float]]

_ALPHA_SLACK = 1e-12


def value(alpha: float, params: GameParams) -> float:
    """Capture time under equilibrium play from angular separation alpha."""
    if not -_ALPHA_SLACK <= alpha <= math.pi + _ALPHA_SLACK:
        raise ValueError(f"alpha must lie in [0, pi], got {alpha}")
    return params.radius * alpha / ((1.0 - params.speed_ratio) * params.pursuer_speed)


def rate_of_loss(evader_speed: float, evader_heading: float, params: GameParams) -> float:
    """Per-unit-hold-time value lost by the evader committing a control blindly.

    Closed form of the vanishing-hold-time limit:
    (mu - (v_E / v_P) cos(u_E)) / (1 - mu). Nonnegative for all admissible
    controls; zero only at the fleeing equilibrium (v_E = mu v_P, u_E = 0).
    """
    check_evader_speed(evader_speed, params)
    mu = params.speed_ratio
    return (mu - (evader_speed / params.pursuer_speed) * math.cos(evader_heading)) / (1.0 - mu)


def dispersal_controls(tie_break: float, params: GameParams) -> ControlInput:
    """Equilibrium controls at the antipodal separation.

    Any pursuer direction is equilibrium; tie_break selects one (interpreted
    by the simulation engine as an angle in the pursuer's world-frame tangent
    plane). The evader stands still, so its recorded heading is immaterial.
    """
    return ControlInput(pursuer_heading=tie_break, evader_heading=0.0, evader_speed=0.0)


def equilibrium_controls(
    config: RelativeConfig, params: GameParams, tie_break: float = 0.0
) -> ControlInput:
    """Equilibrium controls for both players at any separation in (0, pi]."""
    if config.degenerate:
        if config.alpha < math.pi / 2.0:
            raise ValueError("game is over: agents are collocated")
        return dispersal_controls(tie_break, params)
    return ControlInput(pursuer_heading=0.0, evader_heading=0.0, evader_speed=params.evader_speed)


def equilibrium_pursuer_policy(params: GameParams) -> PursuerPolicy:
    """Pursuer policy: chase along the instantaneous great circle."""

    def policy(pursuer, evader, config, t):
        return 0.0

    return policy


def equilibrium_evader_policy(params: GameParams) -> EvaderPolicy:
    """Evader policy: flee along the instantaneous great circle at top speed."""
    speed = params.evader_speed

    def policy(pursuer, evader, config, t):
        return speed, 0.0

    return policy

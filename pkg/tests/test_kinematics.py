"""Kinematics: the angular-distance rate against exactly-stepped motion."""

from __future__ import annotations

import math

import numpy as np
import pytest

from sphere_pursuit.geometry import (
    DegenerateConfigError,
    GameParams,
    SurfacePoint,
    arc_between,
    heading_to_velocity,
    positions_at_separation,
    relative_config,
    step_geodesic,
)
from sphere_pursuit.kinematics import ControlInput, advance, alpha_rate

PARAMS = GameParams(radius=1.0, pursuer_speed=1.0, speed_ratio=0.5)


def _random_state(rng, params):
    """Random non-degenerate configuration with alpha in [0.2, pi - 0.2]."""
    while True:
        phi_p, phi_e = rng.uniform(-math.pi / 2, math.pi / 2, size=2)
        theta_p, theta_e = rng.uniform(-math.pi, math.pi, size=2)
        from sphere_pursuit.geometry import from_spherical

        pursuer = from_spherical(phi_p, theta_p, params)
        evader = from_spherical(phi_e, theta_e, params)
        cfg = relative_config(pursuer, evader)
        if 0.2 <= cfg.alpha <= math.pi - 0.2:
            return pursuer, evader, cfg


def _alpha_after(pursuer, evader, cfg, ctrl, params, h):
    """Separation after holding controls for h along exact geodesics.

    Negative h steps both agents backward along the same circles.
    """
    d_p = heading_to_velocity(pursuer, cfg.frame, ctrl.pursuer_heading, 1.0)
    d_e = heading_to_velocity(evader, cfg.frame, ctrl.evader_heading, 1.0)
    sign = 1.0 if h >= 0 else -1.0
    d_p = tuple(sign * c for c in d_p)
    d_e = tuple(sign * c for c in d_e)
    new_p = step_geodesic(pursuer, d_p, params.pursuer_speed * abs(h))
    new_e = step_geodesic(evader, d_e, ctrl.evader_speed * abs(h))
    return relative_config(new_p, new_e).alpha


class TestAlphaRate:
    def test_equilibrium_controls(self):
        ctrl = ControlInput(pursuer_heading=0.0, evader_heading=0.0, evader_speed=0.5)
        assert alpha_rate(ctrl, PARAMS) == pytest.approx(-0.5, abs=1e-15)

    def test_standing_evader(self):
        ctrl = ControlInput(pursuer_heading=0.0, evader_heading=1.3, evader_speed=0.0)
        assert alpha_rate(ctrl, PARAMS) == pytest.approx(-1.0, abs=1e-15)

    def test_matches_central_difference(self):
        # oracle: central finite difference of alpha along exactly-stepped
        # trajectories, second-order accurate so well under 1e-6 at h = 1e-4
        rng = np.random.default_rng(42)
        h = 1e-4
        for _ in range(20):
            pursuer, evader, cfg = _random_state(rng, PARAMS)
            ctrl = ControlInput(
                pursuer_heading=rng.uniform(0, 2 * math.pi),
                evader_heading=rng.uniform(0, 2 * math.pi),
                evader_speed=rng.uniform(0, PARAMS.evader_speed),
            )
            forward = _alpha_after(pursuer, evader, cfg, ctrl, PARAMS, h)
            backward = _alpha_after(pursuer, evader, cfg, ctrl, PARAMS, -h)
            fd = (forward - backward) / (2 * h)
            assert abs(fd - alpha_rate(ctrl, PARAMS)) <= 1e-6

    def test_forward_difference_first_order(self):
        # forward differences converge at first order: error shrinks like h
        rng = np.random.default_rng(7)
        ratios = []
        for _ in range(20):
            pursuer, evader, cfg = _random_state(rng, PARAMS)
            ctrl = ControlInput(
                pursuer_heading=rng.uniform(0, 2 * math.pi),
                evader_heading=rng.uniform(0, 2 * math.pi),
                evader_speed=rng.uniform(0, PARAMS.evader_speed),
            )
            rate = alpha_rate(ctrl, PARAMS)
            errs = []
            for h in (1e-2, 1e-3, 1e-4):
                alpha_h = _alpha_after(pursuer, evader, cfg, ctrl, PARAMS, h)
                errs.append(abs((alpha_h - cfg.alpha) / h - rate))
            assert errs[0] >= errs[1] >= errs[2]
            if errs[0] > 1e-8:
                ratios.append(errs[1] / errs[0])
        assert 0.05 <= float(np.median(ratios)) <= 0.2


class TestAdvance:
    def test_zero_dt_identity(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        ctrl = ControlInput(0.3, 1.2, 0.4)
        new_p, new_e = advance(pursuer, evader, ctrl, 0.0, PARAMS)
        assert new_p == pytest.approx(pursuer, abs=1e-15)
        assert new_e == evader

    def test_equilibrium_step_matches_rate_integration(self):
        # both agents ride the same great circle, so the decrement is exact
        dt = 1e-3
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        ctrl = ControlInput(0.0, 0.0, PARAMS.evader_speed)
        new_p, new_e = advance(pursuer, evader, ctrl, dt, PARAMS)
        expected = 1.0 + alpha_rate(ctrl, PARAMS) * dt
        assert relative_config(new_p, new_e).alpha == pytest.approx(expected, abs=dt * dt)

    def test_sidestep_arc_bookkeeping(self):
        dt = 1e-3
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        ctrl = ControlInput(0.0, math.pi / 2, PARAMS.evader_speed)
        _, new_e = advance(pursuer, evader, ctrl, dt, PARAMS)
        assert arc_between(new_e, evader) == pytest.approx(ctrl.evader_speed * dt, abs=1e-10)

    def test_norms_preserved(self):
        pursuer, evader = positions_at_separation(2.0, PARAMS)
        ctrl = ControlInput(0.8, 2.1, 0.3)
        for _ in range(50):
            pursuer, evader = advance(pursuer, evader, ctrl, 0.01, PARAMS)
        for point in (pursuer, evader):
            n = math.sqrt(point.x**2 + point.y**2 + point.z**2)
            assert abs(n - PARAMS.radius) <= 1e-12 * PARAMS.radius

    def test_pure_chase_stays_on_initial_circle(self):
        pursuer, evader = positions_at_separation(2.5, PARAMS)
        normal = relative_config(pursuer, evader).frame.normal
        ctrl = ControlInput(0.0, 0.0, PARAMS.evader_speed)
        for _ in range(2000):
            pursuer, evader = advance(pursuer, evader, ctrl, 1e-3, PARAMS)
            for point in (pursuer, evader):
                off_plane = abs(
                    point.x * normal[0] + point.y * normal[1] + point.z * normal[2]
                )
                assert off_plane <= 1e-9 * PARAMS.radius

    def test_rejects_degenerate(self):
        north = SurfacePoint(0.0, 0.0, 1.0)
        south = SurfacePoint(0.0, 0.0, -1.0)
        with pytest.raises(DegenerateConfigError):
            advance(north, south, ControlInput(0.0, 0.0, 0.0), 0.1, PARAMS)

    def test_rejects_overspeed_evader(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        with pytest.raises(ValueError):
            advance(pursuer, evader, ControlInput(0.0, 0.0, 0.8), 0.1, PARAMS)

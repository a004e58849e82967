"""Two-pursuer intercepts and target guarding."""

from __future__ import annotations

import math

import numpy as np
import pytest

from sphere_pursuit.apollonius import boundary, critical_alpha, intercept_point
from sphere_pursuit.engagements import (
    DegenerateOverlapError,
    GeodesicParallelPursuer,
    PolylineEvader,
    TargetRegion,
    TwoPursuerConfig,
    boundary_intersections,
    evader_wins_guarding,
    geodesic_parallel_heading,
    guarding_threshold,
    pursuer_wins_guarding,
    two_pursuer_intercept,
)
from sphere_pursuit.geometry import (
    GameParams,
    SurfacePoint,
    arc_between,
    from_spherical,
    positions_at_separation,
    relative_config,
)
from sphere_pursuit.sim import run

PARAMS = GameParams(radius=1.0, pursuer_speed=1.0, speed_ratio=0.5)


def _joint_config():
    mu = 0.5
    alpha_1 = 0.9 * math.pi * (1 - mu)
    return TwoPursuerConfig(
        alpha_1=alpha_1,
        alpha_2=0.8 * alpha_1,
        lambda_o=0.4 * math.pi,
        params_1=PARAMS,
        params_2=PARAMS,
    )


class TestTwoPursuerConfig:
    def test_rejects_alpha_out_of_range(self):
        with pytest.raises(ValueError):
            TwoPursuerConfig(0.0, 1.0, 0.5, PARAMS, PARAMS)

    def test_rejects_mismatched_radii(self):
        other = GameParams(radius=2.0, pursuer_speed=1.0, speed_ratio=0.5)
        with pytest.raises(ValueError):
            TwoPursuerConfig(1.0, 1.0, 0.5, PARAMS, other)

    def test_rejects_inconsistent_evader_speeds(self):
        other = GameParams(radius=1.0, pursuer_speed=1.0, speed_ratio=0.4)
        with pytest.raises(ValueError):
            TwoPursuerConfig(1.0, 1.0, 0.5, PARAMS, other)

    def test_positions(self):
        cfg = _joint_config()
        p1, p2, evader = cfg.positions()
        assert relative_config(p1, evader).alpha == pytest.approx(cfg.alpha_1, abs=1e-12)
        assert relative_config(p2, evader).alpha == pytest.approx(cfg.alpha_2, abs=1e-12)
        assert math.atan2(p2.y, p2.x) == pytest.approx(cfg.lambda_o, abs=1e-12)


class TestTwoPursuerIntercept:
    def test_rejects_scope_violation(self):
        cfg = TwoPursuerConfig(1.6, 1.0, 0.5, PARAMS, PARAMS)  # 1.6 > pi/2
        with pytest.raises(ValueError):
            two_pursuer_intercept(cfg)

    def test_remote_second_pursuer_reduces_to_solo(self):
        cfg = TwoPursuerConfig(0.3, 0.99 * math.pi / 2, math.pi, PARAMS, PARAMS)
        result = two_pursuer_intercept(cfg)
        assert result.case_tag == "P1_solo"
        p1, _, evader = cfg.positions()
        solo, solo_time = intercept_point(p1, evader, PARAMS)
        assert arc_between(result.point, solo) <= 1e-12
        assert result.time == pytest.approx(solo_time, abs=1e-12)

    def test_joint_case(self):
        cfg = _joint_config()
        result = two_pursuer_intercept(cfg)
        assert result.case_tag == "joint_boundary"
        p1, p2, evader = cfg.positions()
        t_e = arc_between(evader, result.point) / PARAMS.evader_speed
        t_1 = arc_between(p1, result.point) / PARAMS.pursuer_speed
        t_2 = arc_between(p2, result.point) / PARAMS.pursuer_speed
        assert max(t_e, t_1, t_2) - min(t_e, t_1, t_2) <= 1e-6
        assert result.time == pytest.approx(t_e, abs=1e-12)
        # on both boundaries: the time balance bounds the arc distance to the
        # true curve via its gradient floor (1/mu - 1)/v_P
        gradient_floor = (1 / PARAMS.speed_ratio - 1) / PARAMS.pursuer_speed
        assert abs(t_e - t_1) / gradient_floor <= 1e-6 * PARAMS.radius
        assert abs(t_e - t_2) / gradient_floor <= 1e-6 * PARAMS.radius

    def test_joint_point_maximizes_evader_arc(self):
        cfg = _joint_config()
        result = two_pursuer_intercept(cfg)
        p1, p2, evader = cfg.positions()
        b1 = boundary(p1, evader, PARAMS)
        b2 = boundary(p2, evader, PARAMS)
        crossings = boundary_intersections(b1, b2)
        assert len(crossings) == 2
        best = max(arc_between(evader, c) for c in crossings)
        assert arc_between(evader, result.point) == pytest.approx(best, abs=1e-12)

    def test_symmetric_config_lands_on_bisecting_meridian(self):
        cfg = TwoPursuerConfig(1.2, 1.2, 0.8, PARAMS, PARAMS)
        result = two_pursuer_intercept(cfg)
        assert result.case_tag == "joint_boundary"
        longitude = math.atan2(result.point.y, result.point.x)
        off = math.remainder(longitude - cfg.lambda_o / 2.0, math.pi)
        assert abs(off) <= 1e-8


class TestBoundaryIntersections:
    def test_two_crossings_match_sign_scan(self):
        # oracle: count sign changes of the time advantage along the samples
        cfg = _joint_config()
        p1, p2, evader = cfg.positions()
        b1 = boundary(p1, evader, PARAMS)
        b2 = boundary(p2, evader, PARAMS)
        g = [
            arc_between(SurfacePoint(*q), p2) / PARAMS.pursuer_speed
            - arc_between(SurfacePoint(*q), evader) / PARAMS.evader_speed
            for q in b1.points
        ]
        changes = sum(1 for a, b in zip(g, g[1:]) if a * b < 0)
        crossings = boundary_intersections(b1, b2)
        assert changes == 2
        assert len(crossings) == 2

    def test_nested_domains_have_no_crossings(self):
        cfg = TwoPursuerConfig(0.5, 1.4, 0.0, PARAMS, PARAMS)
        p1, p2, evader = cfg.positions()
        b1 = boundary(p1, evader, PARAMS)
        b2 = boundary(p2, evader, PARAMS)
        assert boundary_intersections(b1, b2) == []

    def test_identical_boundaries_report_overlap(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        b1 = boundary(pursuer, evader, PARAMS)
        b2 = boundary(pursuer, evader, PARAMS)
        with pytest.raises(DegenerateOverlapError):
            boundary_intersections(b1, b2)

    def test_rejects_different_evaders(self):
        b1 = boundary(*positions_at_separation(1.0, PARAMS), PARAMS)
        pursuer = from_spherical(0.2, 0.1, PARAMS)
        evader = from_spherical(0.9, 0.1, PARAMS)
        b2 = boundary(pursuer, evader, PARAMS)
        with pytest.raises(ValueError):
            boundary_intersections(b1, b2)


class TestGuardingVerdicts:
    def test_threshold_half_speed(self):
        assert guarding_threshold(PARAMS) == pytest.approx(math.pi / 3, abs=1e-12)

    def test_evader_wins_when_target_at_evader(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        b = boundary(pursuer, evader, PARAMS)
        target = TargetRegion(center=evader, angular_radius=0.2)
        assert evader_wins_guarding(b, target)

    def test_evader_loses_remote_tiny_target(self):
        pursuer, evader = positions_at_separation(0.6, PARAMS)
        b = boundary(pursuer, evader, PARAMS)
        south = SurfacePoint(0.0, 0.0, -1.0)
        target = TargetRegion(center=south, angular_radius=0.05)
        assert not evader_wins_guarding(b, target)

    def test_tangent_target_counts_as_reached(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        b = boundary(pursuer, evader, PARAMS)
        center = from_spherical(-0.9, math.pi, PARAMS)
        radius = float(np.min(b.arcs_to(center)))  # exactly tangent to a sample
        target = TargetRegion(center=center, angular_radius=radius)
        assert evader_wins_guarding(b, target)
        shrunk = TargetRegion(center=center, angular_radius=radius * 0.98)
        assert not evader_wins_guarding(b, shrunk)

    def test_pursuer_wins_disjoint_below_threshold(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        b = boundary(pursuer, evader, PARAMS)
        south = SurfacePoint(0.0, 0.0, -1.0)
        target = TargetRegion(center=south, angular_radius=0.5)
        assert pursuer_wins_guarding(b, target, 1.0, PARAMS)

    def test_pursuer_cannot_guard_above_threshold(self):
        alpha = 1.2  # above pi/3 for mu = 0.5
        pursuer, evader = positions_at_separation(alpha, PARAMS)
        b = boundary(pursuer, evader, PARAMS)
        south = SurfacePoint(0.0, 0.0, -1.0)
        for radius in (0.05, 1.0):
            target = TargetRegion(center=south, angular_radius=radius)
            assert not pursuer_wins_guarding(b, target, alpha, PARAMS)

    def test_target_region_validation(self):
        with pytest.raises(ValueError):
            TargetRegion(center=SurfacePoint(0.0, 0.0, 1.0), angular_radius=0.0)


class TestGeodesicParallelHeading:
    def test_stern_chase_is_pure_pursuit(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        assert geodesic_parallel_heading(pursuer, evader, math.pi, PARAMS) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_head_on_is_pure_pursuit(self):
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        assert geodesic_parallel_heading(pursuer, evader, 0.0, PARAMS) == pytest.approx(
            0.0, abs=1e-12
        )

    def test_sideways_against_composed_oracle(self):
        # oracle: solve the reduced arrival relation from scratch, place the
        # boundary point by hand, and take the initial bearing by hand
        pursuer, evader = positions_at_separation(1.0, PARAMS)
        cfg = relative_config(pursuer, evader)

        lo, hi = 1e-9, 1.5
        f = lambda d: math.cos(2 * d) - math.cos(1.0) * math.cos(d)
        f_lo = f(lo)
        while hi - lo > 1e-14:
            mid = 0.5 * (lo + hi)
            if (f(mid) > 0) == (f_lo > 0):
                lo = mid
            else:
                hi = mid
        delta = 0.5 * (lo + hi)

        n = np.asarray(cfg.frame.normal)
        e = np.asarray(evader, dtype=float)
        target = math.cos(delta) * e + math.sin(delta) * n  # heading pi/2 from E
        p_hat = np.asarray(pursuer, dtype=float)
        w = target - float(target @ p_hat) * p_hat
        w /= np.linalg.norm(w)
        expected = math.atan2(float(w @ n), float(w @ np.asarray(cfg.frame.tangent_p)))

        got = geodesic_parallel_heading(pursuer, evader, math.pi / 2, PARAMS)
        assert got == pytest.approx(expected, abs=1e-9)


class TestGuardingPlayouts:
    def test_polyline_validation(self):
        with pytest.raises(ValueError):
            PolylineEvader(PARAMS, [], 1.0)
        with pytest.raises(ValueError):
            PolylineEvader(PARAMS, [0.0], 0.0)

    def test_domain_never_escapes_and_capture_is_bounded(self):
        alpha0 = 1.0
        assert alpha0 <= guarding_threshold(PARAMS)
        pursuer0, evader0 = positions_at_separation(alpha0, PARAMS)
        b0 = boundary(pursuer0, evader0, PARAMS)
        dt = 1e-3
        tol = (1 - PARAMS.speed_ratio) * PARAMS.pursuer_speed * dt / PARAMS.radius
        bound = PARAMS.radius * alpha0 / ((1 - PARAMS.speed_ratio) * PARAMS.pursuer_speed)
        rng = np.random.default_rng(11)
        for _ in range(5):
            evader_policy = PolylineEvader(
                PARAMS, rng.uniform(0, 2 * math.pi, size=5), segment_duration=bound / 5
            )
            pursuer_policy = GeodesicParallelPursuer(PARAMS, evader_policy)
            traj = run(
                pursuer0,
                evader0,
                pursuer_policy,
                evader_policy,
                dt,
                bound + 10 * dt,
                PARAMS,
                capture_tol=tol,
            )
            assert traj.capture_time is not None
            assert traj.capture_time <= bound + 2 * dt
            for frac in (0.25, 0.5, 0.75):
                step = traj.steps[int(frac * traj.capture_time / dt)]
                b_now = boundary(step.pursuer, step.evader, PARAMS)
                assert all(
                    b0.contains_point(SurfacePoint(*q)) for q in b_now.points
                )

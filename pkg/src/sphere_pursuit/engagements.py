"""Multi-agent constructions on top of dominance domains.

Two cooperating pursuers against one evader: the min-max intercept point is
either a solo intercept that the other pursuer's domain already covers, or
the deeper of the two crossing points of the domain boundaries. Target
guarding: the evader wins when its domain touches the target cap; a single
pursuer wins when the domain misses the cap and the separation is small
enough for the geodesic parallel strategy, which keeps the domain shrinking
inside its initial footprint for any evader polyline of geodesic arcs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .apollonius import (
    ApolloniusBoundary,
    NumericalBreakdownError,
    boundary,
    contains,
    critical_alpha,
    delta_of_lambda,
    intercept_point,
    place_boundary_point,
)
from .geometry import (
    DegenerateConfigError,
    GameParams,
    RelativeConfig,
    SurfacePoint,
    Vec3,
    _dot,
    _unit,
    arc_between,
    from_spherical,
    heading_to_velocity,
    relative_config,
)

__all__ = [
    "DegenerateOverlapError",
    "GeodesicParallelPursuer",
    "InterceptResult",
    "PolylineEvader",
    "TargetRegion",
    "TwoPursuerConfig",
    "UnresolvedEngagementError",
    "boundary_intersections",
    "evader_wins_guarding",
    "geodesic_parallel_heading",
    "guarding_threshold",
    "pursuer_wins_guarding",
    "two_pursuer_intercept",
]

# Refinement tolerance for boundary-crossing headings, radians.
_INTERSECTION_LAM_TOL = 1e-10

# Arc separation under which two refined intersections count as one point.
_DEDUPE_ARC = 1e-8


class DegenerateOverlapError(NumericalBreakdownError):
    """The two domain boundaries coincide; crossings are not isolated points."""


class UnresolvedEngagementError(NumericalBreakdownError):
    """No intercept case applied; message carries the diagnostic geometry."""


@dataclass(frozen=True)
class TwoPursuerConfig:
    """Two pursuers against one evader at the north pole.

    alpha_1, alpha_2 are the pursuers' angular offsets from the evader,
    lambda_o the longitudinal offset between them. Each pursuer carries its
    own speed and ratio; both ratios must describe the same evader top speed.
    """

    alpha_1: float
    alpha_2: float
    lambda_o: float
    params_1: GameParams
    params_2: GameParams

    def __post_init__(self) -> None:
        for name, a in (("alpha_1", self.alpha_1), ("alpha_2", self.alpha_2)):
            if not 0.0 < a < math.pi:
                raise ValueError(f"{name} must lie strictly inside (0, pi), got {a}")
        r1, r2 = self.params_1.radius, self.params_2.radius
        if abs(r1 - r2) > 1e-12 * max(r1, r2):
            raise ValueError(f"pursuers live on different spheres: radii {r1} vs {r2}")
        v1, v2 = self.params_1.evader_speed, self.params_2.evader_speed
        if abs(v1 - v2) > 1e-9 * max(v1, v2):
            raise ValueError(
                f"speed ratios disagree on the evader's top speed: {v1} vs {v2}"
            )

    def positions(self) -> tuple[SurfacePoint, SurfacePoint, SurfacePoint]:
        """(pursuer 1, pursuer 2, evader) placed on the sphere."""
        evader = from_spherical(math.pi / 2.0, 0.0, self.params_1)
        p1 = from_spherical(math.pi / 2.0 - self.alpha_1, 0.0, self.params_1)
        p2 = from_spherical(math.pi / 2.0 - self.alpha_2, self.lambda_o, self.params_2)
        return p1, p2, evader


@dataclass(frozen=True)
class InterceptResult:
    """Outcome of a two-pursuer engagement.

    case_tag is one of P1_solo, P2_solo, joint_boundary. note carries a
    diagnostic when a fallback sub-case (nested domains) was taken.
    """

    point: SurfacePoint
    time: float
    case_tag: str
    note: str | None = None


@dataclass(frozen=True)
class TargetRegion:
    """Spherical cap target: all points within angular_radius of center."""

    center: SurfacePoint
    angular_radius: float

    def __post_init__(self) -> None:
        if not 0.0 < self.angular_radius < math.pi:
            raise ValueError(
                f"angular_radius must lie strictly inside (0, pi), got {self.angular_radius}"
            )

    def contains_point(self, point: SurfacePoint) -> bool:
        radius = math.sqrt(_dot(self.center, self.center))
        return arc_between(self.center, point) <= self.angular_radius * radius


def two_pursuer_intercept(cfg: TwoPursuerConfig, n_samples: int = 721) -> InterceptResult:
    """Min-max intercept point for two cooperating pursuers.

    Both separations must be below their critical angles (each solo
    intercept then lies on its own domain boundary). Case order: a solo
    intercept covered by the other domain wins outright; otherwise the
    boundaries are crossed and the crossing farthest from the evader is the
    intercept. Nested domains with no crossings fall back to the inner
    pursuer's solo intercept, flagged in the note.
    """
    for name, a, p in (
        ("alpha_1", cfg.alpha_1, cfg.params_1),
        ("alpha_2", cfg.alpha_2, cfg.params_2),
    ):
        if a >= critical_alpha(p):
            raise ValueError(
                f"{name}={a} is not below the critical separation {critical_alpha(p)}"
            )
    p1, p2, evader = cfg.positions()
    i1, t1 = intercept_point(p1, evader, cfg.params_1)
    if contains(i1, p2, evader, cfg.params_2):
        return InterceptResult(i1, t1, "P1_solo")
    i2, t2 = intercept_point(p2, evader, cfg.params_2)
    if contains(i2, p1, evader, cfg.params_1):
        return InterceptResult(i2, t2, "P2_solo")

    b1 = boundary(p1, evader, cfg.params_1, n_samples)
    b2 = boundary(p2, evader, cfg.params_2, n_samples)
    crossings = boundary_intersections(b1, b2)
    if not crossings:
        inside_2 = all(b2.contains_point(SurfacePoint(*pt)) for pt in b1.points)
        inside_1 = all(b1.contains_point(SurfacePoint(*pt)) for pt in b2.points)
        if inside_2:
            return InterceptResult(
                i1, t1, "P1_solo", note="domains nested (1 inside 2); solo fallback"
            )
        if inside_1:
            return InterceptResult(
                i2, t2, "P2_solo", note="domains nested (2 inside 1); solo fallback"
            )
        raise UnresolvedEngagementError(
            "boundaries do not cross and neither solo case applies: "
            f"alpha_1={cfg.alpha_1!r}, alpha_2={cfg.alpha_2!r}, lambda_o={cfg.lambda_o!r}"
        )
    arcs = [arc_between(evader, c) for c in crossings]
    best = max(range(len(crossings)), key=arcs.__getitem__)
    time = arcs[best] / cfg.params_1.evader_speed
    return InterceptResult(crossings[best], time, "joint_boundary")


def boundary_intersections(
    b1: ApolloniusBoundary, b2: ApolloniusBoundary
) -> list[SurfacePoint]:
    """Points where the two domain boundaries cross.

    Walks b1's samples, finds sign changes of the second pursuer's
    time-advantage along them, and refines each crossing by bisection in
    the boundary heading. Returns a possibly empty list. Coinciding
    boundaries (the advantage vanishes along the whole curve) raise
    DegenerateOverlapError since crossings are not isolated there.
    """
    if arc_between(b1.evader, b2.evader) > 1e-9 * b1.params.radius:
        raise ValueError("boundaries were built around different evader positions")
    v_e = b1.params.evader_speed
    v_p2 = b2.params.pursuer_speed
    p2 = b2.pursuer
    evader = b1.evader

    g = b1.arcs_to(p2) / v_p2 - b1.arcs_to(evader) / v_e
    scale = b1.params.radius / v_p2
    if float(np.max(np.abs(g))) < 1e-10 * scale:
        raise DegenerateOverlapError(
            "domain boundaries coincide; crossing points are not isolated"
        )

    def advantage(lam: float) -> float:
        pt = b1.point_at(lam)
        return arc_between(pt, p2) / v_p2 - arc_between(pt, evader) / v_e

    found: list[SurfacePoint] = []
    lams = b1.lams
    for k in range(len(lams) - 1):
        gk, gk1 = float(g[k]), float(g[k + 1])
        if gk == 0.0:
            found.append(SurfacePoint(*(float(c) for c in b1.points[k])))
            continue
        if gk * gk1 >= 0.0:
            continue
        la, lb = float(lams[k]), float(lams[k + 1])
        fa = gk
        while lb - la > _INTERSECTION_LAM_TOL:
            lm = 0.5 * (la + lb)
            fm = advantage(lm)
            if fm == 0.0:
                la = lb = lm
                break
            if (fa > 0.0) == (fm > 0.0):
                la, fa = lm, fm
            else:
                lb = lm
        found.append(b1.point_at(0.5 * (la + lb)))

    deduped: list[SurfacePoint] = []
    for pt in found:
        if all(arc_between(pt, q) > _DEDUPE_ARC * b1.params.radius for q in deduped):
            deduped.append(pt)
    return deduped


def guarding_threshold(params: GameParams) -> float:
    """Largest separation at which the geodesic parallel strategy guards."""
    mu = params.speed_ratio
    return math.pi * (1.0 - mu) / (1.0 + mu)


def evader_wins_guarding(b: ApolloniusBoundary, target: TargetRegion) -> bool:
    """Whether the dominance domain reaches the target cap.

    True when any point of the cap is inside the domain: the evader starts
    inside the cap, or the cap center is dominated, or the sampled boundary
    enters the cap (tangency at sampling resolution counts, the domain is
    closed).
    """
    radius = b.params.radius
    cap_arc = target.angular_radius * radius
    if arc_between(b.evader, target.center) <= cap_arc:
        return True
    if b.contains_point(target.center):
        return True
    return bool(float(np.min(b.arcs_to(target.center))) <= cap_arc)


def pursuer_wins_guarding(
    b: ApolloniusBoundary, target: TargetRegion, alpha: float, params: GameParams
) -> bool:
    """Whether a single pursuer can guard the cap from this configuration.

    Requires both a domain disjoint from the cap and a separation at or
    below the geodesic-parallel threshold.
    """
    return (not evader_wins_guarding(b, target)) and alpha <= guarding_threshold(params)


def geodesic_parallel_heading(
    pursuer: SurfacePoint,
    evader: SurfacePoint,
    lam: float,
    params: GameParams,
    config: RelativeConfig | None = None,
) -> float:
    """Pursuer heading toward the boundary point matching the evader's heading.

    lam is the evader's motion heading measured from the direction toward
    the pursuer. The returned heading is measured in the great-circle frame
    at the pursuer.
    """
    if config is None:
        config = relative_config(pursuer, evader)
    if config.degenerate:
        raise DegenerateConfigError("geodesic parallel heading needs a great-circle frame")
    delta = delta_of_lambda(lam, config.alpha, params)
    target = place_boundary_point(evader, config.frame, lam, delta, params.radius)
    p_hat = _unit(pursuer)
    cos_c = _dot(target, p_hat) / params.radius
    w = (
        target.x / params.radius - cos_c * p_hat[0],
        target.y / params.radius - cos_c * p_hat[1],
        target.z / params.radius - cos_c * p_hat[2],
    )
    if math.sqrt(_dot(w, w)) < 1e-12:
        raise DegenerateConfigError(
            "boundary point is collinear with the pursuer; bearing undefined"
        )
    w = _unit(w)
    return math.atan2(_dot(w, config.frame.normal), _dot(w, config.frame.tangent_p))


class PolylineEvader:
    """Evader policy: fixed-count sequence of world-frame geodesic segments.

    Segment headings are interpreted in the great-circle frame at each
    segment start and then held as world directions, so every segment is a
    geodesic arc however the frame rotates. Runs at top speed. The policy
    tracks its own direction by parallel transport along the evader's
    motion and exposes the instantaneous heading for pursuit policies.
    """

    def __init__(
        self, params: GameParams, headings: Sequence[float], segment_duration: float
    ) -> None:
        if len(headings) == 0:
            raise ValueError("at least one segment heading is required")
        if segment_duration <= 0.0:
            raise ValueError(f"segment_duration must be positive, got {segment_duration}")
        self.params = params
        self.headings = [float(u) for u in headings]
        self.segment_duration = float(segment_duration)
        self._direction: Vec3 | None = None
        self._segment = -1
        self._prev_evader: SurfacePoint | None = None

    def __call__(
        self, pursuer: SurfacePoint, evader: SurfacePoint, config: RelativeConfig, t: float
    ) -> tuple[float, float]:
        self._update(evader, config, t)
        d = self._direction
        te, n = config.frame.tangent_e, config.frame.normal
        heading = math.atan2(_dot(d, n), _dot(d, te))
        return self.params.evader_speed, heading

    def _update(self, evader: SurfacePoint, config: RelativeConfig, t: float) -> None:
        if (
            self._direction is not None
            and self._prev_evader is not None
            and evader != self._prev_evader
        ):
            # Transport the held direction along the evader's own geodesic.
            prev_hat = _unit(self._prev_evader)
            theta = arc_between(self._prev_evader, evader) / self.params.radius
            ct, st = math.cos(theta), math.sin(theta)
            d = self._direction
            moved = (
                ct * d[0] - st * prev_hat[0],
                ct * d[1] - st * prev_hat[1],
                ct * d[2] - st * prev_hat[2],
            )
            e_hat = _unit(evader)
            radial = _dot(moved, e_hat)
            self._direction = _unit(
                (moved[0] - radial * e_hat[0], moved[1] - radial * e_hat[1], moved[2] - radial * e_hat[2])
            )
        segment = min(int(t / self.segment_duration + 1e-9), len(self.headings) - 1)
        if segment != self._segment:
            self._segment = segment
            self._direction = heading_to_velocity(
                evader, config.frame, self.headings[segment], 1.0
            )
        self._prev_evader = evader

    def heading_lambda(self, config: RelativeConfig) -> float:
        """Current heading measured from the direction toward the pursuer."""
        if self._direction is None:
            raise RuntimeError("evader policy has not been evaluated yet this playout")
        d = self._direction
        te, n = config.frame.tangent_e, config.frame.normal
        return math.atan2(_dot(d, n), -_dot(d, te))


class GeodesicParallelPursuer:
    """Pursuer policy implementing the geodesic parallel strategy.

    Reads the paired evader policy's instantaneous heading; the simulation
    engine evaluates the evader before the pursuer inside each step, so the
    heading is current.
    """

    def __init__(self, params: GameParams, evader_policy: PolylineEvader) -> None:
        self.params = params
        self.evader_policy = evader_policy

    def __call__(
        self, pursuer: SurfacePoint, evader: SurfacePoint, config: RelativeConfig, t: float
    ) -> float:
        lam = self.evader_policy.heading_lambda(config)
        return geodesic_parallel_heading(pursuer, evader, lam, self.params, config=config)

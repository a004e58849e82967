"""The evader's dominance domain on the sphere and the equilibrium intercept.

For initial positions P and E the dominance domain is the closed set of
points the evader can reach no later than the pursuer, both moving along
geodesics at top speed. Its boundary is swept by a heading angle lam at the
evader, measured from the direction toward the pursuer (positive toward the
frame normal). For each lam the evader travel arc delta solves the
simultaneous-arrival relation

    cos(delta / (mu R)) = cos(delta / R) cos(alpha)
                          + sin(alpha) cos(lam) sin(delta / R),

where alpha is the angular separation; the pursuer's arc to the same point
is delta / mu, so both arrive at time delta / (mu v_P). The relation has a
unique root in the bracket below, symmetric in the sign of lam, and its
endpoints have closed forms:

    delta(0)  = alpha R mu / (1 + mu)
    delta(pi) = alpha R mu / (1 - mu)            for alpha <= pi (1 - mu)
    delta(pi) = R mu (2 pi - alpha) / (1 + mu)   for alpha >  pi (1 - mu)

The switch angle pi (1 - mu) is the critical separation: at or below it the
equilibrium intercept point of the one-on-one game lies on the domain
boundary, above it the intercept point falls outside the domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .geometry import (
    DegenerateConfigError,
    GameParams,
    GreatCircleFrame,
    SurfacePoint,
    arc_between,
    relative_config,
    step_geodesic,
)
from .strategies import value

__all__ = [
    "ApolloniusBoundary",
    "BoundarySample",
    "BracketError",
    "MonotonicityError",
    "NumericalBreakdownError",
    "boundary",
    "classify_intercept",
    "contains",
    "critical_alpha",
    "delta_of_lambda",
    "intercept_point",
]

DEFAULT_N_SAMPLES = 721  # 0.5 degree spacing over the full closed sweep

# Bracket construction for the root solve, in units of delta / R.
_BRACKET_LO = 1e-9
_BRACKET_SLACK = 1e-6
_BISECT_TOL = 1e-13
_RESCUE_RESIDUAL = 1e-9
_RESIDUAL_LIMIT = 1e-12

# Default membership slack, in units of R of arc (see contains()).
_CONTAINS_TOL = 1e-9


class NumericalBreakdownError(RuntimeError):
    """A numerical procedure lost its guarantees; results would be unreliable."""


class BracketError(NumericalBreakdownError):
    """The root bracket failed to enclose a sign change."""

    def __init__(self, alpha: float, lam: float, bracket: tuple[float, float], detail: str):
        self.alpha = alpha
        self.lam = lam
        self.bracket = bracket
        super().__init__(
            f"root bracket failed at alpha={alpha!r}, lambda={lam!r}, "
            f"bracket={bracket!r}: {detail}"
        )


class MonotonicityError(NumericalBreakdownError):
    """Sampled boundary arcs were not strictly increasing over [0, pi]."""


def critical_alpha(params: GameParams) -> float:
    """Separation below which the equilibrium intercept lies on the boundary."""
    return math.pi * (1.0 - params.speed_ratio)


def _flee_bound(alpha: float, mu: float) -> float:
    """Closed-form delta(pi) / R, the largest boundary arc from the evader."""
    if alpha <= math.pi * (1.0 - mu):
        return alpha * mu / (1.0 - mu)
    return mu * (2.0 * math.pi - alpha) / (1.0 + mu)


def _residual(x: float, cos_lam: float, cos_a: float, sin_a: float, inv_mu: float) -> float:
    return math.cos(x * inv_mu) - math.cos(x) * cos_a - sin_a * cos_lam * math.sin(x)


def _residual_slope(x: float, cos_lam: float, cos_a: float, sin_a: float, inv_mu: float) -> float:
    return -inv_mu * math.sin(x * inv_mu) + math.sin(x) * cos_a - sin_a * cos_lam * math.cos(x)


def delta_of_lambda(lam: float, alpha: float, params: GameParams) -> float:
    """Evader travel arc to the boundary point at heading lam.

    Solves the simultaneous-arrival relation by bracketed bisection on
    [1e-9 R, delta(pi) + 1e-6 R] followed by a guarded Newton polish; the
    returned root has residual at most 1e-12. The relation is even in lam,
    so any heading is accepted.

    At the critical separation the lam = pi root is tangent (no sign change
    exists); the closed-form bound is then itself the root and is returned
    after a residual check. Any other bracket failure raises BracketError,
    which signals breakdown near a degenerate separation.
    """
    if not 0.0 < alpha < math.pi:
        raise ValueError(f"alpha must lie strictly inside (0, pi), got {alpha}")
    mu = params.speed_ratio
    inv_mu = 1.0 / mu
    cos_lam = math.cos(lam)
    cos_a, sin_a = math.cos(alpha), math.sin(alpha)
    bound = _flee_bound(alpha, mu)
    lo, hi = _BRACKET_LO, bound + _BRACKET_SLACK
    f_lo = _residual(lo, cos_lam, cos_a, sin_a, inv_mu)
    f_hi = _residual(hi, cos_lam, cos_a, sin_a, inv_mu)
    if f_lo <= 0.0:
        raise BracketError(alpha, lam, (lo, hi), f"residual at lower edge is {f_lo!r}")
    if f_hi >= 0.0:
        # Tangent double root at the critical separation: the bound is the root.
        if abs(_residual(bound, cos_lam, cos_a, sin_a, inv_mu)) <= _RESCUE_RESIDUAL:
            return bound * params.radius
        raise BracketError(alpha, lam, (lo, hi), f"residual at upper edge is {f_hi!r}")
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if _residual(mid, cos_lam, cos_a, sin_a, inv_mu) > 0.0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(2):
        slope = _residual_slope(x, cos_lam, cos_a, sin_a, inv_mu)
        if abs(slope) < 1e-6:
            break
        x -= _residual(x, cos_lam, cos_a, sin_a, inv_mu) / slope
    if abs(_residual(x, cos_lam, cos_a, sin_a, inv_mu)) > _RESIDUAL_LIMIT:
        raise BracketError(alpha, lam, (lo, hi), "root residual exceeds 1e-12 after polish")
    return x * params.radius


def _delta_grid(cos_lams: np.ndarray, alpha: float, params: GameParams) -> np.ndarray:
    """Vectorized root solve, same bracket and tolerances as delta_of_lambda."""
    mu = params.speed_ratio
    inv_mu = 1.0 / mu
    cos_a, sin_a = math.cos(alpha), math.sin(alpha)
    bound = _flee_bound(alpha, mu)

    def resid(x):
        return np.cos(x * inv_mu) - np.cos(x) * cos_a - sin_a * cos_lams * np.sin(x)

    lo = np.full_like(cos_lams, _BRACKET_LO)
    hi = np.full_like(cos_lams, bound + _BRACKET_SLACK)
    f_lo = resid(lo)
    if np.any(f_lo <= 0.0):
        k = int(np.argmin(f_lo))
        raise BracketError(
            alpha,
            math.acos(float(np.clip(cos_lams[k], -1.0, 1.0))),
            (_BRACKET_LO, bound + _BRACKET_SLACK),
            f"residual at lower edge is {float(f_lo[k])!r}",
        )
    rescued = resid(hi) >= 0.0
    if np.any(rescued):
        bound_resid = abs(
            _residual(bound, float(cos_lams[np.argmax(rescued)]), cos_a, sin_a, inv_mu)
        )
        if bound_resid > _RESCUE_RESIDUAL:
            k = int(np.argmax(rescued))
            raise BracketError(
                alpha,
                math.acos(float(np.clip(cos_lams[k], -1.0, 1.0))),
                (_BRACKET_LO, bound + _BRACKET_SLACK),
                "residual at upper edge does not change sign",
            )
        hi = np.where(rescued, bound, hi)
        lo = np.where(rescued, bound, lo)
    while float(np.max(hi - lo)) > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        above = resid(mid) > 0.0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(2):
        slope = -inv_mu * np.sin(x * inv_mu) + np.sin(x) * cos_a - sin_a * cos_lams * np.cos(x)
        safe = np.abs(slope) > 1e-6
        step = np.where(safe, resid(x) / np.where(safe, slope, 1.0), 0.0)
        x = x - step
    x = np.where(rescued, bound, x)
    bad = np.abs(resid(x)) > _RESIDUAL_LIMIT
    if np.any(bad):
        k = int(np.argmax(bad))
        raise BracketError(
            alpha,
            math.acos(float(np.clip(cos_lams[k], -1.0, 1.0))),
            (_BRACKET_LO, bound + _BRACKET_SLACK),
            "root residual exceeds 1e-12 after polish",
        )
    return x * params.radius


class BoundarySample(NamedTuple):
    """One boundary point: heading, evader arc, position, arrival time."""

    lam: float
    delta: float
    point: SurfacePoint
    time: float


@dataclass(frozen=True, eq=False)
class ApolloniusBoundary:
    """Sampled dominance-domain boundary for one pursuer-evader configuration.

    The sweep covers lam in [-pi, pi] inclusive of both ends, so the sampled
    curve is closed (first and last points coincide). Arrays are index
    aligned: lams[k], deltas[k], points[k], times[k] describe one sample.
    """

    pursuer: SurfacePoint
    evader: SurfacePoint
    alpha: float
    params: GameParams
    frame: GreatCircleFrame
    lams: np.ndarray = field(repr=False)
    deltas: np.ndarray = field(repr=False)
    points: np.ndarray = field(repr=False)
    times: np.ndarray = field(repr=False)

    @property
    def n_samples(self) -> int:
        return len(self.lams)

    @property
    def samples(self) -> list[BoundarySample]:
        return [
            BoundarySample(
                float(self.lams[k]),
                float(self.deltas[k]),
                SurfacePoint(*(float(c) for c in self.points[k])),
                float(self.times[k]),
            )
            for k in range(len(self.lams))
        ]

    def point_at(self, lam: float) -> SurfacePoint:
        """Exact boundary point for an arbitrary heading (fresh root solve)."""
        delta = delta_of_lambda(lam, self.alpha, self.params)
        return place_boundary_point(self.evader, self.frame, lam, delta, self.params.radius)

    def arcs_to(self, point: SurfacePoint) -> np.ndarray:
        """Geodesic distance from every sample to a query point."""
        p = np.asarray(point, dtype=float)
        radius = self.params.radius
        dots = self.points @ p
        crosses = np.cross(self.points, p)
        sin_terms = np.sqrt(np.sum(crosses * crosses, axis=1))
        return radius * np.arctan2(sin_terms / radius**2, dots / radius**2)

    def min_arc_to(self, point: SurfacePoint) -> float:
        """Distance from a query point to the nearest boundary sample."""
        return float(np.min(self.arcs_to(point)))

    def contains_point(self, point: SurfacePoint, tol: float = _CONTAINS_TOL) -> bool:
        return contains(point, self.pursuer, self.evader, self.params, tol)

    def to_csv(self) -> str:
        """CSV export: lambda_rad, delta, x, y, z, arrival_time."""
        lines = ["lambda_rad,delta,x,y,z,arrival_time"]
        for k in range(len(self.lams)):
            px, py, pz = (float(c) for c in self.points[k])
            lines.append(
                f"{float(self.lams[k])!r},{float(self.deltas[k])!r},"
                f"{px!r},{py!r},{pz!r},{float(self.times[k])!r}"
            )
        return "\n".join(lines) + "\n"


def place_boundary_point(
    evader: SurfacePoint, frame: GreatCircleFrame, lam: float, delta: float, radius: float
) -> SurfacePoint:
    """Step from the evader a distance delta along heading lam.

    Heading zero points along the great circle toward the pursuer; positive
    headings rotate toward the frame normal.
    """
    te, n = frame.tangent_e, frame.normal
    cl, sl = math.cos(lam), math.sin(lam)
    direction = (
        -cl * te[0] + sl * n[0],
        -cl * te[1] + sl * n[1],
        -cl * te[2] + sl * n[2],
    )
    return step_geodesic(evader, direction, delta)


def boundary(
    pursuer: SurfacePoint,
    evader: SurfacePoint,
    params: GameParams,
    n_samples: int = DEFAULT_N_SAMPLES,
) -> ApolloniusBoundary:
    """Sample the full dominance-domain boundary for one configuration.

    Headings are swept uniformly over the closed range [-pi, pi]; roots are
    computed on the nonnegative magnitudes so the mirror symmetry
    delta(lam) = delta(-lam) holds exactly in the samples. Construction
    checks that the sampled arcs increase strictly over [0, pi] and raises
    MonotonicityError otherwise rather than assuming it.
    """
    if n_samples < 8:
        raise ValueError(f"n_samples must be at least 8, got {n_samples}")
    config = relative_config(pursuer, evader)
    if config.degenerate:
        raise DegenerateConfigError(
            "dominance boundary is undefined at alpha in {0, pi}"
        )
    lams = np.linspace(-math.pi, math.pi, n_samples)
    cos_lams = np.cos(np.abs(lams))
    deltas = _delta_grid(cos_lams, config.alpha, params)

    nonneg = lams >= 0.0
    half = deltas[nonneg]
    if np.any(np.diff(half) <= 0.0):
        raise MonotonicityError(
            f"sampled arcs not strictly increasing over [0, pi] at alpha={config.alpha!r}, "
            f"mu={params.speed_ratio!r}"
        )

    radius = params.radius
    te = np.asarray(config.frame.tangent_e)
    n = np.asarray(config.frame.normal)
    dirs = np.outer(-np.cos(lams), te) + np.outer(np.sin(lams), n)
    xs = deltas / radius
    e_vec = np.asarray(evader, dtype=float)
    points = np.outer(np.cos(xs), e_vec) + radius * np.sin(xs)[:, None] * dirs
    points *= (radius / np.linalg.norm(points, axis=1))[:, None]

    times = deltas / params.evader_speed
    return ApolloniusBoundary(
        pursuer=pursuer,
        evader=evader,
        alpha=config.alpha,
        params=params,
        frame=config.frame,
        lams=lams,
        deltas=deltas,
        points=points,
        times=times,
    )


def contains(
    point: SurfacePoint,
    pursuer: SurfacePoint,
    evader: SurfacePoint,
    params: GameParams,
    tol: float = _CONTAINS_TOL,
) -> bool:
    """Whether the evader reaches a point no later than the pursuer.

    The domain is closed, so arrival ties count as inside. tol (in units of
    R of arc, converted to time) absorbs rounding on exact-tie boundary
    points; it is six orders of magnitude below any geometric discrimination
    the callers rely on.
    """
    time_e = arc_between(point, evader) / params.evader_speed
    time_p = arc_between(point, pursuer) / params.pursuer_speed
    return time_e <= time_p + tol * params.radius / params.pursuer_speed


def intercept_point(
    pursuer: SurfacePoint, evader: SurfacePoint, params: GameParams
) -> tuple[SurfacePoint, float]:
    """Equilibrium intercept point and capture time for the one-on-one game.

    Both players flee/chase along their shared great circle, so the
    intercept lies at arc R mu alpha / (1 - mu) beyond the evader, directly
    away from the pursuer. Degenerate separations are rejected: at the
    antipodal configuration the intercept depends on the dispersal
    tie-break, which the simulation engine resolves instead.
    """
    config = relative_config(pursuer, evader)
    if config.degenerate:
        raise DegenerateConfigError(
            "equilibrium intercept is undefined at alpha in {0, pi}"
        )
    mu = params.speed_ratio
    flee_arc = params.radius * mu * config.alpha / (1.0 - mu)
    point = step_geodesic(evader, config.frame.tangent_e, flee_arc)
    return point, value(config.alpha, params)


def classify_intercept(
    bdry: ApolloniusBoundary, point: SurfacePoint, on_tol: float = 1e-6
) -> str:
    """Classify a point against the domain: 'on_boundary', 'inside', or 'outside'.

    on_tol is in units of R of arc distance to the nearest boundary sample.
    """
    if bdry.min_arc_to(point) <= on_tol * bdry.params.radius:
        return "on_boundary"
    if bdry.contains_point(point):
        return "inside"
    return "outside"

"""Great-circle geometry for agents confined to a sphere.

Positions are Cartesian vectors of length R. Motion along a heading is an
exact axis-angle rotation (never an Euler step), so the radius is preserved
by construction; a renormalization after each rotation keeps drift at
rounding level over arbitrarily long playouts. All operations here are pure
functions on immutable values and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

Vec3 = tuple[float, float, float]

# Below this sin(alpha) the great-circle frame is unusable: its components
# scale like 1/sin(alpha).
DEGENERACY_THRESHOLD = 1e-9

# Relative tolerance for "direction is tangent to the sphere" checks.
TANGENCY_TOL = 1e-10


class DegenerateConfigError(ValueError):
    """No great-circle frame exists: the two agents are collocated or antipodal."""


@dataclass(frozen=True)
class GameParams:
    """Global constants of one engagement.

    radius:        sphere radius R, length units, > 0
    pursuer_speed: constant pursuer speed, length/time, > 0
    speed_ratio:   evader max speed divided by pursuer speed, in (0, 1)
    """

    radius: float
    pursuer_speed: float
    speed_ratio: float

    def __post_init__(self) -> None:
        if not self.radius > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not self.pursuer_speed > 0.0:
            raise ValueError(f"pursuer_speed must be positive, got {self.pursuer_speed}")
        if not 0.0 < self.speed_ratio < 1.0:
            raise ValueError(
                f"speed_ratio must lie strictly between 0 and 1, got {self.speed_ratio}"
            )

    @property
    def evader_speed(self) -> float:
        """Evader top speed."""
        return self.speed_ratio * self.pursuer_speed


class SurfacePoint(NamedTuple):
    """A position on the sphere, Cartesian components."""

    x: float
    y: float
    z: float


class GreatCircleFrame(NamedTuple):
    """Orthonormal frame of the great circle through pursuer and evader.

    normal:    unit normal of the great-circle plane, (P x E)/|P x E|
    tangent_p: unit tangent at the pursuer, along the circle toward the evader
    tangent_e: unit tangent at the evader, along the circle away from the pursuer

    Headings are measured from the local tangent toward the normal, so a zero
    heading at the pursuer closes angular distance and a zero heading at the
    evader opens it.
    """

    normal: Vec3
    tangent_p: Vec3
    tangent_e: Vec3

    def tangent_at(self, point: SurfacePoint) -> Vec3:
        """Frame tangent at one of the two endpoints the frame was built from."""
        n = _norm(point)
        dp = abs(_dot(self.tangent_p, point)) / n
        de = abs(_dot(self.tangent_e, point)) / n
        best, t = (dp, self.tangent_p) if dp <= de else (de, self.tangent_e)
        if best > 1e-8:
            raise ValueError("point is not an endpoint of this great-circle frame")
        return t


class RelativeConfig(NamedTuple):
    """Angular separation plus the great-circle frame, if one exists.

    frame is present exactly when the configuration is non-degenerate
    (sin(alpha) >= DEGENERACY_THRESHOLD).
    """

    alpha: float
    frame: GreatCircleFrame | None
    degenerate: bool


def _dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b) -> Vec3:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _norm(a) -> float:
    return math.sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2])


def _unit(a) -> Vec3:
    n = _norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return (a[0] / n, a[1] / n, a[2] / n)


def from_spherical(phi: float, theta: float, params: GameParams) -> SurfacePoint:
    """Point at latitude phi and longitude theta (radians).

    Angles outside the principal ranges are wrapped onto the sphere rather
    than rejected.
    """
    phi = math.remainder(phi, 2.0 * math.pi)
    if phi > math.pi / 2.0:
        phi = math.pi - phi
        theta += math.pi
    elif phi < -math.pi / 2.0:
        phi = -math.pi - phi
        theta += math.pi
    theta = math.remainder(theta, 2.0 * math.pi)
    r = params.radius
    cp = math.cos(phi)
    p = SurfacePoint(r * cp * math.cos(theta), r * cp * math.sin(theta), r * math.sin(phi))
    f = r / _norm(p)
    return SurfacePoint(p.x * f, p.y * f, p.z * f)


def positions_at_separation(alpha: float, params: GameParams) -> tuple[SurfacePoint, SurfacePoint]:
    """Canonical (pursuer, evader) pair at angular separation alpha.

    Evader at the north pole, pursuer at colatitude alpha on the zero
    meridian. Convenient for scenarios given by alpha alone.
    """
    if not 0.0 <= alpha <= math.pi:
        raise ValueError(f"alpha must lie in [0, pi], got {alpha}")
    evader = from_spherical(math.pi / 2.0, 0.0, params)
    pursuer = from_spherical(math.pi / 2.0 - alpha, 0.0, params)
    return pursuer, evader


def arc_between(a: SurfacePoint, b: SurfacePoint) -> float:
    """Geodesic (great-circle) distance between two points on the same sphere."""
    na, nb = _norm(a), _norm(b)
    c = _cross(a, b)
    angle = math.atan2(_norm(c) / (na * nb), _dot(a, b) / (na * nb))
    return 0.5 * (na + nb) * angle


def relative_config(pursuer: SurfacePoint, evader: SurfacePoint) -> RelativeConfig:
    """Angular separation and great-circle frame of a pursuer-evader pair.

    alpha is computed as atan2(|P x E|, P . E), which is exact on [0, pi] and
    keeps full precision near both degeneracies. Collocated and antipodal
    pairs return degenerate=True with no frame.
    """
    np_, ne = _norm(pursuer), _norm(evader)
    scale = np_ * ne
    c = _cross(pursuer, evader)
    sin_a = _norm(c) / scale
    cos_a = _dot(pursuer, evader) / scale
    alpha = math.atan2(sin_a, cos_a)
    if sin_a < DEGENERACY_THRESHOLD:
        return RelativeConfig(alpha, None, True)
    normal = (c[0] / (scale * sin_a), c[1] / (scale * sin_a), c[2] / (scale * sin_a))
    normal = _unit(normal)
    tangent_p = _unit(_cross(normal, pursuer))
    tangent_e = _unit(_cross(normal, evader))
    return RelativeConfig(alpha, GreatCircleFrame(normal, tangent_p, tangent_e), False)


def step_geodesic(point: SurfacePoint, direction, arc: float) -> SurfacePoint:
    """Move a point a given arc length along the great circle of a tangent direction.

    direction must be tangent to the sphere at point (checked to
    TANGENCY_TOL); arc must be nonnegative. The move is the exact rotation
    of point by arc/R about the axis point x direction, followed by a
    renormalization to the original radius.
    """
    if arc < 0.0:
        raise ValueError(f"arc must be nonnegative, got {arc}")
    radius = _norm(point)
    dn = _norm(direction)
    if dn == 0.0:
        raise ValueError("direction must be a nonzero tangent vector")
    if abs(_dot(point, direction)) / (radius * dn) > TANGENCY_TOL:
        raise ValueError("direction is not tangent to the sphere at this point")
    theta = arc / radius
    ct, st = math.cos(theta), math.sin(theta)
    k = st * radius / dn
    out = (
        ct * point.x + k * direction[0],
        ct * point.y + k * direction[1],
        ct * point.z + k * direction[2],
    )
    f = radius / _norm(out)
    return SurfacePoint(out[0] * f, out[1] * f, out[2] * f)


def heading_to_velocity(
    point: SurfacePoint, frame: GreatCircleFrame | None, heading: float, speed: float
) -> Vec3:
    """Velocity vector for a heading measured in the great-circle frame.

    Returns speed * (cos(heading) * tangent_at(point) + sin(heading) * normal),
    which is tangent to the sphere at point by construction.
    """
    if frame is None:
        raise DegenerateConfigError(
            "no great-circle frame at alpha in {0, pi}; resolve via dispersal controls"
        )
    if speed < 0.0:
        raise ValueError(f"speed must be nonnegative, got {speed}")
    t = frame.tangent_at(point)
    n = frame.normal
    cu, su = math.cos(heading), math.sin(heading)
    return (
        speed * (cu * t[0] + su * n[0]),
        speed * (cu * t[1] + su * n[1]),
        speed * (cu * t[2] + su * n[2]),
    )

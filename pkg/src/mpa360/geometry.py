"""Projections between ERP rasters, the unit sphere, and perspective motion planes.

Coordinate conventions (fixed here, used by every other module and all tests):

World frame (right-handed):
  - theta: polar angle in [0, pi], measured from +z.
  - phi:   azimuth in [0, 2*pi), phi = atan2(y, x).
  - Cartesian: x = sin(theta)*cos(phi), y = sin(theta)*sin(phi), z = cos(theta).

ERP raster:
  - u (horizontal) carries the azimuth: u = phi * width / (2*pi); u wraps
    modulo width everywhere.
  - v (vertical) carries the polar angle: v = theta * height / pi; v is
    clamped, never wrapped (rows 0 and height are the +z / -z poles).
  - Image center (width/2, height/2) is therefore the world -x direction.

Perspective planes:
  - A plane is described by a rotation R (world -> camera); the camera
    optical axis is +z in the rotated frame, the plane u/v axes are the
    rotated x/y.
  - Incident angles theta < pi/2 land on the real image plane with radius
    f*tan(theta); angles theta > pi/2 land on the virtual image plane on
    the opposite side of the lens with radius f*tan(pi - theta).  A side
    tag keeps the two apart.
  - The three motion planes are signed axis permutations:
      front/back:  image-center direction (-x) -> optical axis
      left/right:  lateral direction (+y)      -> optical axis
      top/bottom:  pole direction (+z)         -> optical axis (identity)

All functions accept scalars or numpy arrays in the coordinate fields and
broadcast; they are pure and safe to call from any thread.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi

# Incident angles closer than this (radians) to pi/2 are rejected by the
# strict projection API: tan() diverges and the sample is unpredictable.
EPS_HORIZON = 1e-6


class InvalidCoordinateError(ValueError):
    """Raised when a coordinate contains non-finite components."""


class HorizonSingularityError(ValueError):
    """Raised when a direction lies within EPS_HORIZON of the plane horizon."""


class PlaneKind(str, enum.Enum):
    FRONT_BACK = "front_back"
    LEFT_RIGHT = "left_right"
    TOP_BOTTOM = "top_bottom"


class Side(enum.IntEnum):
    """Which perspective image plane a projected point landed on."""

    REAL = 0
    VIRTUAL = 1


@dataclass(frozen=True)
class SphereCoord:
    """Unit 3-vector; fields may be scalars or broadcastable arrays."""

    x: float | np.ndarray
    y: float | np.ndarray
    z: float | np.ndarray

    def norm(self):
        return np.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)


@dataclass(frozen=True)
class ImageCoord:
    """Continuous pixel coordinate on a 2D raster; sub-pixel values allowed."""

    u: float | np.ndarray
    v: float | np.ndarray


@dataclass(frozen=True)
class SphericalAngles:
    """theta in [0, pi] from +z; phi normalized to [0, 2*pi)."""

    theta: float | np.ndarray
    phi: float | np.ndarray


@dataclass(frozen=True)
class PlaneCoord:
    """Coordinate on a perspective motion plane plus its real/virtual side."""

    u: float | np.ndarray
    v: float | np.ndarray
    side: int | np.ndarray

    def radius(self):
        return np.hypot(self.u, self.v)


@dataclass(frozen=True)
class ProjectionConfig:
    """ERP raster dimensions and the motion-plane focal length.

    The default focal length width/(2*pi) makes one plane pixel at the
    plane center subtend the same angle as one ERP pixel at the equator,
    which keeps motion vector magnitudes comparable between models.
    """

    width: int
    height: int
    focal_length: float = field(default=0.0)

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"bad raster dimensions {self.width}x{self.height}")
        if self.focal_length == 0.0:
            object.__setattr__(self, "focal_length", self.width / TWO_PI)
        if self.focal_length <= 0:
            raise ValueError(f"focal length must be positive, got {self.focal_length}")


# Motion plane rotations, world -> camera, rows are the camera axes
# expressed in world coordinates.  All three are orthonormal with det +1.
_R_FRONT_BACK = np.array(
    [
        [0.0, -1.0, 0.0],  # plane u: matches ERP u at the plane center
        [0.0, 0.0, 1.0],  # plane v: world up
        [-1.0, 0.0, 0.0],  # optical axis: image-center direction
    ]
)
_R_LEFT_RIGHT = np.array(
    [
        [0.0, 0.0, 1.0],  # plane u: world pole direction
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],  # optical axis: lateral (+y, ERP column width/4)
    ]
)
_R_TOP_BOTTOM = np.eye(3)


@dataclass(frozen=True)
class MotionPlane:
    """One of the three selectable motion planes with its rotation matrix."""

    kind: PlaneKind
    rotation: np.ndarray

    def rotate(self, s: SphereCoord) -> SphereCoord:
        """World -> camera frame."""
        r = self.rotation
        return SphereCoord(
            r[0, 0] * s.x + r[0, 1] * s.y + r[0, 2] * s.z,
            r[1, 0] * s.x + r[1, 1] * s.y + r[1, 2] * s.z,
            r[2, 0] * s.x + r[2, 1] * s.y + r[2, 2] * s.z,
        )

    def unrotate(self, s: SphereCoord) -> SphereCoord:
        """Camera -> world frame (rotation matrices: inverse = transpose)."""
        r = self.rotation
        return SphereCoord(
            r[0, 0] * s.x + r[1, 0] * s.y + r[2, 0] * s.z,
            r[0, 1] * s.x + r[1, 1] * s.y + r[2, 1] * s.z,
            r[0, 2] * s.x + r[1, 2] * s.y + r[2, 2] * s.z,
        )


_PLANES = {
    PlaneKind.FRONT_BACK: MotionPlane(PlaneKind.FRONT_BACK, _R_FRONT_BACK),
    PlaneKind.LEFT_RIGHT: MotionPlane(PlaneKind.LEFT_RIGHT, _R_LEFT_RIGHT),
    PlaneKind.TOP_BOTTOM: MotionPlane(PlaneKind.TOP_BOTTOM, _R_TOP_BOTTOM),
}


def motion_plane(kind: PlaneKind | str) -> MotionPlane:
    """Return the fixed motion plane for `kind` (shared immutable instance)."""
    return _PLANES[PlaneKind(kind)]


def all_motion_planes() -> tuple[MotionPlane, ...]:
    return tuple(_PLANES.values())


def _check_finite(*values):
    for val in values:
        if not np.all(np.isfinite(val)):
            raise InvalidCoordinateError("non-finite coordinate")


def sphere_to_angles(s: SphereCoord) -> SphericalAngles:
    """Cartesian to (theta, phi).  At the poles phi is pinned to 0.

    theta comes from atan2(hypot(x, y), z), which stays well-conditioned
    at the poles where arccos(z) loses half the significant digits.
    """
    theta = np.arctan2(np.hypot(s.x, s.y), s.z)
    at_pole = np.logical_and(np.equal(s.x, 0.0), np.equal(s.y, 0.0))
    phi = np.where(at_pole, 0.0, np.arctan2(s.y, s.x)) % TWO_PI
    return SphericalAngles(theta, phi)


def angles_to_sphere(a: SphericalAngles) -> SphereCoord:
    sin_t = np.sin(a.theta)
    return SphereCoord(sin_t * np.cos(a.phi), sin_t * np.sin(a.phi), np.cos(a.theta))


def erp_to_sphere(p: ImageCoord, cfg: ProjectionConfig) -> SphereCoord:
    """Inverse equirectangular projection: raster coordinate to unit vector.

    u is wrapped modulo width; v is clamped to [0, height].
    """
    _check_finite(p.u, p.v)
    phi = (np.asarray(p.u, dtype=np.float64) % cfg.width) * (TWO_PI / cfg.width)
    theta = np.clip(np.asarray(p.v, dtype=np.float64), 0.0, cfg.height) * (
        np.pi / cfg.height
    )
    return angles_to_sphere(SphericalAngles(theta, phi))


def sphere_to_erp(s: SphereCoord, cfg: ProjectionConfig) -> ImageCoord:
    """Equirectangular projection: unit vector to raster coordinate.

    Returns u in [0, width), v in [0, height]; poles map to u = 0.
    """
    _check_finite(s.x, s.y, s.z)
    a = sphere_to_angles(s)
    return ImageCoord(a.phi * (cfg.width / TWO_PI), a.theta * (cfg.height / np.pi))


def sphere_to_perspective(
    s: SphereCoord, cfg: ProjectionConfig, *, strict: bool = True
) -> PlaneCoord:
    """Generalized perspective projection of a camera-frame direction.

    Radius is f*tan(theta) on the real plane (theta < pi/2) and
    f*tan(pi - theta) on the virtual plane (theta > pi/2).  With
    strict=True, directions within EPS_HORIZON of the horizon raise
    HorizonSingularityError; with strict=False they produce large but
    finite coordinates and the caller decides what to do with them.
    """
    _check_finite(s.x, s.y, s.z)
    theta = np.arctan2(np.hypot(s.x, s.y), s.z)
    if strict and np.any(np.abs(theta - 0.5 * np.pi) < EPS_HORIZON):
        raise HorizonSingularityError("direction within the plane-horizon band")
    r = cfg.focal_length * np.tan(np.minimum(theta, np.pi - theta))
    at_pole = np.logical_and(np.equal(s.x, 0.0), np.equal(s.y, 0.0))
    phi = np.where(at_pole, 0.0, np.arctan2(s.y, s.x))
    side = np.where(theta <= 0.5 * np.pi, int(Side.REAL), int(Side.VIRTUAL))
    return PlaneCoord(r * np.cos(phi), r * np.sin(phi), side)


def perspective_to_sphere(p: PlaneCoord, cfg: ProjectionConfig) -> SphereCoord:
    """Inverse generalized perspective projection (total, camera frame)."""
    _check_finite(p.u, p.v)
    r = np.hypot(p.u, p.v)
    t = np.arctan(r / cfg.focal_length)
    theta = np.where(np.equal(p.side, int(Side.REAL)), t, np.pi - t)
    at_origin = np.logical_and(np.equal(p.u, 0.0), np.equal(p.v, 0.0))
    phi = np.where(at_origin, 0.0, np.arctan2(p.v, p.u))
    return angles_to_sphere(SphericalAngles(theta, phi))


def reproject(
    p_o: ImageCoord, plane: MotionPlane, cfg: ProjectionConfig, *, strict: bool = True
) -> PlaneCoord:
    """ERP coordinate -> motion plane coordinate (rotate, then project)."""
    return sphere_to_perspective(
        plane.rotate(erp_to_sphere(p_o, cfg)), cfg, strict=strict
    )


def unreproject(p_p: PlaneCoord, plane: MotionPlane, cfg: ProjectionConfig) -> ImageCoord:
    """Motion plane coordinate -> ERP coordinate (unproject, then unrotate)."""
    return sphere_to_erp(plane.unrotate(perspective_to_sphere(p_p, cfg)), cfg)

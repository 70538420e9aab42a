"""Ellipsoid reconstruction of the ballooned membrane.

All quantities are strict SI (m, m3).  The membrane clamped in a retainer
ring of inner radius ``r`` balloons into an axisymmetric ellipsoid whose
portion below the ring plane is a virtual cap; the visible actuator volume
is the full ellipsoid minus that cap.  Both the unindented and the
contact-deformed shapes are recovered from (volume, apex height) via the
same closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateGeometry

# relative magnitude below which a denominator counts as singular
_DENOM_REL_EPS = 1e-12

# equatorial semi-axis more than this many times the ring radius or the
# polar semi-axis marks the degenerate flat-membrane branch
_ASPECT_LIMIT = 1e3


@dataclass(frozen=True)
class RingSpec:
    """Fixed actuator geometry: ring inner radius and initial membrane thickness."""

    r: float      # ring inner radius [m]
    t_i: float    # initial (uniform) membrane thickness [m]

    def __post_init__(self):
        if not (self.r > 0 and self.t_i > 0):
            raise ValueError("ring radius and membrane thickness must be positive")

    @property
    def area(self) -> float:
        """Initial membrane surface area pi*r^2 [m2]."""
        return math.pi * self.r ** 2


@dataclass(frozen=True)
class Ellipsoid:
    """Axisymmetric ellipsoid: equatorial semi-axis a, polar semi-axis c.

    Both oblate (a > c) and prolate (c > a) shapes occur; no ordering is
    imposed.
    """

    a: float  # equatorial semi-axis [m]
    c: float  # polar semi-axis [m]

    def __post_init__(self):
        if not (self.a > 0 and self.c > 0):
            raise ValueError("semi-axes must be positive")


@dataclass(frozen=True)
class UnindentedShape:
    """Reconstructed free (no-contact) membrane shape at one volume."""

    ellipsoid: Ellipsoid
    h1: float      # apex height above the ring plane [m]
    h_b: float     # virtual cap height below the ring plane [m]
    v_bma: float   # actuator volume (liquid + membrane) [m3]

    @property
    def a(self) -> float:
        return self.ellipsoid.a

    @property
    def c(self) -> float:
        return self.ellipsoid.c


@dataclass(frozen=True)
class DeformedShape:
    """Contact-phase shape: deformed axes, apex height, center shift, contact radius."""

    a_d: float   # deformed equatorial semi-axis [m]
    c_d: float   # deformed polar semi-axis [m]
    h3: float    # deformed apex height [m]
    c_c: float   # center shift of the polar axis [m]
    k: float     # contact-patch radius [m]


def membrane_volume(ring: RingSpec) -> float:
    """Volume of the undeformed membrane disc, r^2 * pi * t_i [m3]."""
    return ring.r ** 2 * math.pi * ring.t_i


def actuator_volume(v_f: float, ring: RingSpec) -> float:
    """Total actuator volume: injected liquid plus membrane material [m3]."""
    if v_f < 0:
        raise ValueError("injected volume must be nonnegative")
    return v_f + membrane_volume(ring)


def cap_volume(e: Ellipsoid, h_b: float) -> float:
    """Volume of the ellipsoid cap of height h_b measured from an apex [m3]."""
    if not (0 <= h_b <= 2 * e.c):
        raise DegenerateGeometry(
            f"cap height {h_b} outside [0, 2c] for c={e.c}"
        )
    return e.a ** 2 * (3 * e.c - h_b) * h_b ** 2 * math.pi / (3 * e.c ** 2)


def ellipsoid_volume_above_ring(e: Ellipsoid, h: float) -> float:
    """Actuator volume enclosed above the ring plane for apex height h [m3]."""
    return (
        -e.a ** 2 * (2 * e.c - h) ** 2 * (h + e.c) * math.pi / (3 * e.c ** 2)
        + 4 * math.pi * e.a ** 2 * e.c / 3
    )


def solve_axes(v_bma: float, h: float, ring: RingSpec) -> Ellipsoid:
    """Recover the ellipsoid axes from actuator volume and apex height.

    Serves both the unindented shape (h = h1) and the contact-deformed
    shape (h = h3).  Raises DegenerateGeometry when the pair lies outside
    the model's validity region (near-flat membrane, singular denominator,
    negative radicand, or non-positive axes).
    """
    if h <= 0:
        raise DegenerateGeometry(f"apex height must be positive, got {h}")
    r2pi = math.pi * ring.r ** 2
    denom = 3 * h * r2pi - 6 * v_bma
    scale = abs(3 * h * r2pi) + abs(6 * v_bma)
    if abs(denom) < _DENOM_REL_EPS * scale:
        raise DegenerateGeometry("singular denominator in axis solution")

    c = (h ** 2 * r2pi - 3 * v_bma * h) / denom
    radicand = -(h * r2pi - 2 * v_bma) / (h * math.pi)
    if radicand < 0:
        raise DegenerateGeometry("negative radicand in major-axis solution")
    a = math.sqrt(radicand) * (math.sqrt(3) * h * r2pi - 3 ** 1.5 * v_bma) / denom
    if a <= 0 or c <= 0:
        raise DegenerateGeometry(f"non-positive axes a={a}, c={c}")
    # near-flat heights admit a mathematically consistent but absurd
    # lens-shaped solution (a many times the ring radius); reject it
    if a > _ASPECT_LIMIT * ring.r or a > _ASPECT_LIMIT * c:
        raise DegenerateGeometry(
            f"flat-membrane solution a={a} out of proportion to r={ring.r}, c={c}"
        )
    return Ellipsoid(a=a, c=c)


def unindented_shape(v_bma: float, h1: float, ring: RingSpec) -> UnindentedShape:
    """Full unindented reconstruction with virtual-cap bookkeeping."""
    e = solve_axes(v_bma, h1, ring)
    if h1 > 2 * e.c:
        raise DegenerateGeometry(f"apex height {h1} exceeds ellipsoid extent {2 * e.c}")
    return UnindentedShape(ellipsoid=e, h1=h1, h_b=2 * e.c - h1, v_bma=v_bma)


def center_shift(c: float, c_d: float) -> float:
    """Shift of the polar axis between unindented and deformed shapes [m].

    May be negative transiently; downstream clamping handles it.
    """
    return c - c_d


def contact_radius(u: UnindentedShape, h2_prev: float, c_c: float) -> float:
    """Contact-patch radius from slicing the unindented ellipsoid [m].

    Slice depth is d = h2_prev - c_c below the apex; d <= 0 means no slice
    contact yet and returns 0.
    """
    d = h2_prev - c_c
    if d <= 0:
        return 0.0
    a, c = u.a, u.c
    if d > 2 * c:
        raise DegenerateGeometry(f"slice depth {d} below the entire ellipsoid (2c={2 * c})")
    k = a * math.sqrt(2 * c * d - d * d) / c
    return min(k, a)


def sphere_baseline(v_bma: float, ring: RingSpec) -> tuple[float, float]:
    """Spherical-cap fit over the ring at the same volume, for comparison overlays.

    Returns (sphere radius R, cap height h) with cap volume
    pi*h*(3r^2 + h^2)/6 = v_bma and R = (r^2 + h^2) / (2h).
    """
    if v_bma <= 0:
        raise ValueError("actuator volume must be positive")
    r = ring.r
    # monotone cubic (pi/6) h^3 + (pi r^2 / 2) h - V = 0: single positive root
    roots = np.roots([math.pi / 6, 0.0, math.pi * r * r / 2, -v_bma])
    h = max(x.real for x in roots if abs(x.imag) < 1e-9 * max(1.0, abs(x.real)))
    radius = (r * r + h * h) / (2 * h)
    return radius, h


def profile_polyline(shape, n_points: int) -> np.ndarray:
    """Cross-section polyline of the visible membrane arc above the ring plane.

    Returns an (n, 2) array of (x, z) points in meters ordered from (-r, 0)
    over the apex to (+r, 0).  For a DeformedShape with contact radius
    k > 0 the apex is clipped to a flat segment of half-width k.
    """
    if n_points < 2:
        raise ValueError("need at least 2 points")

    if isinstance(shape, UnindentedShape):
        a, c, h = shape.a, shape.c, shape.h1
        k = 0.0
    elif isinstance(shape, DeformedShape):
        a, c, h = shape.a_d, shape.c_d, shape.h3
        k = shape.k
    else:
        raise TypeError(f"unsupported shape type {type(shape).__name__}")

    z0 = h - c  # ellipsoid center height above the ring plane
    # parameter t measured from the apex: x = a sin t, z = z0 + c cos t
    cos_ring = max(-1.0, min(1.0, 1 - h / c))
    t_max = math.acos(cos_ring)

    if k <= 0:
        t = np.linspace(-t_max, t_max, n_points)
        pts = np.column_stack([a * np.sin(t), z0 + c * np.cos(t)])
    else:
        t_k = math.asin(min(1.0, k / a))
        n_flat = max(2, n_points // 8)
        n_arc = max(2, (n_points - n_flat) // 2)
        z_k = z0 + c * math.cos(t_k)
        left = np.linspace(-t_max, -t_k, n_arc)
        right = np.linspace(t_k, t_max, n_arc)
        flat_x = np.linspace(-k, k, n_flat)
        pts = np.vstack([
            np.column_stack([a * np.sin(left), z0 + c * np.cos(left)]),
            np.column_stack([flat_x, np.full(n_flat, z_k)]),
            np.column_stack([a * np.sin(right), z0 + c * np.cos(right)]),
        ])
    # ring anchoring: endpoints exactly on the ring circle
    r_ring = a * math.sin(t_max)
    pts[0] = (-r_ring, 0.0)
    pts[-1] = (r_ring, 0.0)
    return pts

"""Conformal cone developments, geodesics, and the area-preserving radial map.

Two power maps flatten one of the two densities:

* ``w = z**(p+1) / (p+1)`` makes weighted length equal Euclidean image length
  (the image keeps only an area density);
* ``w = 2/(p+2) * z**((p+2)/2)`` makes weighted area equal Euclidean image
  area (the image keeps only a perimeter density proportional to
  ``|w|**(p/(p+2))``).

Geodesics are classified by comparing the two admissible routes: the broken
path through the origin of length (|a|^(p+1) + |b|^(p+1))/(p+1), and, when the
developed angle (p+1)*dtheta is below pi, the straight chord in the first cone
image. At the crossover angle the two lengths agree, so the minimum is
continuous; the returned kind is the argmin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchCutError, DomainError, ValidationError
from .geometry import BoundaryCurve, CircularArc, LineSegment, Polyline
from .measure import validate_exponent

from .cgc import wrap_pi


# ---------------------------------------------------------------------------
# pointwise maps (principal branch)
# ---------------------------------------------------------------------------

def _split_polar(point) -> tuple[float, float]:
    x, y = float(point[0]), float(point[1])
    return math.hypot(x, y), math.atan2(y, x)


def area_cone_image(point, p: float, *, strict_branch: bool = False) -> tuple[float, float]:
    """Image of a point under w = z**(p+1)/(p+1), computed in polar form."""
    p = validate_exponent(p)
    r, th = _split_polar(point)
    psi = (p + 1.0) * th
    if strict_branch and abs(psi) > math.pi + 1e-15:
        raise BranchCutError(f"image argument {psi:.6g} leaves the principal sector")
    rho = r ** (p + 1.0) / (p + 1.0)
    return rho * math.cos(psi), rho * math.sin(psi)


def area_cone_preimage(point, p: float) -> tuple[float, float]:
    """Principal-branch inverse of ``area_cone_image``; the origin maps to itself."""
    p = validate_exponent(p)
    rho, psi = _split_polar(point)
    if rho == 0.0:
        return 0.0, 0.0
    r = ((p + 1.0) * rho) ** (1.0 / (p + 1.0))
    th = psi / (p + 1.0)
    return r * math.cos(th), r * math.sin(th)


def perimeter_cone_image(point, p: float, *, strict_branch: bool = False) -> tuple[float, float]:
    """Image of a point under w = 2/(p+2) * z**((p+2)/2)."""
    p = validate_exponent(p)
    r, th = _split_polar(point)
    half = 0.5 * (p + 2.0)
    psi = half * th
    if strict_branch and abs(psi) > math.pi + 1e-15:
        raise BranchCutError(f"image argument {psi:.6g} leaves the principal sector")
    rho = r ** half / half
    return rho * math.cos(psi), rho * math.sin(psi)


def perimeter_cone_preimage(point, p: float) -> tuple[float, float]:
    p = validate_exponent(p)
    rho, psi = _split_polar(point)
    if rho == 0.0:
        return 0.0, 0.0
    half = 0.5 * (p + 2.0)
    r = (half * rho) ** (1.0 / half)
    th = psi / half
    return r * math.cos(th), r * math.sin(th)


def perimeter_cone_length_factor(p: float) -> float:
    """Image length under density |w|**(p/(p+2)) is this factor times the
    plane weighted length."""
    p = validate_exponent(p)
    return (0.5 * (p + 2.0)) ** (-p / (p + 2.0))


# ---------------------------------------------------------------------------
# curve developments (angle unwrapped along the curve, no branch cut)
# ---------------------------------------------------------------------------

def _curve_polar_samples(curve: BoundaryCurve, samples_per_segment: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.linspace(0.0, 1.0, samples_per_segment)
    pts = []
    for i, seg in enumerate(curve.segments):
        block = seg.point(t)
        pts.append(block if i == 0 else block[1:])
    pts = np.concatenate(pts, axis=0)
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r == 0.0):
        raise DomainError("curve passes through the origin; development undefined")
    th = np.unwrap(np.arctan2(pts[:, 1], pts[:, 0]))
    return r, th


def develop_on_area_cone(
    curve: BoundaryCurve, p: float, samples_per_segment: int = 4097
) -> Polyline:
    """Sampled image of a curve under the length-preserving cone map."""
    p = validate_exponent(p)
    r, th = _curve_polar_samples(curve, samples_per_segment)
    rho = r ** (p + 1.0) / (p + 1.0)
    psi = (p + 1.0) * th
    return Polyline(np.stack([rho * np.cos(psi), rho * np.sin(psi)], axis=-1))


def develop_on_perimeter_cone(
    curve: BoundaryCurve, p: float, samples_per_segment: int = 4097
) -> Polyline:
    """Sampled image of a curve under the area-preserving cone map."""
    p = validate_exponent(p)
    r, th = _curve_polar_samples(curve, samples_per_segment)
    half = 0.5 * (p + 2.0)
    rho = r ** half / half
    psi = half * th
    return Polyline(np.stack([rho * np.cos(psi), rho * np.sin(psi)], axis=-1))


# ---------------------------------------------------------------------------
# geodesics
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GeodesicPath:
    kind: str  # "segment-to-origin" | "two-segments-via-origin" | "cone-chord"
    waypoints: np.ndarray
    weighted_length: float


def _chord_pullback(a, b, ra, rb, tha, thb, p, samples) -> np.ndarray:
    """Plane trace of the straight cone-image chord between a and b."""
    rho_a = ra ** (p + 1.0) / (p + 1.0)
    rho_b = rb ** (p + 1.0) / (p + 1.0)
    psi_a = (p + 1.0) * tha
    psi_b = (p + 1.0) * thb
    mid = 0.5 * (psi_a + psi_b)
    # in the frame rotated by -mid both image angles lie within (-pi/2, pi/2),
    # and the chord stays inside that convex sector, so atan2 is unambiguous
    wa = np.array([rho_a * math.cos(psi_a - mid), rho_a * math.sin(psi_a - mid)])
    wb = np.array([rho_b * math.cos(psi_b - mid), rho_b * math.sin(psi_b - mid)])
    t = np.linspace(0.0, 1.0, samples)[:, None]
    w = wa[None, :] * (1.0 - t) + wb[None, :] * t
    rho = np.hypot(w[:, 0], w[:, 1])
    psi = np.arctan2(w[:, 1], w[:, 0]) + mid
    r = ((p + 1.0) * rho) ** (1.0 / (p + 1.0))
    th = psi / (p + 1.0)
    pts = np.stack([r * np.cos(th), r * np.sin(th)], axis=-1)
    pts[0] = a
    pts[-1] = b
    return pts


def geodesic(p: float, a, b, *, chord_samples: int = 8193) -> GeodesicPath:
    """Shortest path between two points under the weighted length.

    Compares the broken route through the origin with the developed straight
    chord (available when the opened angle is below pi) and returns the
    shorter; paths touching the origin are straight segments.
    """
    p = validate_exponent(p)
    a = np.array([float(a[0]), float(a[1])])
    b = np.array([float(b[0]), float(b[1])])
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ValidationError("geodesic endpoints must be finite")
    ra, rb = math.hypot(*a), math.hypot(*b)

    if ra == 0.0 or rb == 0.0:
        length = (ra ** (p + 1.0) + rb ** (p + 1.0)) / (p + 1.0)
        return GeodesicPath("segment-to-origin", np.stack([a, b]), length)

    if np.array_equal(a, b):
        return GeodesicPath("cone-chord", np.stack([a, b]), 0.0)

    two_len = (ra ** (p + 1.0) + rb ** (p + 1.0)) / (p + 1.0)
    tha = math.atan2(a[1], a[0])
    thb_rep = tha - wrap_pi(tha - math.atan2(b[1], b[0]))
    dth = abs(tha - thb_rep)
    alpha = (p + 1.0) * dth

    chord_len = math.inf
    if alpha < math.pi:
        rho_a = ra ** (p + 1.0) / (p + 1.0)
        rho_b = rb ** (p + 1.0) / (p + 1.0)
        chord_len = math.sqrt(
            max(rho_a * rho_a + rho_b * rho_b - 2.0 * rho_a * rho_b * math.cos(alpha), 0.0)
        )

    if chord_len < two_len:
        pts = _chord_pullback(a, b, ra, rb, tha, thb_rep, p, chord_samples)
        return GeodesicPath("cone-chord", pts, chord_len)
    return GeodesicPath(
        "two-segments-via-origin", np.stack([a, np.zeros(2), b]), two_len
    )


def geodesic_waypoint_curve(path: GeodesicPath) -> BoundaryCurve:
    """Waypoints as a measurable curve (segments for broken paths)."""
    if path.kind == "cone-chord" and path.waypoints.shape[0] > 2:
        return BoundaryCurve((Polyline(path.waypoints),), closed=False)
    segs = []
    pts = path.waypoints
    for i in range(pts.shape[0] - 1):
        if not np.array_equal(pts[i], pts[i + 1]):
            segs.append(LineSegment(pts[i, 0], pts[i, 1], pts[i + 1, 0], pts[i + 1, 1]))
    if not segs:
        segs = [LineSegment(pts[0, 0], pts[0, 1], pts[0, 0] + 1e-300, pts[0, 1])]
    return BoundaryCurve(tuple(segs), closed=False)


# ---------------------------------------------------------------------------
# the area-preserving radial map r -> sqrt(r^2 - eps)
# ---------------------------------------------------------------------------

def phi_eps_point(point, eps: float) -> tuple[float, float]:
    x, y = float(point[0]), float(point[1])
    r2 = x * x + y * y
    if r2 <= eps:
        raise DomainError(f"point radius {math.sqrt(r2):.6g} not above sqrt(eps)")
    f = math.sqrt(1.0 - eps / r2)
    return x * f, y * f


def _segment_min_radius(seg) -> float:
    if isinstance(seg, CircularArc):
        rc = math.hypot(seg.cx, seg.cy)
        # nearest point of the full circle, if its angle lies on the arc
        if rc == 0.0:
            return seg.radius
        ang = math.atan2(-seg.cy, -seg.cx)
        t = ((ang - seg.start_angle) % (2.0 * math.pi)) / seg.sweep if seg.sweep > 0 else (
            (seg.start_angle - ang) % (2.0 * math.pi)
        ) / (-seg.sweep)
        best = abs(rc - seg.radius) if 0.0 <= t <= 1.0 else math.inf
        ends = [np.hypot(*seg.start()), np.hypot(*seg.end())]
        return min(best, *ends)
    if isinstance(seg, LineSegment):
        ax, ay, dx, dy = seg.ax, seg.ay, seg.bx - seg.ax, seg.by - seg.ay
        t = -(ax * dx + ay * dy) / (dx * dx + dy * dy)
        cands = [math.hypot(seg.ax, seg.ay), math.hypot(seg.bx, seg.by)]
        if 0.0 < t < 1.0:
            cands.append(math.hypot(ax + t * dx, ay + t * dy))
        return min(cands)
    if isinstance(seg, Polyline):
        return float(np.min(np.hypot(seg.points[:, 0], seg.points[:, 1])))
    raise ValidationError(f"unsupported segment type {type(seg).__name__}")


def _is_radial(seg: LineSegment) -> bool:
    cross = seg.ax * seg.by - seg.ay * seg.bx
    scale = max(abs(seg.ax), abs(seg.ay), abs(seg.bx), abs(seg.by))
    return abs(cross) <= 1e-14 * scale * scale and (
        seg.ax * seg.bx + seg.ay * seg.by
    ) > 0.0


def apply_phi_eps(
    curve: BoundaryCurve, eps: float, *, samples_per_segment: int = 1025
) -> BoundaryCurve:
    """Apply (r, theta) -> (sqrt(r^2 - eps), theta) pointwise to a curve.

    The map preserves enclosed Euclidean area and strictly shrinks weighted
    length under any density r**k with k > 1. Arcs centered at the origin and
    radial segments map exactly; everything else is densified to a polyline.
    """
    eps = float(eps)
    if eps < 0.0 or not math.isfinite(eps):
        raise ValidationError(f"eps must be nonnegative, got {eps}")
    if eps == 0.0:
        return curve
    guard = math.sqrt(eps)
    for seg in curve.segments:
        if _segment_min_radius(seg) <= guard:
            raise DomainError("curve does not stay outside the removed disk")

    t = np.linspace(0.0, 1.0, samples_per_segment)
    mapped = []
    for seg in curve.segments:
        if isinstance(seg, CircularArc) and seg.cx == 0.0 and seg.cy == 0.0:
            mapped.append(
                CircularArc(
                    0.0,
                    0.0,
                    math.sqrt(seg.radius**2 - eps),
                    seg.start_angle,
                    seg.end_angle,
                    seg.ccw,
                )
            )
            continue
        if isinstance(seg, LineSegment) and _is_radial(seg):
            ax, ay = phi_eps_point((seg.ax, seg.ay), eps)
            bx, by = phi_eps_point((seg.bx, seg.by), eps)
            mapped.append(LineSegment(ax, ay, bx, by))
            continue
        pts = seg.point(t) if not isinstance(seg, Polyline) else seg.points
        r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
        f = np.sqrt(1.0 - eps / r2)
        mapped.append(Polyline(pts * f[:, None]))
    return BoundaryCurve(tuple(mapped), curve.closed)


def phi_eps_jacobian(point, eps: float, h: float = 1e-20) -> float:
    """Jacobian determinant of the radial map, by complex-step differentiation."""
    x, y = float(point[0]), float(point[1])
    if x * x + y * y <= eps:
        raise DomainError("point must lie outside the removed disk")

    def fmap(xc, yc):
        r2 = xc * xc + yc * yc
        f = np.sqrt(1.0 - eps / r2)
        return xc * f, yc * f

    fx = fmap(x + 1j * h, y)
    fy = fmap(x, y + 1j * h)
    j00, j10 = fx[0].imag / h, fx[1].imag / h
    j01, j11 = fy[0].imag / h, fy[1].imag / h
    return j00 * j11 - j01 * j10

"""Weighted length and area of planar curves under the radial density r**p.

Lengths integrate r**p ds segment by segment. Areas of closed curves use the
boundary form

    area = 1/(p+2) * loop integral of r**p (x dy - y dx),

whose integrand has divergence r**p, so no two-dimensional meshing is needed.
Arcs are parametrized by angle, line segments by arclength. Polylines are
integrated by per-sample trapezoid sums with Richardson extrapolation; the
reported error estimate comes from comparing extrapolation levels.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .errors import QuadratureError, ValidationError
from .geometry import BoundaryCurve, CircularArc, LineSegment, Polyline

DEFAULT_TOL = 1e-10


def validate_exponent(p: float) -> float:
    p = float(p)
    if not math.isfinite(p) or p < 0.0:
        raise ValidationError(f"density exponent must be finite and >= 0, got {p}")
    return p


def _quad(f, a: float, b: float, tol: float) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        out = integrate.quad(f, a, b, epsabs=tol, epsrel=1e-13, limit=400, full_output=1)
    val, err = out[0], out[1]
    if len(out) > 3 and err > max(tol, 1e-13 * abs(val)):
        raise QuadratureError(f"quadrature failed to reach tol={tol:g}: {out[3]}")
    return val, err


def _rp(x, y, p):
    return (x * x + y * y) ** (0.5 * p)


# ---------------------------------------------------------------------------
# per-segment integrals
# ---------------------------------------------------------------------------

def _arc_length_integral(arc: CircularArc, p: float, tol: float) -> tuple[float, float]:
    sw = arc.sweep
    if sw == 0.0:
        return 0.0, 0.0
    sgn = 1.0 if sw > 0 else -1.0
    R, cx, cy, th0 = arc.radius, arc.cx, arc.cy, arc.start_angle

    def f(u):
        th = th0 + sgn * u
        return _rp(cx + R * math.cos(th), cy + R * math.sin(th), p) * R

    return _quad(f, 0.0, abs(sw), tol)


def _arc_area_integral(arc: CircularArc, p: float, tol: float) -> tuple[float, float]:
    # x dy - y dx = R (cx cos + cy sin + R) dtheta along the arc
    sw = arc.sweep
    if sw == 0.0:
        return 0.0, 0.0
    sgn = 1.0 if sw > 0 else -1.0
    R, cx, cy, th0 = arc.radius, arc.cx, arc.cy, arc.start_angle

    def f(u):
        th = th0 + sgn * u
        c, s = math.cos(th), math.sin(th)
        return _rp(cx + R * c, cy + R * s, p) * R * (cx * c + cy * s + R)

    val, err = _quad(f, 0.0, abs(sw), tol)
    return sgn * val, err


def _segment_length_integral(seg: LineSegment, p: float, tol: float) -> tuple[float, float]:
    L = seg.euclid_length()
    dx, dy = seg.bx - seg.ax, seg.by - seg.ay

    def f(t):
        return _rp(seg.ax + t * dx, seg.ay + t * dy, p)

    val, err = _quad(f, 0.0, 1.0, tol / max(L, 1e-300))
    return L * val, L * err


def _segment_area_integral(seg: LineSegment, p: float, tol: float) -> tuple[float, float]:
    # x dy - y dx is the constant a x b along a straight chord
    cross = seg.ax * seg.by - seg.ay * seg.bx
    if cross == 0.0:
        return 0.0, 0.0
    dx, dy = seg.bx - seg.ax, seg.by - seg.ay

    def f(t):
        return _rp(seg.ax + t * dx, seg.ay + t * dy, p)

    val, err = _quad(f, 0.0, 1.0, tol / abs(cross))
    return cross * val, abs(cross) * err


def _polyline_trapz(pts: np.ndarray, p: float) -> tuple[float, float]:
    rp = (pts[:, 0] ** 2 + pts[:, 1] ** 2) ** (0.5 * p)
    dx = np.diff(pts[:, 0])
    dy = np.diff(pts[:, 1])
    h = np.hypot(dx, dy)
    pair = 0.5 * (rp[:-1] + rp[1:])
    length = float(np.sum(h * pair))
    cross = pts[:-1, 0] * pts[1:, 1] - pts[:-1, 1] * pts[1:, 0]
    area = float(np.sum(cross * pair))
    return length, area


def _polyline_integrals(poly: Polyline, p: float) -> tuple[float, float, float, float]:
    """(length, length_err, area_form, area_err) for a sampled curve.

    Treats the samples as points on a smooth curve. Works best when the
    sample count is 4k+1; coarse polylines get a crude error estimate.
    """
    pts = poly.points
    n = pts.shape[0]
    L0, A0 = _polyline_trapz(pts, p)
    if n >= 5 and (n - 1) % 2 == 0:
        L1, A1 = _polyline_trapz(pts[::2], p)
        Lr = L0 + (L0 - L1) / 3.0
        Ar = A0 + (A0 - A1) / 3.0
        if n >= 9 and (n - 1) % 4 == 0:
            L2, A2 = _polyline_trapz(pts[::4], p)
            Lr1 = L1 + (L1 - L2) / 3.0
            Ar1 = A1 + (A1 - A2) / 3.0
            lerr = abs(Lr - Lr1) + 1e-15 * abs(Lr)
            aerr = abs(Ar - Ar1) + 1e-15 * abs(Ar)
        else:
            lerr = abs(L0 - L1) / 3.0 + 1e-15 * abs(Lr)
            aerr = abs(A0 - A1) / 3.0 + 1e-15 * abs(Ar)
        return Lr, lerr, Ar, aerr
    crude = 1e-3
    return L0, crude * abs(L0) + 1e-15, A0, crude * abs(A0) + 1e-15


def _segment_measures(seg, p, tol):
    if isinstance(seg, CircularArc):
        lv, le = _arc_length_integral(seg, p, tol)
        av, ae = _arc_area_integral(seg, p, tol)
    elif isinstance(seg, LineSegment):
        lv, le = _segment_length_integral(seg, p, tol)
        av, ae = _segment_area_integral(seg, p, tol)
    elif isinstance(seg, Polyline):
        lv, le, av, ae = _polyline_integrals(seg, p)
    else:  # pragma: no cover - guarded by BoundaryCurve validation
        raise ValidationError(f"unsupported segment type {type(seg).__name__}")
    return lv, le, av, ae


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureReport:
    weighted_length: float
    weighted_area: float
    error_estimate: float


def weighted_length(curve: BoundaryCurve, p: float, tol: float = DEFAULT_TOL) -> float:
    """Integral of r**p ds along the curve."""
    val, _ = weighted_length_report(curve, p, tol)
    return val


def weighted_length_report(
    curve: BoundaryCurve, p: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    p = validate_exponent(p)
    if not tol > 0.0:
        raise ValidationError("tolerance must be positive")
    curve.validate()
    seg_tol = tol / max(1, len(curve.segments))
    total = 0.0
    err = 0.0
    for seg in curve.segments:
        lv, le, _, _ = _segment_measures(seg, p, seg_tol)
        total += lv
        err += le
    if err > tol:
        raise QuadratureError(
            f"weighted length error estimate {err:.3e} exceeds tol {tol:g}"
        )
    return total, err


def weighted_area(curve: BoundaryCurve, p: float, tol: float = DEFAULT_TOL) -> float:
    """Signed weighted area enclosed by a closed curve (positive when ccw).

    Self-intersecting loops are not detected; their result is undefined.
    """
    val, _ = weighted_area_report(curve, p, tol)
    return val


def weighted_area_report(
    curve: BoundaryCurve, p: float, tol: float = DEFAULT_TOL
) -> tuple[float, float]:
    p = validate_exponent(p)
    if not tol > 0.0:
        raise ValidationError("tolerance must be positive")
    if not curve.closed:
        raise ValidationError("weighted area requires a closed curve")
    curve.validate()
    seg_tol = tol / max(1, len(curve.segments))
    total = 0.0
    err = 0.0
    for seg in curve.segments:
        _, _, av, ae = _segment_measures(seg, p, seg_tol)
        total += av
        err += ae
    scale = 1.0 / (p + 2.0)
    if err * scale > tol:
        raise QuadratureError(
            f"weighted area error estimate {err * scale:.3e} exceeds tol {tol:g}"
        )
    return total * scale, err * scale


def measure_curve(curve: BoundaryCurve, p: float, tol: float = DEFAULT_TOL) -> MeasureReport:
    """Length and signed area of a closed curve with a combined error estimate."""
    length, lerr = weighted_length_report(curve, p, tol)
    area, aerr = weighted_area_report(curve, p, tol)
    return MeasureReport(length, area, max(lerr, aerr))


def scale_geometry(obj, lam: float):
    """Scale a segment, curve or candidate about the origin by lam > 0."""
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0.0):
        raise ValidationError(f"scale factor must be positive, got {lam}")
    return obj.scaled(lam)

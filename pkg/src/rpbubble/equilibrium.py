"""Equilibrium diagnostics for bubble clusters under the density r**p.

Checks the three first-variation conditions: boundary curves meet in threes at
120 degrees away from the origin, each curve has constant curvature parameter,
and the curvature contributions around the interface cancel. Also implements
the pinch deformation that shows two tangent circles are not in equilibrium
under area-preserving Lipschitz deformations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularityError, ValidationError
from .geometry import BoundaryCurve, CircularArc, LineSegment, Polyline
from .measure import validate_exponent, weighted_area, weighted_length

KAPPA_SAMPLES = 256  # samples per segment for constancy checks


def generalized_curvature(kappa0: float, normal, point, p: float) -> float:
    """kappa0 minus the derivative of log(r**p) along the given unit normal."""
    p = validate_exponent(p)
    nx, ny = float(normal[0]), float(normal[1])
    x, y = float(point[0]), float(point[1])
    r2 = x * x + y * y
    if r2 == 0.0:
        raise SingularityError("generalized curvature is undefined at the origin")
    return float(kappa0) - p * (nx * x + ny * y) / r2


def circle_generalized_curvature(center, R: float, point, p: float) -> float:
    """Curvature parameter of a circle at an on-circle point.

    Evaluates 1/R - (p/R) * (1 - (a x0 + b y0)/(a^2 + b^2)) for the circle of
    radius R centered at (x0, y0) and the point (a, b). The value is constant
    along the circle exactly when the circle passes through or is centered at
    the origin: (1 - p/2)/R in the first case, (1 - p)/R in the second.
    """
    p = validate_exponent(p)
    x0, y0 = float(center[0]), float(center[1])
    a, b = float(point[0]), float(point[1])
    R = float(R)
    if not (math.isfinite(R) and R > 0.0):
        raise ValidationError(f"radius must be positive, got {R}")
    dist = math.hypot(a - x0, b - y0)
    if abs(dist - R) > 1e-10 * max(1.0, R):
        raise ValidationError(f"point is off the circle by {abs(dist - R):.3e}")
    r2 = a * a + b * b
    if r2 == 0.0:
        raise SingularityError("generalized curvature is undefined at the origin")
    return 1.0 / R - (p / R) * (1.0 - (a * x0 + b * y0) / r2)


# ---------------------------------------------------------------------------
# sampled curvature along oriented segments
# ---------------------------------------------------------------------------

def _line_curvature(seg: LineSegment, p: float, n: int) -> np.ndarray:
    t = (np.arange(n) + 0.5) / n
    pts = seg.point(t)
    phi = math.atan2(seg.by - seg.ay, seg.bx - seg.ax)
    x, y = pts[:, 0], pts[:, 1]
    r2 = x * x + y * y
    return -p * (x * math.sin(phi) - y * math.cos(phi)) / r2


def _arc_curvature(seg: CircularArc, p: float, n: int) -> np.ndarray:
    t = (np.arange(n) + 0.5) / n  # interior points; endpoints may sit at 0
    pts = seg.point(t)
    sgn = 1.0 if seg.sweep > 0 else -1.0
    vals = [
        sgn * circle_generalized_curvature((seg.cx, seg.cy), seg.radius, pt, p)
        for pt in pts
    ]
    return np.asarray(vals)


def _polyline_curvature(seg: Polyline, p: float, n: int) -> np.ndarray:
    pts = seg.points
    chord = np.diff(pts, axis=0)
    h = np.hypot(chord[:, 0], chord[:, 1])
    phi_mid = np.unwrap(np.arctan2(chord[:, 1], chord[:, 0]))
    # turning rate at interior joints from consecutive chord directions
    dphi = (phi_mid[1:] - phi_mid[:-1]) / (0.5 * (h[1:] + h[:-1]))
    joints = pts[1:-1]
    phi_j = 0.5 * (phi_mid[1:] + phi_mid[:-1])
    x, y = joints[:, 0], joints[:, 1]
    r2 = x * x + y * y
    kappa = dphi - p * (x * np.sin(phi_j) - y * np.cos(phi_j)) / r2
    # trim the ends where one-sided data is noisy, then thin to n values
    m = len(kappa)
    lo = max(1, m // 200)
    kappa = kappa[lo : m - lo]
    idx = np.linspace(0, len(kappa) - 1, min(n, len(kappa))).astype(int)
    return kappa[idx]


def segment_curvature_samples(seg, p: float, n: int = KAPPA_SAMPLES) -> np.ndarray:
    """Curvature parameter sampled along a segment in its travel orientation."""
    p = validate_exponent(p)
    if isinstance(seg, CircularArc):
        return _arc_curvature(seg, p, n)
    if isinstance(seg, LineSegment):
        return _line_curvature(seg, p, n)
    if isinstance(seg, Polyline):
        return _polyline_curvature(seg, p, n)
    raise ValidationError(f"unsupported segment type {type(seg).__name__}")


# ---------------------------------------------------------------------------
# full equilibrium report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VertexAngles:
    point: tuple
    angles: tuple
    at_origin: bool


@dataclass(frozen=True)
class SegmentCurvature:
    label: str
    mean: float
    variation: float


@dataclass(frozen=True)
class EquilibriumReport:
    vertex_angles: tuple
    curvature_by_segment: tuple
    cocycle_residual: float
    verdict: str

    @property
    def is_equilibrium(self) -> bool:
        return self.verdict == "equilibrium"


def _outgoing_angle(seg, at_start: bool) -> float:
    if isinstance(seg, Polyline):
        pts = seg.points
        d = pts[1] - pts[0] if at_start else pts[-2] - pts[-1]
    else:
        d = seg.derivative(0.0) if at_start else -seg.derivative(1.0)
    return math.atan2(d[1], d[0])


def _junctions(segments: list, join_tol: float = 1e-7) -> list[tuple[np.ndarray, list]]:
    """Cluster segment endpoints; keep locations where >= 2 distinct segments meet."""
    incidences = []
    for idx, seg in enumerate(segments):
        incidences.append((seg.start(), idx, True))
        incidences.append((seg.end(), idx, False))
    clusters: list[list] = []
    for pt, idx, at_start in incidences:
        for cluster in clusters:
            if np.hypot(*(pt - cluster[0][0])) <= join_tol:
                cluster.append((pt, idx, at_start))
                break
        else:
            clusters.append([(pt, idx, at_start)])
    out = []
    for cluster in clusters:
        if len({idx for _, idx, _ in cluster}) >= 2:
            loc = np.mean([c[0] for c in cluster], axis=0)
            rays = [(idx, at_start) for _, idx, at_start in cluster]
            out.append((loc, rays))
    return out


def check_equilibrium(
    candidate,
    tol_angle: float = 1e-6,
    tol_curv: float = 1e-6,
) -> EquilibriumReport:
    """Verify 120-degree meetings, per-segment curvature constancy and the
    curvature sum across the interface.

    Angles at a vertex sitting on the origin are measured and reported but do
    not enter the verdict; the density vanishes there and the meeting rule
    does not apply.
    """
    p = candidate.p
    outer1, outer2 = candidate.outer_segments()
    interface = list(candidate.interface)
    labeled = (
        [(f"region1/{i}", seg) for i, seg in enumerate(outer1)]
        + [(f"region2/{i}", seg) for i, seg in enumerate(outer2)]
        + [(f"interface/{i}", seg) for i, seg in enumerate(interface)]
    )
    segments = [seg for _, seg in labeled]

    reasons = []

    # vertex angles
    scale = max(1.0, max(abs(v) for seg in segments for v in np.ravel(seg.start())))
    vertex_reports = []
    for loc, rays in _junctions(segments):
        angles = sorted(_outgoing_angle(segments[i], st) for i, st in rays)
        gaps = [
            (angles[(k + 1) % len(angles)] - angles[k]) % (2.0 * math.pi)
            for k in range(len(angles))
        ]
        at_origin = bool(np.hypot(*loc) <= 1e-8 * scale)
        vertex_reports.append(
            VertexAngles(point=(float(loc[0]), float(loc[1])), angles=tuple(gaps), at_origin=at_origin)
        )
        if not at_origin:
            worst = max(abs(g - 2.0 * math.pi / 3.0) for g in gaps)
            if worst > tol_angle:
                reasons.append(f"vertex angle off 120 deg by {worst:.3e}")

    # curvature constancy
    stats = []
    means = {}
    for label, seg in labeled:
        vals = segment_curvature_samples(seg, p)
        mean = float(np.mean(vals))
        variation = float(np.max(vals) - np.min(vals))
        stats.append(SegmentCurvature(label=label, mean=mean, variation=variation))
        means[label] = mean
        if variation > tol_curv:
            reasons.append(f"{label} curvature varies by {variation:.3e}")

    # curvature sum across the interface (only meaningful with junctions)
    if interface and vertex_reports:
        k1 = float(np.mean([means[f"region1/{i}"] for i in range(len(outer1))]))
        k2 = float(np.mean([means[f"region2/{i}"] for i in range(len(outer2))]))
        # interface curvature in the orientation region 2 gives it
        k_int = 0.0
        for iseg in interface:
            oriented = iseg
            for seg in candidate.region2.segments:
                if seg == iseg or seg == iseg.reversed():
                    oriented = seg
                    break
            k_int += float(np.mean(segment_curvature_samples(oriented, p)))
        residual = (k1 - k2) + k_int
        if abs(residual) > tol_curv:
            reasons.append(f"curvature sum across interface {residual:.3e}")
    else:
        residual = 0.0

    verdict = "equilibrium" if not reasons else "violated(" + "; ".join(reasons) + ")"
    return EquilibriumReport(
        vertex_angles=tuple(vertex_reports),
        curvature_by_segment=tuple(stats),
        cocycle_residual=residual,
        verdict=verdict,
    )


# ---------------------------------------------------------------------------
# the tangent-circle pinch
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PinchReport:
    saved_perimeter: float
    added_perimeter: float
    delta: float
    area_imbalance: float


def pinch_delta(p: float, R1: float, R2: float, r: float, tol: float = 1e-11) -> PinchReport:
    """Perimeter change when the upper arcs of two tangent circles are pinched.

    Circle 1 (radius R1) sits left of the y axis, circle 2 (radius R2) right,
    both through the origin. The upper piece of circle 1 inside the disk of
    radius r about the origin is rerouted onto circle 2 and an arc of the
    radius-r circle. Returns the weighted perimeter saved and added, their
    difference, and the weighted area transferred to region 1 (the deformation
    does not restore it; the imbalance is reported instead).
    """
    p = validate_exponent(p)
    R1, R2, r = float(R1), float(R2), float(r)
    if not (R1 > 0.0 and R2 > 0.0):
        raise ValidationError("circle radii must be positive")
    if not (0.0 < r < min(R1, R2)):
        raise ValidationError(f"pinch radius must lie in (0, {min(R1, R2)}), got {r}")

    tau1 = 2.0 * math.asin(r / (2.0 * R1))
    sigma2 = 2.0 * math.asin(r / (2.0 * R2))
    # circle 1 about (-R1, 0): angle 0 is the origin, tau1 the upper exit point
    arc_c1 = CircularArc(-R1, 0.0, R1, 0.0, tau1, ccw=True)
    # circle 2 about (R2, 0): angle pi is the origin
    arc_c2 = CircularArc(R2, 0.0, R2, math.pi, math.pi - sigma2, ccw=False)
    zA = arc_c1.end()
    zB = arc_c2.end()
    theta_a = math.atan2(zA[1], zA[0])
    theta_b = math.atan2(zB[1], zB[0])
    arc_c = CircularArc(0.0, 0.0, r, theta_b, theta_a, ccw=True)

    saved = weighted_length(BoundaryCurve((arc_c1,)), p, tol)
    added = weighted_length(BoundaryCurve((arc_c,)), p, tol)
    lune = BoundaryCurve((arc_c2, arc_c, arc_c1.reversed()), closed=True)
    imbalance = weighted_area(lune, p, tol)
    return PinchReport(
        saved_perimeter=saved,
        added_perimeter=added,
        delta=added - saved,
        area_imbalance=imbalance,
    )


def pinch_threshold(p: float, R1: float, R2: float, samples: int = 64) -> float:
    """Largest pinch radius below which the deformation still saves perimeter."""
    from scipy.optimize import brentq

    p = validate_exponent(p)
    r_hi = 0.999 * min(R1, R2)
    grid = np.geomspace(1e-4 * min(R1, R2), r_hi, samples)
    deltas = [pinch_delta(p, R1, R2, float(r)).delta for r in grid]
    if deltas[0] >= 0.0:
        raise ValidationError("pinch does not save perimeter even at small radii")
    for i in range(1, len(grid)):
        if deltas[i] >= 0.0:
            return float(
                brentq(
                    lambda r: pinch_delta(p, R1, R2, r).delta,
                    float(grid[i - 1]),
                    float(grid[i]),
                    xtol=1e-12,
                )
            )
    return float(r_hi)

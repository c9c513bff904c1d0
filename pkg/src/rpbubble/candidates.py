"""The four equilibrium double-bubble candidates at prescribed weighted areas.

All builders place their configuration in the canonical pose used everywhere
in this package: the distinguished vertex (or tangency point, or common
center) at the origin. Weighted measures are invariant under rotations about
the origin, so the residual rotation freedom is fixed arbitrarily.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq
from scipy.special import gamma

from .cgc import ShootingResult, _axis_weighted_length, shoot_symmetric_arc
from .errors import ConstructionError, RpbubbleError, ValidationError
from .geometry import TWO_PI, BoundaryCurve, CircularArc, LineSegment, Polyline
from .measure import validate_exponent, weighted_area, weighted_length

KINDS = ("standard", "symmetric", "two-circles", "concentric")


# ---------------------------------------------------------------------------
# closed forms for circles centered at / passing through the origin
# ---------------------------------------------------------------------------

def centered_disk_area(p: float, R: float) -> float:
    return TWO_PI * R ** (p + 2.0) / (p + 2.0)

def centered_disk_radius(p: float, area: float) -> float:
    return ((p + 2.0) * area / TWO_PI) ** (1.0 / (p + 2.0))

def centered_circle_length(p: float, R: float) -> float:
    return TWO_PI * R ** (p + 1.0)

def _cos_power_integral(m: float) -> float:
    # integral of cos(t)**m over (-pi/2, pi/2)
    return math.sqrt(math.pi) * gamma((m + 1.0) / 2.0) / gamma(m / 2.0 + 1.0)

def origin_disk_area(p: float, R: float) -> float:
    """Weighted area of the disk of radius R whose boundary passes through 0."""
    return 2.0 ** (p + 2.0) / (p + 2.0) * _cos_power_integral(p + 2.0) * R ** (p + 2.0)

def origin_disk_radius(p: float, area: float) -> float:
    coeff = 2.0 ** (p + 2.0) / (p + 2.0) * _cos_power_integral(p + 2.0)
    return (area / coeff) ** (1.0 / (p + 2.0))

def origin_circle_length(p: float, R: float) -> float:
    """Weighted circumference of a circle of radius R through the origin."""
    return 2.0 ** (p + 1.0) * _cos_power_integral(p) * R ** (p + 1.0)


# ---------------------------------------------------------------------------
# candidate container
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class DoubleBubbleCandidate:
    kind: str
    p: float
    region1: BoundaryCurve
    region2: BoundaryCurve
    interface: tuple  # shared segments, oriented as region1 traverses them
    area1: float
    area2: float
    perimeter: float
    params: dict

    def scaled(self, lam: float) -> "DoubleBubbleCandidate":
        lam = float(lam)
        if not (math.isfinite(lam) and lam > 0.0):
            raise ValidationError(f"scale factor must be positive, got {lam}")
        grow_a = lam ** (self.p + 2.0)
        grow_l = lam ** (self.p + 1.0)
        return replace(
            self,
            region1=self.region1.scaled(lam),
            region2=self.region2.scaled(lam),
            interface=tuple(seg.scaled(lam) for seg in self.interface),
            area1=self.area1 * grow_a,
            area2=self.area2 * grow_a,
            perimeter=self.perimeter * grow_l,
            params=dict(self.params, scaled_by=self.params.get("scaled_by", 1.0) * lam),
        )

    def outer_segments(self) -> tuple[list, list]:
        """Region boundary segments with the shared interface copies removed."""

        def strip(region):
            out = []
            for seg in region.segments:
                shared = any(
                    seg == iseg or seg == iseg.reversed() for iseg in self.interface
                )
                if not shared:
                    out.append(seg)
            return out

        return strip(self.region1), strip(self.region2)


def _check_targets(a1: float, a2: float) -> tuple[float, float]:
    a1, a2 = float(a1), float(a2)
    if not (math.isfinite(a1) and a1 > 0.0 and math.isfinite(a2) and a2 > 0.0):
        raise ValidationError(f"target areas must be positive, got ({a1}, {a2})")
    return a1, a2


# ---------------------------------------------------------------------------
# concentric circles
# ---------------------------------------------------------------------------

def build_concentric(p: float, a1: float, a2: float, tol: float = 1e-8) -> DoubleBubbleCandidate:
    """Inner disk of area a1 plus surrounding annulus of area a2."""
    p = validate_exponent(p)
    a1, a2 = _check_targets(a1, a2)
    R1 = centered_disk_radius(p, a1)
    R2 = centered_disk_radius(p, a1 + a2)
    inner = CircularArc(0.0, 0.0, R1, 0.0, TWO_PI, ccw=True)
    outer = CircularArc(0.0, 0.0, R2, 0.0, TWO_PI, ccw=True)
    region1 = BoundaryCurve((inner,), closed=True)
    region2 = BoundaryCurve((outer, inner.reversed()), closed=True)

    quad_tol = min(1e-10, tol)
    perimeter = weighted_length(region1, p, quad_tol) + weighted_length(
        BoundaryCurve((outer,)), p, quad_tol
    )
    closed_form = centered_circle_length(p, R1) + centered_circle_length(p, R2)
    if abs(perimeter - closed_form) > tol * max(1.0, closed_form):
        raise ConstructionError(
            f"concentric perimeter cross-check failed: {perimeter} vs {closed_form}"
        )
    return DoubleBubbleCandidate(
        kind="concentric",
        p=p,
        region1=region1,
        region2=region2,
        interface=(inner,),
        area1=a1,
        area2=a2,
        perimeter=perimeter,
        params={"R1": R1, "R2": R2},
    )


# ---------------------------------------------------------------------------
# two circles tangent at the origin
# ---------------------------------------------------------------------------

def build_two_circles(p: float, a1: float, a2: float, tol: float = 1e-8) -> DoubleBubbleCandidate:
    """Two circles through the origin, tangent there, on opposite sides."""
    p = validate_exponent(p)
    a1, a2 = _check_targets(a1, a2)
    R1 = origin_disk_radius(p, a1)
    R2 = origin_disk_radius(p, a2)
    # circle 1 sits on the left; both boundaries start and end at the origin
    c1 = CircularArc(-R1, 0.0, R1, 0.0, TWO_PI, ccw=True)
    c2 = CircularArc(R2, 0.0, R2, math.pi, math.pi + TWO_PI, ccw=True)
    region1 = BoundaryCurve((c1,), closed=True)
    region2 = BoundaryCurve((c2,), closed=True)

    quad_tol = min(1e-10, tol)
    perimeter = weighted_length(region1, p, quad_tol) + weighted_length(region2, p, quad_tol)
    closed_form = origin_circle_length(p, R1) + origin_circle_length(p, R2)
    if abs(perimeter - closed_form) > tol * max(1.0, closed_form):
        raise ConstructionError(
            f"two-circles perimeter cross-check failed: {perimeter} vs {closed_form}"
        )
    return DoubleBubbleCandidate(
        kind="two-circles",
        p=p,
        region1=region1,
        region2=region2,
        interface=(),
        area1=a1,
        area2=a2,
        perimeter=perimeter,
        params={"R1": R1, "R2": R2},
    )


# ---------------------------------------------------------------------------
# standard double bubble with a vertex at the origin
# ---------------------------------------------------------------------------

def _standard_unit_geometry(t: float) -> dict:
    """Geometry for circle radii (1, t), one vertex at 0, the other on +y.

    The region-1 circle (radius 1) is centered left of the vertex chord, the
    region-2 circle (radius t) to the right. The separating arc has curvature
    1/t - 1 and bows into region 1; at t = 1 it degenerates to the chord.
    """
    d = math.sqrt(1.0 + t * t - t)  # center distance (law of cosines at 60 deg)
    h = math.sqrt(3.0) * t / d  # vertex chord length
    x1 = (2.0 - t) / (2.0 * d)
    x2 = t * (2.0 * t - 1.0) / (2.0 * d)
    o1 = (-x1, 0.5 * h)
    o2 = (x2, 0.5 * h)

    a2 = math.atan2(0.5 * h, x1)  # top vertex seen from o1
    outer1 = CircularArc(o1[0], o1[1], 1.0, a2, TWO_PI - a2, ccw=True)

    b1 = math.atan2(-0.5 * h, -x2)  # origin vertex seen from o2, in (-pi, 0)
    outer2 = CircularArc(o2[0], o2[1], t, b1, -b1, ccw=True)

    if abs(1.0 - 1.0 / t) < 1e-12:
        interface = LineSegment(0.0, 0.0, 0.0, h)
        rm = math.inf
        om = None
    else:
        rm = t / (1.0 - t)
        xm = math.sqrt(rm * rm - 0.25 * h * h)
        om = (xm, 0.5 * h)
        c1 = math.atan2(-0.5 * h, -xm)
        c2 = math.atan2(0.5 * h, -xm)
        interface = CircularArc(xm, 0.5 * h, rm, c1, c2, ccw=False)

    region1 = BoundaryCurve((outer1, interface), closed=True)
    region2 = BoundaryCurve((outer2, interface.reversed()), closed=True)
    return {
        "region1": region1,
        "region2": region2,
        "interface": interface,
        "outer1": outer1,
        "outer2": outer2,
        "d": d,
        "h": h,
        "rm": rm,
        "o1": o1,
        "o2": o2,
        "om": om,
    }


def build_standard(
    p: float,
    a1: float,
    a2: float,
    tol: float = 1e-8,
    *,
    unordered: str = "swap",
) -> DoubleBubbleCandidate:
    """Euclidean standard double bubble posed with one vertex at the origin.

    Solves the shape ratio t = r2/r1 so the weighted areas have the requested
    ratio, then rescales about the origin to hit them exactly. Requires
    a1 >= a2; with ``unordered="swap"`` reversed targets swap the region
    labels, with ``unordered="error"`` they raise.
    """
    p = validate_exponent(p)
    a1, a2 = _check_targets(a1, a2)
    if a2 > a1:
        if unordered == "swap":
            cand = build_standard(p, a2, a1, tol, unordered="error")
            return replace(
                cand,
                region1=cand.region2,
                region2=cand.region1,
                area1=cand.area2,
                area2=cand.area1,
                params=dict(cand.params, swapped=True),
            )
        raise ValidationError("build_standard requires a1 >= a2")

    quad_tol = min(1e-10, tol)

    def areas(t: float) -> tuple[float, float, dict]:
        geo = _standard_unit_geometry(t)
        w1 = weighted_area(geo["region1"], p, quad_tol)
        w2 = weighted_area(geo["region2"], p, quad_tol)
        return w1, w2, geo

    ratio = a2 / a1
    if abs(ratio - 1.0) < 1e-14:
        t = 1.0
    else:

        def g(t: float) -> float:
            w1, w2, _ = areas(t)
            return w2 / w1 - ratio

        lo = 1e-3
        if g(lo) > 0.0:
            raise ConstructionError(
                f"area ratio {ratio} is below the reachable range of the shape family"
            )
        t = brentq(g, lo, 1.0, xtol=1e-12)

    w1, w2, geo = areas(t)
    lam = (a1 / w1) ** (1.0 / (p + 2.0))
    if abs(lam ** (p + 2.0) * w2 - a2) > tol * max(1.0, a2):
        raise ConstructionError("standard bubble areas missed the construction tolerance")

    outer1 = geo["outer1"].scaled(lam)
    outer2 = geo["outer2"].scaled(lam)
    interface = geo["interface"].scaled(lam)
    region1 = BoundaryCurve((outer1, interface), closed=True)
    region2 = BoundaryCurve((outer2, interface.reversed()), closed=True)
    perimeter = (
        weighted_length(BoundaryCurve((outer1,)), p, quad_tol)
        + weighted_length(BoundaryCurve((outer2,)), p, quad_tol)
        + weighted_length(BoundaryCurve((interface,)), p, quad_tol)
    )
    rm = geo["rm"]
    return DoubleBubbleCandidate(
        kind="standard",
        p=p,
        region1=region1,
        region2=region2,
        interface=(interface,),
        area1=a1,
        area2=a2,
        perimeter=perimeter,
        params={
            "r1": lam,
            "r2": lam * t,
            "t": t,
            "lam": lam,
            "center_distance": lam * geo["d"],
            "vertex_top_y": lam * geo["h"],
            "interface_radius": rm if math.isinf(rm) else lam * rm,
        },
    )


# ---------------------------------------------------------------------------
# mirror-symmetric bubble from the shooting solve
# ---------------------------------------------------------------------------

def build_symmetric(
    p: float,
    area: float,
    tol: float = 1e-8,
    *,
    shoot_tol: float = 1e-10,
    shot: ShootingResult | None = None,
) -> DoubleBubbleCandidate:
    """Two constant-curvature lobes joined by a segment of the y axis.

    Both regions receive the same weighted area (the configuration is its own
    mirror image, and the density is radial). A precomputed ``shot`` may be
    supplied to skip the curvature solve.
    """
    p = validate_exponent(p)
    area = float(area)
    if not (math.isfinite(area) and area > 0.0):
        raise ValidationError(f"target area must be positive, got {area}")
    if shot is None:
        shot = shoot_symmetric_arc(p, shoot_tol)

    lam = (area / shot.lobe_area) ** (1.0 / (p + 2.0))
    pts = lam * shot.arc.segments[0].points
    y_top = lam * 1.0
    y_bot = lam * shot.bottom_vertex_y

    axis_down = LineSegment(0.0, y_top, 0.0, y_bot)
    region1 = BoundaryCurve((axis_down, Polyline(pts[::-1].copy())), closed=True)
    left = pts.copy()
    left[:, 0] = -left[:, 0]
    region2 = BoundaryCurve((axis_down.reversed(), Polyline(left)), closed=True)

    interface_len = _axis_weighted_length(shot.bottom_vertex_y, 1.0, p)
    perimeter = lam ** (p + 1.0) * (2.0 * shot.arc_weighted_length + interface_len)
    return DoubleBubbleCandidate(
        kind="symmetric",
        p=p,
        region1=region1,
        region2=region2,
        interface=(axis_down,),
        area1=area,
        area2=area,
        perimeter=perimeter,
        params={
            "kappa": shot.kappa,
            "landing_residual": shot.landing_residual,
            "bottom_vertex_y": y_bot,
            "top_vertex_y": y_top,
            "lam": lam,
            "alternates": tuple(shot.alternates),
        },
    )


# ---------------------------------------------------------------------------
# table of all four candidates
# ---------------------------------------------------------------------------

@dataclass
class PerimeterTable:
    p_values: tuple
    rows: dict  # kind -> tuple of perimeters (None where a builder failed)
    errors: dict  # (kind, p) -> message
    candidates: dict  # (kind, p) -> DoubleBubbleCandidate


def build_candidate(kind: str, p: float, a1: float, a2: float, tol: float = 1e-8):
    if kind == "standard":
        return build_standard(p, a1, a2, tol)
    if kind == "symmetric":
        if abs(a1 - a2) > 1e-12 * max(a1, a2):
            raise ValidationError("symmetric candidate is defined for equal areas only")
        return build_symmetric(p, a1, tol)
    if kind == "two-circles":
        return build_two_circles(p, a1, a2, tol)
    if kind == "concentric":
        return build_concentric(p, a1, a2, tol)
    raise ValidationError(f"unknown candidate kind {kind!r}")


def perimeter_table(p_values, tol: float = 1e-8) -> PerimeterTable:
    """All four candidate perimeters at unit areas for each requested p."""
    p_values = tuple(float(p) for p in p_values)
    if not p_values:
        raise ValidationError("p values must be nonempty")
    for p in p_values:
        validate_exponent(p)
    rows = {kind: [] for kind in KINDS}
    errors: dict = {}
    cands: dict = {}
    for p in p_values:
        for kind in KINDS:
            try:
                cand = build_candidate(kind, p, 1.0, 1.0, tol)
                rows[kind].append(cand.perimeter)
                cands[(kind, p)] = cand
            except RpbubbleError as exc:
                rows[kind].append(None)
                errors[(kind, p)] = f"{type(exc).__name__}: {exc}"
    return PerimeterTable(
        p_values=p_values,
        rows={kind: tuple(vals) for kind, vals in rows.items()},
        errors=errors,
        candidates=cands,
    )

"""Piecewise planar paths: circular arcs, line segments and sampled polylines.

A BoundaryCurve is an ordered chain of segments. A closed curve may consist of
several independently closed components (an annulus boundary, for example);
within each component consecutive segment endpoints must agree to the join
tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ValidationError

TWO_PI = 2.0 * math.pi

# Absolute coordinate tolerance for declaring two segment endpoints joined.
JOIN_TOL = 1e-9


def _finite_pair(x: float, y: float, what: str) -> tuple[float, float]:
    x = float(x)
    y = float(y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValidationError(f"{what} must have finite coordinates, got ({x}, {y})")
    return x, y


def rotated_xy(x: float, y: float, angle: float) -> tuple[float, float]:
    c, s = math.cos(angle), math.sin(angle)
    return c * x - s * y, s * x + c * y


def _signed_sweep(start: float, end: float, ccw: bool) -> float:
    raw = end - start
    if ccw:
        out = raw % TWO_PI
        if out == 0.0 and raw != 0.0:
            out = TWO_PI
        return out
    out = (-raw) % TWO_PI
    if out == 0.0 and raw != 0.0:
        out = TWO_PI
    return -out


@dataclass(frozen=True)
class CircularArc:
    """Arc of the circle with the given center and radius.

    The arc runs from ``start_angle`` to ``end_angle`` in the direction
    selected by ``ccw``. Angles are not reduced mod 2*pi, so a full circle is
    written with ``end_angle = start_angle + 2*pi``.
    """

    cx: float
    cy: float
    radius: float
    start_angle: float
    end_angle: float
    ccw: bool = True

    def __post_init__(self):
        _finite_pair(self.cx, self.cy, "arc center")
        if not (math.isfinite(self.radius) and self.radius > 0.0):
            raise ValidationError(f"arc radius must be positive, got {self.radius}")
        if not (math.isfinite(self.start_angle) and math.isfinite(self.end_angle)):
            raise ValidationError("arc angles must be finite")

    @property
    def sweep(self) -> float:
        """Signed angular extent; positive means counterclockwise travel."""
        return _signed_sweep(self.start_angle, self.end_angle, self.ccw)

    def point(self, t) -> np.ndarray:
        th = self.start_angle + self.sweep * np.asarray(t, dtype=float)
        return np.stack(
            [self.cx + self.radius * np.cos(th), self.cy + self.radius * np.sin(th)],
            axis=-1,
        )

    def derivative(self, t) -> np.ndarray:
        th = self.start_angle + self.sweep * np.asarray(t, dtype=float)
        w = self.radius * self.sweep
        return np.stack([-w * np.sin(th), w * np.cos(th)], axis=-1)

    def start(self) -> np.ndarray:
        return self.point(0.0)

    def end(self) -> np.ndarray:
        return self.point(1.0)

    def euclid_length(self) -> float:
        return abs(self.sweep) * self.radius

    def reversed(self) -> "CircularArc":
        return CircularArc(
            self.cx, self.cy, self.radius, self.end_angle, self.start_angle, not self.ccw
        )

    def scaled(self, lam: float) -> "CircularArc":
        return CircularArc(
            lam * self.cx,
            lam * self.cy,
            lam * self.radius,
            self.start_angle,
            self.end_angle,
            self.ccw,
        )

    def rotated(self, angle: float) -> "CircularArc":
        cx, cy = rotated_xy(self.cx, self.cy, angle)
        return CircularArc(
            cx, cy, self.radius, self.start_angle + angle, self.end_angle + angle, self.ccw
        )

    def mirrored_y(self) -> "CircularArc":
        """Reflection across the y axis (x -> -x); reverses orientation sense."""
        return CircularArc(
            -self.cx,
            self.cy,
            self.radius,
            math.pi - self.start_angle,
            math.pi - self.end_angle,
            not self.ccw,
        )


@dataclass(frozen=True)
class LineSegment:
    ax: float
    ay: float
    bx: float
    by: float

    def __post_init__(self):
        _finite_pair(self.ax, self.ay, "segment start")
        _finite_pair(self.bx, self.by, "segment end")
        if self.ax == self.bx and self.ay == self.by:
            raise ValidationError("degenerate zero-length segment")

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.stack(
            [self.ax + (self.bx - self.ax) * t, self.ay + (self.by - self.ay) * t],
            axis=-1,
        )

    def derivative(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return np.stack(
            [np.full_like(t, self.bx - self.ax), np.full_like(t, self.by - self.ay)],
            axis=-1,
        )

    def start(self) -> np.ndarray:
        return np.array([self.ax, self.ay])

    def end(self) -> np.ndarray:
        return np.array([self.bx, self.by])

    def euclid_length(self) -> float:
        return math.hypot(self.bx - self.ax, self.by - self.ay)

    def reversed(self) -> "LineSegment":
        return LineSegment(self.bx, self.by, self.ax, self.ay)

    def scaled(self, lam: float) -> "LineSegment":
        return LineSegment(lam * self.ax, lam * self.ay, lam * self.bx, lam * self.by)

    def rotated(self, angle: float) -> "LineSegment":
        ax, ay = rotated_xy(self.ax, self.ay, angle)
        bx, by = rotated_xy(self.bx, self.by, angle)
        return LineSegment(ax, ay, bx, by)

    def mirrored_y(self) -> "LineSegment":
        return LineSegment(-self.ax, self.ay, -self.bx, self.by)


@dataclass(frozen=True, eq=False)
class Polyline:
    """Sampled curve; consecutive samples must be distinct points."""

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 2:
            raise ValidationError("polyline needs an (n, 2) array with n >= 2")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("polyline samples must be finite")
        steps = np.hypot(np.diff(pts[:, 0]), np.diff(pts[:, 1]))
        if np.any(steps == 0.0):
            raise ValidationError("polyline arclength must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Polyline) and np.array_equal(self.points, other.points)

    @property
    def arclengths(self) -> np.ndarray:
        steps = np.hypot(np.diff(self.points[:, 0]), np.diff(self.points[:, 1]))
        return np.concatenate([[0.0], np.cumsum(steps)])

    def point(self, t) -> np.ndarray:
        s = np.asarray(t, dtype=float) * self.arclengths[-1]
        cums = self.arclengths
        x = np.interp(s, cums, self.points[:, 0])
        y = np.interp(s, cums, self.points[:, 1])
        return np.stack([x, y], axis=-1)

    def start(self) -> np.ndarray:
        return self.points[0].copy()

    def end(self) -> np.ndarray:
        return self.points[-1].copy()

    def euclid_length(self) -> float:
        return float(self.arclengths[-1])

    def reversed(self) -> "Polyline":
        return Polyline(self.points[::-1].copy())

    def scaled(self, lam: float) -> "Polyline":
        return Polyline(lam * self.points)

    def rotated(self, angle: float) -> "Polyline":
        c, s = math.cos(angle), math.sin(angle)
        x, y = self.points[:, 0], self.points[:, 1]
        return Polyline(np.stack([c * x - s * y, s * x + c * y], axis=-1))

    def mirrored_y(self) -> "Polyline":
        pts = self.points.copy()
        pts[:, 0] = -pts[:, 0]
        return Polyline(pts)


Segment = Union[CircularArc, LineSegment, Polyline]


@dataclass(frozen=True, eq=False)
class BoundaryCurve:
    """Ordered chain of segments, optionally closed."""

    segments: tuple
    closed: bool = False

    def __post_init__(self):
        segs = tuple(self.segments)
        if not segs:
            raise ValidationError("boundary curve needs at least one segment")
        for seg in segs:
            if not isinstance(seg, (CircularArc, LineSegment, Polyline)):
                raise ValidationError(f"unsupported segment type {type(seg).__name__}")
        object.__setattr__(self, "segments", segs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BoundaryCurve)
            and self.closed == other.closed
            and len(self.segments) == len(other.segments)
            and all(a == b for a, b in zip(self.segments, other.segments))
        )

    def _runs(self, join_tol: float) -> list[list]:
        runs = [[self.segments[0]]]
        for seg in self.segments[1:]:
            prev_end = runs[-1][-1].end()
            if np.hypot(*(seg.start() - prev_end)) <= join_tol:
                runs[-1].append(seg)
            else:
                runs.append([seg])
        return runs

    def validate(self, join_tol: float = JOIN_TOL) -> None:
        runs = self._runs(join_tol)
        if self.closed:
            for run in runs:
                gap = np.hypot(*(run[-1].end() - run[0].start()))
                if gap > join_tol:
                    raise ValidationError(
                        f"closed curve component does not close (gap {gap:.3e})"
                    )
        elif len(runs) > 1:
            raise ValidationError("open curve must be a single connected chain")

    def components(self, join_tol: float = JOIN_TOL) -> list["BoundaryCurve"]:
        return [BoundaryCurve(tuple(run), self.closed) for run in self._runs(join_tol)]

    def start(self) -> np.ndarray:
        return self.segments[0].start()

    def end(self) -> np.ndarray:
        return self.segments[-1].end()

    def euclid_length(self) -> float:
        return sum(seg.euclid_length() for seg in self.segments)

    def reversed(self) -> "BoundaryCurve":
        return BoundaryCurve(
            tuple(seg.reversed() for seg in reversed(self.segments)), self.closed
        )

    def scaled(self, lam: float) -> "BoundaryCurve":
        return BoundaryCurve(tuple(seg.scaled(lam) for seg in self.segments), self.closed)

    def rotated(self, angle: float) -> "BoundaryCurve":
        return BoundaryCurve(tuple(seg.rotated(angle) for seg in self.segments), self.closed)

    def mirrored_y(self) -> "BoundaryCurve":
        return BoundaryCurve(tuple(seg.mirrored_y() for seg in self.segments), self.closed)

    def sample(self, per_segment: int = 128) -> np.ndarray:
        """Concatenated point samples, mainly for bounding boxes and rendering."""
        t = np.linspace(0.0, 1.0, per_segment)
        return np.concatenate([seg.point(t) for seg in self.segments], axis=0)

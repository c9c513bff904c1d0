"""Curves of constant generalized curvature and the symmetric-lobe shooting solve.

Convention used throughout: a curve carries a travel direction with tangent
angle phi, and its curvature parameter kappa under the density r**p satisfies

    dphi/ds = kappa + p * (x*sin(phi) - y*cos(phi)) / (x**2 + y**2).

The second term is p times the derivative of log r along the rightward unit
normal N = (sin phi, -cos phi), so kappa is the turning rate corrected for the
density gradient across the curve. Consequences pinned by this choice:

* a radial line has kappa = 0 for every p;
* a circle through the origin traversed with its center on the left has
  kappa = (1 - p/2)/R, hence kappa = 0 at p = 2;
* a circle centered at the origin traversed counterclockwise has
  kappa = (1 - p)/R.

Reversing the travel direction negates kappa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import (
    BracketingError,
    ConstructionError,
    NonTerminationError,
    SingularityError,
    ValidationError,
)
from .geometry import BoundaryCurve, Polyline
from .measure import validate_exponent

# Shooting layout for the mirror-symmetric double bubble: the top vertex is
# pinned at (0, 1), the interface runs down the y axis, and the right lobe is
# launched 120 degrees away from the downward interface direction.
TOP_VERTEX = (0.0, 1.0)
LAUNCH_PHI = math.pi / 6.0
LANDING_PHI = 5.0 * math.pi / 6.0  # travel direction on return, mod 2*pi

DEFAULT_GUARD_RADIUS = 1e-8
DEFAULT_STEP_TOL = 1e-10


def wrap_pi(x: float) -> float:
    return (x + math.pi) % (2.0 * math.pi) - math.pi


@dataclass(frozen=True)
class CurveState:
    x: float
    y: float
    phi: float
    s: float = 0.0


def cgc_derivative(state: CurveState, kappa: float, p: float) -> tuple[float, float, float]:
    """Unit-speed rate of change (dx/ds, dy/ds, dphi/ds)."""
    p = validate_exponent(p)
    r2 = state.x * state.x + state.y * state.y
    if r2 == 0.0:
        raise SingularityError("curvature flow is undefined at the origin")
    c, s = math.cos(state.phi), math.sin(state.phi)
    dphi = kappa + p * (state.x * s - state.y * c) / r2
    return c, s, dphi


@dataclass(eq=False)
class CgcSolution:
    """Dense integration record of one constant-curvature arc."""

    kappa: float
    p: float
    s_end: float
    end_state: np.ndarray  # (x, y, phi) at s_end
    sol: object  # scipy OdeSolution dense output
    stopped: str  # "event" or "cap"
    weighted_length: float
    area_form: float  # integral of r**p (x dy - y dx)/(p+2) along the arc

    def states(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        """Uniform arclength grid and the (n, 3) states (x, y, phi) on it."""
        s = np.linspace(0.0, self.s_end, n)
        u = self.sol(s)
        return s, u[:3].T.copy()


def _integrate(
    x0: float,
    y0: float,
    phi0: float,
    kappa: float,
    p: float,
    *,
    stop: object,
    s_max: float,
    step_tol: float,
    guard_radius: float,
) -> CgcSolution:
    if x0 * x0 + y0 * y0 == 0.0:
        raise SingularityError("cannot start an arc at the origin")

    def rhs(s, u):
        x, y, phi = u[0], u[1], u[2]
        c, sn = math.cos(phi), math.sin(phi)
        r2 = x * x + y * y
        cross = x * sn - y * c
        rp = r2 ** (0.5 * p)
        return (c, sn, kappa + p * cross / r2, rp, rp * cross / (p + 2.0))

    def guard(s, u):
        return u[0] * u[0] + u[1] * u[1] - guard_radius * guard_radius

    guard.terminal = True
    guard.direction = -1

    events = [guard]
    if stop == "x-crossing":

        def landing(s, u):
            return u[0]

        landing.terminal = True
        landing.direction = -1
        events.append(landing)
    elif callable(stop):

        def landing(s, u):
            return stop(s, u[:3])

        landing.terminal = True
        landing.direction = 0
        events.append(landing)
    elif stop is not None:
        raise ValidationError(f"unsupported stop condition {stop!r}")

    rtol = max(step_tol, 2.5e-14)
    out = solve_ivp(
        rhs,
        (0.0, s_max),
        (x0, y0, phi0, 0.0, 0.0),
        method="DOP853",
        rtol=rtol,
        atol=step_tol,
        dense_output=True,
        events=events,
    )
    if not out.success:  # pragma: no cover - defensive
        raise NonTerminationError(f"integration failed: {out.message}")

    if out.t_events[0].size > 0:
        raise SingularityError(
            f"trajectory entered the origin guard radius at s={out.t_events[0][0]:.6g}"
        )
    if len(events) > 1 and out.t_events[1].size > 0:
        s_end = float(out.t_events[1][0])
        end_state = out.y_events[1][0]
        stopped = "event"
    else:
        if len(events) > 1:
            raise NonTerminationError(
                f"stop condition did not fire within arclength cap {s_max}"
            )
        s_end = float(out.t[-1])
        end_state = out.y[:, -1]
        stopped = "cap"

    return CgcSolution(
        kappa=kappa,
        p=p,
        s_end=s_end,
        end_state=np.asarray(end_state[:3], dtype=float),
        sol=out.sol,
        stopped=stopped,
        weighted_length=float(end_state[3]),
        area_form=float(end_state[4]),
    )


def integrate_cgc(
    start: CurveState,
    kappa: float,
    p: float,
    *,
    stop=None,
    s_max: float = 100.0,
    step_tol: float = DEFAULT_STEP_TOL,
    guard_radius: float = DEFAULT_GUARD_RADIUS,
    samples: int = 2049,
) -> BoundaryCurve:
    """Trace a constant-curvature arc and return it as a sampled curve.

    ``stop`` may be None (run to ``s_max``), the string "x-crossing"
    (terminate when x crosses zero from above, excluding the start), or a
    callable ``g(s, (x, y, phi))`` whose sign change terminates the run.
    """
    p = validate_exponent(p)
    sol = _integrate(
        start.x,
        start.y,
        start.phi,
        float(kappa),
        p,
        stop=stop,
        s_max=s_max,
        step_tol=step_tol,
        guard_radius=guard_radius,
    )
    _, states = sol.states(samples)
    return BoundaryCurve((Polyline(states[:, :2]),), closed=False)


@dataclass(frozen=True, eq=False)
class ShootingResult:
    """Right lobe of the mirror-symmetric bubble at unit top vertex."""

    kappa: float
    arc: BoundaryCurve  # sampled top (0,1) to bottom (0, bottom_vertex_y)
    landing_residual: float
    bottom_vertex_y: float
    arc_weighted_length: float
    lobe_area: float  # weighted area of the right region
    s_samples: np.ndarray
    phi_samples: np.ndarray
    alternates: tuple = ()


def _axis_weighted_length(y_lo: float, y_hi: float, p: float) -> float:
    # integral of |y|**p dy between two heights on the y axis
    def F(y):
        return math.copysign(abs(y) ** (p + 1.0) / (p + 1.0), y)

    return F(y_hi) - F(y_lo)


def _landing_residual(sol: CgcSolution) -> float:
    return wrap_pi(sol.end_state[2] - LANDING_PHI)


def shoot_symmetric_arc(
    p: float,
    shoot_tol: float = 1e-10,
    *,
    scan_range: tuple[float, float] = (-20.0, 20.0),
    scan_steps: int = 401,
    step_tol: float = 1e-11,
    s_max: float = 400.0,
    samples: int = 16385,
    guard_radius: float = DEFAULT_GUARD_RADIUS,
) -> ShootingResult:
    """Solve for the lobe curvature that closes the symmetric double bubble.

    Launches the right arc from (0, 1) at tangent angle +30 degrees and finds
    the curvature for which it meets the y axis again at 120 degrees. The scan
    collects every root; when several exist the one with the smallest
    area-normalized perimeter wins and the others are reported in
    ``alternates``.
    """
    p = validate_exponent(p)
    if not shoot_tol > 0.0:
        raise ValidationError("shooting tolerance must be positive")

    def run(kappa: float, tol: float) -> CgcSolution | None:
        try:
            return _integrate(
                TOP_VERTEX[0],
                TOP_VERTEX[1],
                LAUNCH_PHI,
                kappa,
                p,
                stop="x-crossing",
                s_max=s_max,
                step_tol=tol,
                guard_radius=guard_radius,
            )
        except (SingularityError, NonTerminationError):
            return None

    def residual_tight(kappa: float) -> float:
        sol = run(kappa, step_tol)
        return math.nan if sol is None else _landing_residual(sol)

    scan_tol = max(step_tol, 1e-8)
    kappas = np.linspace(scan_range[0], scan_range[1], scan_steps)
    coarse = np.array(
        [math.nan if (sol := run(k, scan_tol)) is None else _landing_residual(sol) for k in kappas]
    )

    roots: list[float] = []

    # runs of near-zero residual (degenerate at p = 0 where every curvature
    # closes the bubble): one representative per run, re-checked tightly
    near = np.abs(coarse) < 1e-6
    i = 0
    while i < len(kappas):
        if near[i]:
            j = i
            while j + 1 < len(kappas) and near[j + 1]:
                j += 1
            rep = float(kappas[(i + j) // 2])
            r = residual_tight(rep)
            if math.isfinite(r) and abs(r) <= shoot_tol:
                roots.append(rep)
            i = j + 1
        else:
            i += 1

    # sign changes between finite scan values
    for i in range(len(kappas) - 1):
        a, b = coarse[i], coarse[i + 1]
        if not (math.isfinite(a) and math.isfinite(b)):
            continue
        if near[i] or near[i + 1] or a * b >= 0.0:
            continue
        fa, fb = residual_tight(float(kappas[i])), residual_tight(float(kappas[i + 1]))
        if not (math.isfinite(fa) and math.isfinite(fb)) or fa * fb > 0.0:
            continue
        root = brentq(residual_tight, float(kappas[i]), float(kappas[i + 1]), xtol=1e-13)
        if abs(residual_tight(root)) <= shoot_tol:
            roots.append(float(root))

    roots = sorted(roots)
    deduped: list[float] = []
    for r in roots:
        if not deduped or abs(r - deduped[-1]) > 1e-6:
            deduped.append(r)
    if not deduped:
        raise BracketingError(
            f"no landing-angle root found for p={p} over kappa in {scan_range}"
        )

    def normalized_perimeter(kappa: float) -> tuple[float, CgcSolution | None]:
        sol = run(kappa, step_tol)
        if sol is None or sol.stopped != "event":
            return math.inf, None
        y_b = float(sol.end_state[1])
        if y_b >= TOP_VERTEX[1]:
            return math.inf, sol
        lobe_area = -sol.area_form
        if lobe_area <= 0.0:
            return math.inf, sol
        interface = _axis_weighted_length(y_b, TOP_VERTEX[1], p)
        lam = (1.0 / lobe_area) ** (1.0 / (p + 2.0))
        return lam ** (p + 1.0) * (2.0 * sol.weighted_length + interface), sol

    scored = [(normalized_perimeter(k)[0], k) for k in deduped]
    scored.sort()
    best_kappa = scored[0][1]
    if not math.isfinite(scored[0][0]):
        raise ConstructionError(f"no admissible lobe found for p={p}")
    alternates = tuple(k for _, k in scored[1:])

    final = run(best_kappa, min(step_tol, 1e-12))
    if final is None or final.stopped != "event":  # pragma: no cover - defensive
        raise ConstructionError(f"final lobe integration failed for p={p}")
    s_grid, states = final.states(samples)
    states[0, :2] = TOP_VERTEX
    states[-1, 0] = 0.0  # landing is on the axis by construction
    y_b = float(states[-1, 1])
    if not y_b < TOP_VERTEX[1]:
        raise ConstructionError("lobe landed above the launch vertex")

    return ShootingResult(
        kappa=float(best_kappa),
        arc=BoundaryCurve((Polyline(states[:, :2]),), closed=False),
        landing_residual=_landing_residual(final),
        bottom_vertex_y=y_b,
        arc_weighted_length=final.weighted_length,
        lobe_area=-final.area_form,
        s_samples=s_grid,
        phi_samples=states[:, 2].copy(),
        alternates=alternates,
    )

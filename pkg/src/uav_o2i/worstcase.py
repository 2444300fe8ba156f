"""Worst-location analysis with the UAV hovering on the building's mid-plane.

The users with the largest loss sit on the far-wall corners of the lowest
and highest floors.  With the UAV at ``(x, y_b/2, z_b/2)`` those four corners
see the same altitude difference ``z_b/2`` and the same incident angle, so
the loss reduces to a function of the angle alone.  Its stationary point is
the root in ``(0, 1)`` of the cubic in ``cos(theta)``::

    2 g3 c^3 - 2 g3 c^2 - (w/ln10 + 2 g3) c + 2 g3 = 0

which does not depend on the building at all.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, GeometryInfeasibleError, SolverError
from .geometry import BuildingSpec, Point3
from .linkbudget import LinkBudgetParams, worst_case_min_tx_power
from .pathloss import HALF_PI, RfModelParams, path_loss_dh_theta, total_path_loss
from .scenario_io import SweepTable

DEFAULT_SWEEP_STEPS = 500


@dataclass(frozen=True)
class AngleSolverResult:
    cos_theta: float
    theta: float
    residual: float
    rejected_roots: tuple[float, ...] = field(default_factory=tuple)
    iterations: int = 0

    @property
    def theta_deg(self) -> float:
        return math.degrees(self.theta)


@dataclass(frozen=True)
class StandoffResult:
    """``d_h``: horizontal run from the UAV to the worst corner, along x.
    ``d_opt``: distance from the UAV to the facade; negative means infeasible.
    """

    d_h: float
    d_opt: float

    @property
    def feasible(self) -> bool:
        return self.d_opt >= 0.0

    @property
    def uav_x(self) -> float:
        return -self.d_opt


def _cubic_coeffs(params: RfModelParams) -> tuple[float, float, float, float]:
    two_g3 = 2.0 * params.g3
    return (two_g3, -two_g3, -(params.log_slope + two_g3), two_g3)


def cubic_residual(cos_theta: float, params: RfModelParams) -> float:
    a, b, c, d = _cubic_coeffs(params)
    return ((a * cos_theta + b) * cos_theta + c) * cos_theta + d


def _cubic_slope(x: float, params: RfModelParams) -> float:
    a, b, c, _ = _cubic_coeffs(params)
    return (3.0 * a * x + 2.0 * b) * x + c


def _deflated_roots(root: float, params: RfModelParams) -> tuple[float, ...]:
    # synthetic division by (x - root), then a cancellation-free quadratic formula
    a, b, c, _ = _cubic_coeffs(params)
    q2 = a
    q1 = b + q2 * root
    q0 = c + q1 * root
    disc = q1 * q1 - 4.0 * q2 * q0
    if disc < 0:
        return ()
    s = math.sqrt(disc)
    q = -0.5 * (q1 + math.copysign(s, q1))
    roots = [q / q2]
    if q != 0.0:
        roots.append(q0 / q)
    return tuple(sorted(roots, reverse=True))


def solve_optimal_angle(
    params: RfModelParams | None = None, *, tol: float = 1e-15, max_iter: int = 200
) -> AngleSolverResult:
    """Root of the stationarity cubic in ``(0, 1)`` via bisection-guarded Newton."""
    params = params or RfModelParams()
    if not (params.g3 > 0 and params.w > 0):
        raise SolverError("optimal angle requires g3 > 0 and w > 0")
    eps = 1e-12
    lo, hi = eps, 1.0 - eps
    f_lo, f_hi = cubic_residual(lo, params), cubic_residual(hi, params)
    if f_lo * f_hi > 0:
        raise SolverError(f"no sign change on [{lo}, {hi}]: f={f_lo:g}, {f_hi:g}")

    x = 0.5 * (lo + hi)
    for it in range(1, max_iter + 1):
        fx = cubic_residual(x, params)
        if fx == 0.0:
            break
        if (fx > 0) == (f_lo > 0):
            lo, f_lo = x, fx
        else:
            hi, f_hi = x, fx
        slope = _cubic_slope(x, params)
        x_new = x - fx / slope if slope != 0.0 else lo - 1.0
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= tol:
            x = x_new
            break
        x = x_new
    else:
        raise SolverError(f"optimal angle did not converge in {max_iter} iterations")

    return AngleSolverResult(
        cos_theta=x,
        theta=math.acos(x),
        residual=cubic_residual(x, params),
        rejected_roots=_deflated_roots(x, params),
        iterations=it,
    )


def loss_angle_derivative(theta: float, params: RfModelParams) -> float:
    """d(loss)/d(theta) at fixed altitude difference."""
    return -params.log_slope * math.cos(theta) / math.sin(theta) + 2.0 * params.g3 * math.sin(theta) * (
        1.0 - math.cos(theta)
    )


def second_derivative_check(theta: float, params: RfModelParams) -> float:
    """Curvature of the loss in theta at fixed altitude difference (positive on (0, pi/2])."""
    if not (0.0 < theta <= HALF_PI + 1e-15):
        raise DomainError(f"theta={theta!r} outside (0, pi/2]")
    s, c = math.sin(theta), math.cos(theta)
    return params.log_slope / (s * s) + 2.0 * params.g3 * c * (1.0 - c) + 2.0 * params.g3 * s * s


def optimal_standoff(building: BuildingSpec, theta_opt: float) -> StandoffResult:
    horizontal = 0.5 * building.z_b / math.tan(theta_opt)
    half_width = 0.5 * building.y_b
    if horizontal * horizontal < half_width * half_width:
        raise GeometryInfeasibleError(
            f"geometry infeasible: building half-width {half_width:g} m exceeds the "
            f"{horizontal:g} m horizontal reach of the optimal angle from mid-height"
        )
    d_h = math.sqrt(horizontal * horizontal - half_width * half_width)
    return StandoffResult(d_h=d_h, d_opt=d_h - building.x_b)


def mid_plane_uav(standoff: float, building: BuildingSpec) -> Point3:
    return Point3(-standoff, 0.5 * building.y_b, 0.5 * building.z_b)


def worst_corners(building: BuildingSpec) -> tuple[Point3, ...]:
    xb, yb, zb = building.x_b, building.y_b, building.z_b
    return (Point3(xb, 0, 0), Point3(xb, yb, 0), Point3(xb, 0, zb), Point3(xb, yb, zb))


def worst_corner_path_loss(standoff: float, building: BuildingSpec, params: RfModelParams) -> float:
    if standoff < 0:
        raise DomainError(f"standoff {standoff:g} m puts the UAV inside the building")
    return total_path_loss(mid_plane_uav(standoff, building), worst_corners(building)[0], building, params)


def _linspace(lo: float, hi: float, steps: int) -> np.ndarray:
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise DomainError(f"invalid sweep range [{lo}, {hi}]")
    if lo == hi:
        return np.array([lo])
    if steps < 2:
        raise DomainError(f"sweep needs at least 2 steps, got {steps}")
    return np.linspace(lo, hi, steps)


def sweep_power_vs_standoff(
    building: BuildingSpec,
    rf: RfModelParams,
    link: LinkBudgetParams,
    standoff_range: tuple[float, float],
    steps: int = DEFAULT_SWEEP_STEPS,
) -> SweepTable:
    """Worst-corner transmit power as the UAV backs away from the facade."""
    lo, hi = standoff_range
    if lo < 0:
        raise DomainError("standoff range must be non-negative")
    rows = [
        (float(s), worst_case_min_tx_power(worst_corner_path_loss(float(s), building, rf), link))
        for s in _linspace(lo, hi, steps)
    ]
    return SweepTable("standoff_m", rows, value_name="tx_power_dbm")


def sweep_power_vs_angle(
    building: BuildingSpec,
    rf: RfModelParams,
    link: LinkBudgetParams,
    angle_range: tuple[float, float],
    steps: int = DEFAULT_SWEEP_STEPS,
) -> SweepTable:
    """Worst-corner transmit power against incident angle (radians) at fixed altitude gap."""
    lo, hi = angle_range
    if not (0.0 < lo and hi <= HALF_PI + 1e-15):
        raise DomainError("angle range must lie in (0, pi/2]")
    delta_h = 0.5 * building.z_b
    rows = [
        (float(t), worst_case_min_tx_power(path_loss_dh_theta(delta_h, float(t), building.x_b, rf), link))
        for t in _linspace(lo, hi, steps)
    ]
    return SweepTable("angle_rad", rows, value_name="tx_power_dbm")


@dataclass(frozen=True)
class WorstCaseReport:
    theta_deg: float
    cos_theta: float
    d_h: float
    d_opt: float
    worst_corner_loss_db: float | None
    min_tx_power_dbm: float | None

    @property
    def feasible(self) -> bool:
        return self.worst_corner_loss_db is not None


def analyze(building: BuildingSpec, rf: RfModelParams, link: LinkBudgetParams) -> WorstCaseReport:
    """Optimal angle, standoff and the resulting worst-corner power budget.

    Raises :class:`GeometryInfeasibleError` when the angle cannot be realised;
    a negative standoff is reported with ``None`` for loss and power.
    """
    angle = solve_optimal_angle(rf)
    standoff = optimal_standoff(building, angle.theta)
    loss = power = None
    if standoff.feasible:
        loss = worst_corner_path_loss(standoff.d_opt, building, rf)
        power = worst_case_min_tx_power(loss, link)
    return WorstCaseReport(angle.theta_deg, angle.cos_theta, standoff.d_h, standoff.d_opt, loss, power)

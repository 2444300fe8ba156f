"""UAV placement: summed-loss objective, analytic gradients, descent and grid oracle.

The optimiser minimises the sum of per-user losses in dB.  When the users are
mirror-symmetric about the building's horizontal and vertical mid-planes the
y and z gradients vanish on those planes, so only the standoff coordinate x
has to be searched (:func:`descend_x`).  :func:`grid_search` is an exhaustive
lattice oracle that needs no symmetry.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING, Callable

import numpy as np

from .errors import DomainError, PreconditionError, SingularityError
from .geometry import BuildingSpec, Point3, as_array, uav_outside_building
from .linkbudget import LinkBudgetParams, max_allowable_loss
from .pathloss import RfModelParams

if TYPE_CHECKING:
    from .scenario_io import Scenario

log = logging.getLogger(__name__)

DEFAULT_X_RANGE = (-500.0, 0.0)


@dataclass(frozen=True)
class UavBounds:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    z_min: float
    z_max: float

    def __post_init__(self) -> None:
        for axis in "xyz":
            lo, hi = float(getattr(self, f"{axis}_min")), float(getattr(self, f"{axis}_max"))
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise DomainError(f"UavBounds.{axis} limits must be finite")
            if lo > hi:
                raise DomainError(f"UavBounds.{axis}_min={lo} exceeds {axis}_max={hi}")
            object.__setattr__(self, f"{axis}_min", lo)
            object.__setattr__(self, f"{axis}_max", hi)

    @classmethod
    def default_for(cls, building: BuildingSpec) -> "UavBounds":
        return cls(*DEFAULT_X_RANGE, 0.0, building.y_b, 0.0, building.z_b)

    def intersects_interior(self, building: BuildingSpec) -> bool:
        return (
            self.x_min < building.x_b and self.x_max > 0.0
            and self.y_min < building.y_b and self.y_max > 0.0
            and self.z_min < building.z_b and self.z_max > 0.0
        )

    def contains(self, p: Point3) -> bool:
        return (
            self.x_min <= p.x <= self.x_max
            and self.y_min <= p.y <= self.y_max
            and self.z_min <= p.z <= self.z_max
        )


@dataclass(frozen=True)
class GradientDescentConfig:
    step_size: float = 0.01
    tolerance: float = 1e-4
    max_iterations: int = 500
    # None: start from x_max, the bound nearest the facade
    initial_x: float | None = None
    # retry a step at half size whenever it would increase the objective
    halving: bool = False

    def __post_init__(self) -> None:
        if not self.step_size > 0:
            raise DomainError("step_size must be > 0")
        if not self.tolerance > 0:
            raise DomainError("tolerance must be > 0")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise DomainError("max_iterations must be an integer >= 1")


@dataclass(frozen=True)
class PlacementResult:
    uav_position: Point3
    objective_db_sum: float
    iterations_used: int
    converged: bool
    feasible: bool
    linear_loss_sum: float
    # (x, objective) per iterate, initial point first; empty for grid results
    history: tuple[tuple[float, float], ...] = field(default_factory=tuple, repr=False)


# --------------------------------------------------------------------------
# objective and gradients


def _user_array(users, building: BuildingSpec) -> np.ndarray:
    U = as_array(users)
    if len(U) == 0:
        raise DomainError("user list is empty")
    outside = ~(
        (U[:, 0] >= 0) & (U[:, 0] <= building.x_b)
        & (U[:, 1] >= 0) & (U[:, 1] <= building.y_b)
        & (U[:, 2] >= 0) & (U[:, 2] <= building.z_b)
    )
    if outside.any():
        i = int(np.argmax(outside))
        raise DomainError(f"user {i} at {tuple(U[i])} lies outside the building")
    return U


def _check_uav(uav: Point3, building: BuildingSpec) -> None:
    if not uav_outside_building(uav, building):
        raise DomainError(f"UAV {uav.as_tuple()} is inside the building")


def _constant_terms(U: np.ndarray, params: RfModelParams) -> np.ndarray:
    # per-user loss that does not move with the UAV; indoor depth is the user's x
    return params.w * math.log10(params.f_ghz) + params.g1 + params.g2 + params.g4 * U[:, 0]


def per_user_losses(uav: Point3, users, building: BuildingSpec, params: RfModelParams) -> np.ndarray:
    """Loss in dB to every user, vectorised."""
    U = _user_array(users, building)
    _check_uav(uav, building)
    dx, dy, dz = U[:, 0] - uav.x, U[:, 1] - uav.y, U[:, 2] - uav.z
    r2 = dx * dx + dy * dy
    d2 = r2 + dz * dz
    if np.any(d2 == 0):
        raise DomainError("UAV coincides with a user")
    cos_t = np.sqrt(r2 / d2)
    return 0.5 * params.w * np.log10(d2) + params.g3 * (1.0 - cos_t) ** 2 + _constant_terms(U, params)


def total_loss_objective(uav: Point3, users, building: BuildingSpec, params: RfModelParams) -> float:
    """Sum of per-user losses in dB (the quantity the optimiser minimises)."""
    return math.fsum(per_user_losses(uav, users, building, params))


def linear_loss_sum(uav: Point3, users, building: BuildingSpec, params: RfModelParams) -> float:
    """Sum of per-user losses as linear power ratios (proportional to total transmit power)."""
    return math.fsum(10.0 ** (per_user_losses(uav, users, building, params) / 10.0))


def _offsets(uav: Point3, users, building: BuildingSpec):
    U = _user_array(users, building)
    _check_uav(uav, building)
    dx, dy, dz = U[:, 0] - uav.x, U[:, 1] - uav.y, U[:, 2] - uav.z
    r = np.sqrt(dx * dx + dy * dy)
    if np.any(r == 0):
        i = int(np.argmin(r))
        raise SingularityError(f"UAV vertically aligned with user {i}; gradient undefined")
    d = np.sqrt(r * r + dz * dz)
    return dx, dy, dz, r, d


def _horizontal_gradient(delta: np.ndarray, r, d, params: RfModelParams) -> float:
    # delta is (user - uav) along the differentiated horizontal axis
    terms = params.log_slope * (-delta) / d**2 + 2.0 * params.g3 * (1.0 - r / d) * (
        delta * d / r / d**2 - r * delta / d / d**2
    )
    return math.fsum(terms)


def gradient_x(uav: Point3, users, building: BuildingSpec, params: RfModelParams) -> float:
    dx, _, _, r, d = _offsets(uav, users, building)
    return _horizontal_gradient(dx, r, d, params)


def gradient_y(uav: Point3, users, building: BuildingSpec, params: RfModelParams) -> float:
    _, dy, _, r, d = _offsets(uav, users, building)
    return _horizontal_gradient(dy, r, d, params)


def gradient_z(uav: Point3, users, building: BuildingSpec, params: RfModelParams) -> float:
    _, _, dz, r, d = _offsets(uav, users, building)
    above = -dz  # z_uav - z_i, signed; no split into users above/below
    terms = params.log_slope * above / d**2 + 2.0 * params.g3 * (1.0 - r / d) * (r * above / d**3)
    return math.fsum(terms)


# --------------------------------------------------------------------------
# symmetry


def _canonical(points: np.ndarray, decimals: int = 6) -> np.ndarray:
    p = np.round(points, decimals) + 0.0  # +0.0 folds -0.0
    return p[np.lexsort((p[:, 2], p[:, 1], p[:, 0]))]


def is_symmetric(users, building: BuildingSpec, atol: float = 1e-6) -> bool:
    """Whether the user set is invariant under y -> y_b - y and under z -> z_b - z."""
    U = as_array(users)
    base = _canonical(U)
    for col, extent in ((1, building.y_b), (2, building.z_b)):
        mirrored = U.copy()
        mirrored[:, col] = extent - mirrored[:, col]
        if not np.allclose(base, _canonical(mirrored), rtol=0.0, atol=atol):
            return False
    return True


# --------------------------------------------------------------------------
# Algorithm: 1-D gradient descent on the standoff axis


def _finish(
    scenario: "Scenario", uav: Point3, iterations: int, converged: bool, history
) -> PlacementResult:
    obj = total_loss_objective(uav, scenario.user_array, scenario.building, scenario.rf)
    lin = linear_loss_sum(uav, scenario.user_array, scenario.building, scenario.rf)
    partial = PlacementResult(uav, obj, iterations, converged, True, lin, tuple(history))
    return replace(partial, feasible=check_feasibility(partial, scenario.link))


def descend_x(
    scenario: "Scenario",
    bounds: UavBounds | None = None,
    config: GradientDescentConfig | None = None,
    *,
    on_step: Callable[[int, float, float], None] | None = None,
) -> PlacementResult:
    """Fixed-step gradient descent on x with y, z pinned to the mid-planes.

    Each iterate is clamped to ``[x_min, x_max]``.  Stops when a step moves
    less than ``tolerance`` or after ``max_iterations`` steps.
    """
    building, rf = scenario.building, scenario.rf
    bounds = bounds or scenario.bounds
    config = config or GradientDescentConfig()
    U = scenario.user_array
    if not is_symmetric(U, building):
        raise PreconditionError(
            "users are not symmetric about both mid-planes; use grid_search instead"
        )
    y, z = 0.5 * building.y_b, 0.5 * building.z_b
    if not (bounds.y_min <= y <= bounds.y_max and bounds.z_min <= z <= bounds.z_max):
        raise PreconditionError("UAV bounds exclude the building mid-planes")

    def clamp(v: float) -> float:
        return min(bounds.x_max, max(bounds.x_min, v))

    def objective(v: float) -> float:
        return total_loss_objective(Point3(v, y, z), U, building, rf)

    x = clamp(bounds.x_max if config.initial_x is None else config.initial_x)
    f = objective(x)
    history = [(x, f)]
    if on_step:
        on_step(0, x, f)
    step = config.step_size
    converged = False
    n = 0
    for n in range(1, config.max_iterations + 1):
        g = gradient_x(Point3(x, y, z), U, building, rf)
        x_new = clamp(x - step * g)
        f_new = objective(x_new)
        if config.halving:
            while f_new > f and abs(x_new - x) >= config.tolerance:
                step *= 0.5
                x_new = clamp(x - step * g)
                f_new = objective(x_new)
        elif f_new > f:
            log.warning("descent step %d increased the objective by %.3g dB", n, f_new - f)
        moved = abs(x - x_new)
        x, f = x_new, f_new
        history.append((x, f))
        if on_step:
            on_step(n, x, f)
        if moved < config.tolerance:
            converged = True
            break
    return _finish(scenario, Point3(x, y, z), n, converged, history)


# --------------------------------------------------------------------------
# grid oracle


def lattice_axis(lo: float, hi: float, resolution: float) -> np.ndarray:
    """``lo, lo + res, ...`` up to ``hi`` (a single point if the extent is below ``res``)."""
    if not resolution > 0:
        raise DomainError(f"resolution must be > 0, got {resolution!r}")
    n = int(math.floor((hi - lo) / resolution + 1e-9)) + 1
    return lo + resolution * np.arange(n)


def _pair_loss(r2: np.ndarray, dz2: np.ndarray, params: RfModelParams) -> np.ndarray:
    d2 = r2 + dz2
    return 0.5 * params.w * np.log10(d2) + params.g3 * (1.0 - np.sqrt(r2 / d2)) ** 2


def _lattice_brute(xs, ys, zs, U, params) -> np.ndarray:
    out = np.empty((len(xs), len(ys), len(zs)))
    dz2 = (U[None, :, 2] - zs[:, None]) ** 2  # (nz, M)
    for i, x in enumerate(xs):
        dx2 = (U[:, 0] - x) ** 2
        for j, y in enumerate(ys):
            r2 = dx2 + (U[:, 1] - y) ** 2
            out[i, j] = _pair_loss(r2[None, :], dz2, params).sum(axis=1)
    return out


def _lattice_grouped(xs, ys, zs, U, params) -> np.ndarray:
    """Same sums as the brute-force path, sharing work across repeated geometry.

    Users are grouped into horizontal columns; the altitude offsets between
    lattice levels and user levels are deduplicated, so each column needs the
    pair loss only once per distinct offset, then a matrix product scatters it
    back onto lattice levels.
    """
    cols, col_inv = np.unique(U[:, :2], axis=0, return_inverse=True)
    alts, alt_inv = np.unique(U[:, 2], return_inverse=True)
    col_inv, alt_inv = col_inv.ravel(), alt_inv.ravel()
    occupancy = np.zeros((len(cols), len(alts)))
    np.add.at(occupancy, (col_inv, alt_inv), 1.0)

    offsets, off_inv = np.unique(zs[:, None] - alts[None, :], return_inverse=True)
    off_inv = off_inv.reshape(len(zs), len(alts))
    scatter = np.zeros((len(cols), len(offsets), len(zs)))
    levels = np.arange(len(zs))
    for a in range(len(alts)):
        scatter[:, off_inv[:, a], levels] += occupancy[:, a, None]

    dz2 = offsets**2
    total = np.zeros((len(xs) * len(ys), len(zs)))
    for c, (cx, cy) in enumerate(cols):
        r2 = ((xs[:, None] - cx) ** 2 + (ys[None, :] - cy) ** 2).ravel()
        total += _pair_loss(r2[:, None], dz2[None, :], params) @ scatter[c]
    return total.reshape(len(xs), len(ys), len(zs))


def objective_lattice(
    xs: np.ndarray, ys: np.ndarray, zs: np.ndarray, users, building: BuildingSpec, params: RfModelParams,
    *, method: str = "auto",
) -> np.ndarray:
    """Summed dB loss at every lattice point, shape ``(len(xs), len(ys), len(zs))``."""
    U = _user_array(users, building)
    xs, ys, zs = (np.atleast_1d(np.asarray(a, dtype=float)) for a in (xs, ys, zs))
    if method == "auto":
        n_cols = len(np.unique(U[:, :2], axis=0))
        n_offsets = len(np.unique(zs[:, None] - np.unique(U[:, 2])[None, :]))
        method = "grouped" if n_cols * n_offsets < 0.5 * len(zs) * len(U) else "brute"
    if method == "grouped":
        values = _lattice_grouped(xs, ys, zs, U, params)
    elif method == "brute":
        values = _lattice_brute(xs, ys, zs, U, params)
    else:
        raise ValueError(f"unknown lattice method {method!r}")
    return values + math.fsum(_constant_terms(U, params))


def grid_search(
    scenario: "Scenario",
    bounds: UavBounds | None = None,
    resolution: float = 0.5,
    *,
    reduced: bool | None = None,
) -> PlacementResult:
    """Exhaustive lattice minimiser of the summed loss.

    ``reduced=True`` searches x only, on the mid-planes; ``None`` picks the
    reduction whenever the layout is symmetric.  Ties go to the smaller x,
    then y, then z.
    """
    building = scenario.building
    bounds = bounds or scenario.bounds
    U = scenario.user_array
    if reduced is None:
        reduced = is_symmetric(U, building)
    xs = lattice_axis(bounds.x_min, bounds.x_max, resolution)
    if reduced:
        ys, zs = np.array([0.5 * building.y_b]), np.array([0.5 * building.z_b])
    else:
        ys = lattice_axis(bounds.y_min, bounds.y_max, resolution)
        zs = lattice_axis(bounds.z_min, bounds.z_max, resolution)
    if min(len(xs), len(ys), len(zs)) == 0:
        raise DomainError("empty lattice")
    values = objective_lattice(xs, ys, zs, U, building, scenario.rf)
    i, j, k = np.unravel_index(int(np.argmin(values)), values.shape)
    best = Point3(xs[i], ys[j], zs[k])
    return _finish(scenario, best, values.size, True, ())


def count_local_minima(values: np.ndarray) -> int:
    """Lattice points no worse than any of their (up to 3^n - 1) neighbours.

    Equal values are ordered by flat index, matching the grid tie-break, so a
    pair of mirror-image points straddling the true minimum counts once.
    """
    V = np.asarray(values, dtype=float)
    padded = np.pad(V, 1, constant_values=np.inf)
    is_min = np.ones(V.shape, dtype=bool)
    for offset in np.ndindex(*(3,) * V.ndim):
        delta = tuple(o - 1 for o in offset)
        if not any(delta):
            continue
        shifted = padded[tuple(slice(1 + d, padded.shape[a] - 1 + d) for a, d in enumerate(delta))]
        # neighbour precedes p in C order iff its first non-zero offset is negative
        precedes = next(d for d in delta if d) < 0
        is_min &= (V < shifted) if precedes else (V <= shifted)
    return int(is_min.sum())


def check_feasibility(result: PlacementResult, link: LinkBudgetParams) -> bool:
    """Power-budget constraint, compared on the linear loss sum."""
    if link.max_tx_power_dbm == math.inf:
        return True
    return result.linear_loss_sum <= max_allowable_loss(link)

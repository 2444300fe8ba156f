"""Geometric primitives relating a UAV, an indoor user and the building box.

The building occupies ``[0, x_b] x [0, y_b] x [0, z_b]`` and the UAV faces the
facade at ``x = 0``.  All lengths are meters, angles radians.

    >>> distance_3d(Point3(0, 0, 0), Point3(3, 4, 0))
    5.0
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Point3:
    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"Point3.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class BuildingSpec:
    """Axis-aligned building box; ``x_b`` is the depth away from the UAV-facing facade."""

    x_b: float
    y_b: float
    z_b: float
    floor_height: float = 5.0

    def __post_init__(self) -> None:
        for name in ("x_b", "y_b", "z_b", "floor_height"):
            value = float(getattr(self, name))
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"BuildingSpec.{name} must be a positive finite number, got {value!r}")
            object.__setattr__(self, name, value)
        if not math.isclose(self.z_b / self.floor_height, round(self.z_b / self.floor_height), abs_tol=1e-9):
            raise DomainError(
                f"z_b={self.z_b} is not an integer multiple of floor_height={self.floor_height}"
            )

    @property
    def num_floors(self) -> int:
        return int(round(self.z_b / self.floor_height))

    def contains(self, p: Point3) -> bool:
        """Closed-box membership (users on a wall count as inside)."""
        return 0.0 <= p.x <= self.x_b and 0.0 <= p.y <= self.y_b and 0.0 <= p.z <= self.z_b

    def strictly_inside(self, p: Point3) -> bool:
        return 0.0 < p.x < self.x_b and 0.0 < p.y < self.y_b and 0.0 < p.z < self.z_b


def distance_3d(uav: Point3, user: Point3) -> float:
    return math.sqrt((uav.x - user.x) ** 2 + (uav.y - user.y) ** 2 + (uav.z - user.z) ** 2)


def horizontal_distance(uav: Point3, user: Point3) -> float:
    return math.hypot(uav.x - user.x, uav.y - user.y)


def incident_angle(uav: Point3, user: Point3) -> float:
    """Elevation of the UAV-user ray above the horizontal, in ``[0, pi/2]``.

    The facade is vertical, so this is the angle at which the ray strikes it.
    """
    horiz = horizontal_distance(uav, user)
    dz = abs(uav.z - user.z)
    if horiz == 0.0 and dz == 0.0:
        raise DomainError("incident angle undefined for coincident UAV and user")
    return math.atan2(dz, horiz)


def indoor_distance_2d(user: Point3, building: BuildingSpec) -> float:
    """Depth of ``user`` behind the UAV-facing facade.

    Deliberately independent of the UAV position.
    """
    if not building.contains(user):
        raise DomainError(f"user {user.as_tuple()} lies outside the building box")
    return user.x


def uav_outside_building(uav: Point3, building: BuildingSpec) -> bool:
    """True unless ``uav`` is in the open interior of the box (facade contact allowed)."""
    return not building.strictly_inside(uav)


def as_array(points: Iterable[Point3] | np.ndarray | Sequence[Sequence[float]]) -> np.ndarray:
    """Stack points into an ``(n, 3)`` float array."""
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        rows = [p.as_tuple() if isinstance(p, Point3) else tuple(p) for p in points]
        arr = np.asarray(rows, dtype=float).reshape(-1, 3)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise DomainError(f"expected an (n, 3) array of points, got shape {arr.shape}")
    return arr

"""ITU outdoor-to-indoor path loss, in dB.

The loss from a UAV to an indoor user is the sum of three parts::

    L = (w log10 d3d + w log10 f_GHz + g1)   free space
      + (g2 + g3 (1 - cos theta)^2)          building penetration
      + (g4 d2d)                             indoor

with ``theta`` the incident (elevation) angle and ``d2d`` the depth behind
the facade.  Everything here stays in the dB domain; linear conversions live
in :mod:`uav_o2i.linkbudget`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .geometry import (
    BuildingSpec,
    Point3,
    distance_3d,
    incident_angle,
    indoor_distance_2d,
    uav_outside_building,
)

HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class RfModelParams:
    w: float = 20.0
    g1: float = 32.4
    g2: float = 14.0
    g3: float = 15.0
    g4: float = 0.5
    f_ghz: float = 2.0

    def __post_init__(self) -> None:
        for name in ("w", "g1", "g2", "g3", "g4", "f_ghz"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"RfModelParams.{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.w <= 0:
            raise DomainError("RfModelParams.w must be > 0")
        if self.g3 <= 0:
            raise DomainError("RfModelParams.g3 must be > 0")
        if self.g4 < 0:
            raise DomainError("RfModelParams.g4 must be >= 0")
        if self.f_ghz <= 0:
            raise DomainError("RfModelParams.f_ghz must be > 0")

    @property
    def log_slope(self) -> float:
        """``w / ln 10``: dB per neper of distance, used by every derivative."""
        return self.w / math.log(10.0)


def free_space_loss(d3d: float, params: RfModelParams) -> float:
    if not d3d > 0:
        raise DomainError(f"3D distance must be > 0, got {d3d!r}")
    return params.w * math.log10(d3d) + params.w * math.log10(params.f_ghz) + params.g1


def _check_angle(theta: float, *, allow_zero: bool = True) -> None:
    lo_ok = theta >= 0.0 if allow_zero else theta > 0.0
    # tolerate the last-ulp overshoot of atan2 / pi/2 round trips
    if not (lo_ok and theta <= HALF_PI + 1e-15):
        raise DomainError(f"incident angle {theta!r} rad outside {'[' if allow_zero else '('}0, pi/2]")


def penetration_loss(theta: float, params: RfModelParams) -> float:
    _check_angle(theta)
    return params.g2 + params.g3 * (1.0 - math.cos(theta)) ** 2


def indoor_loss(d2d: float, params: RfModelParams) -> float:
    if d2d < 0:
        raise DomainError(f"indoor distance must be >= 0, got {d2d!r}")
    return params.g4 * d2d


def total_path_loss(uav: Point3, user: Point3, building: BuildingSpec, params: RfModelParams) -> float:
    if not uav_outside_building(uav, building):
        raise DomainError(f"UAV {uav.as_tuple()} is inside the building")
    d2d = indoor_distance_2d(user, building)
    return (
        free_space_loss(distance_3d(uav, user), params)
        + penetration_loss(incident_angle(uav, user), params)
        + indoor_loss(d2d, params)
    )


def path_loss_dh_theta(delta_h: float, theta: float, d2d: float, params: RfModelParams) -> float:
    """Same loss written in terms of altitude difference and incident angle.

    Only valid for ``delta_h > 0``; at ``theta = 0`` the range is infinite.
    """
    if not delta_h > 0:
        raise DomainError(f"altitude difference must be > 0, got {delta_h!r}")
    _check_angle(theta, allow_zero=False)
    return (
        params.w * math.log10(delta_h / math.sin(theta))
        + params.w * math.log10(params.f_ghz)
        + params.g1
        + params.g2
        + params.g3 * (1.0 - math.cos(theta)) ** 2
        + indoor_loss(d2d, params)
    )

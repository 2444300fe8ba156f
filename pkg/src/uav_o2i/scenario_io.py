"""Scenarios, symmetric user layouts, YAML config files and sweep CSVs.

Config files are YAML with five optional sections besides ``building``::

    building: {x_b: 20, y_b: 50, z_b: 200, floor_height: 5}
    rf:       {w: 20, g1: 32.4, g2: 14, g3: 15, g4: 0.5, f_ghz: 2}
    link:     {bandwidth_hz: 2.0e7, rate_demand_bps: 1.0e4, noise_dbm: -120,
               snr_threshold_db: 10, max_tx_power_dbm: .inf}
    bounds:   {x_min: -500, x_max: 0, y_min: 0, y_max: 50, z_min: 0, z_max: 200}
    users:    {generate: 20}          # users per floor, or
    users:    {explicit: [[x, y, z], ...]}

Unknown keys are rejected.  Omitted sections take the dataclass defaults;
omitted users default to 20 generated users per floor.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import yaml

from .errors import DomainError, ScenarioLoadError
from .geometry import BuildingSpec, Point3, as_array
from .linkbudget import LinkBudgetParams
from .pathloss import RfModelParams
from .placement import UavBounds

DEFAULT_USERS_PER_FLOOR = 20
CSV_DIGITS = 6


@dataclass
class Scenario:
    building: BuildingSpec
    users: tuple[Point3, ...]
    rf: RfModelParams = field(default_factory=RfModelParams)
    link: LinkBudgetParams = field(default_factory=LinkBudgetParams)
    bounds: UavBounds | None = None
    users_per_floor: int | None = None

    def __post_init__(self) -> None:
        self.users = tuple(p if isinstance(p, Point3) else Point3(*p) for p in self.users)
        if not self.users:
            raise DomainError("scenario has no users")
        for i, p in enumerate(self.users):
            if not self.building.strictly_inside(p):
                raise DomainError(f"user {i} at {p.as_tuple()} is not strictly inside the building")
        if self.bounds is None:
            self.bounds = UavBounds.default_for(self.building)
        if self.bounds.intersects_interior(self.building):
            raise DomainError("UAV bounds intersect the building interior")
        if self.users_per_floor is not None:
            expected = self.users_per_floor * self.building.num_floors
            if expected != len(self.users):
                raise DomainError(
                    f"{len(self.users)} users but {self.users_per_floor}/floor x "
                    f"{self.building.num_floors} floors = {expected}"
                )
        self.link = dataclasses.replace(self.link, num_users=len(self.users))
        self.user_array = as_array(self.users)


@dataclass(frozen=True)
class SweepTable:
    axis_name: str
    rows: tuple[tuple[float, float], ...]
    value_name: str = "value"

    def __post_init__(self) -> None:
        rows = tuple((float(a), float(v)) for a, v in self.rows)
        for (a0, _), (a1, _) in zip(rows, rows[1:]):
            if not a1 > a0:
                raise DomainError("sweep rows must be strictly ascending in the axis value")
        object.__setattr__(self, "rows", rows)

    @property
    def axis(self) -> np.ndarray:
        return np.array([a for a, _ in self.rows])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.rows])

    def argmin(self) -> float:
        return self.rows[int(np.argmin(self.values))][0]


# --------------------------------------------------------------------------
# layouts


def floor_grid_shape(users_per_floor: int) -> tuple[int, int]:
    """Most-square ``(n_depth, n_width)`` factorisation, the shorter side along depth."""
    n_depth = max(d for d in range(1, math.isqrt(users_per_floor) + 1) if users_per_floor % d == 0)
    return n_depth, users_per_floor // n_depth


def generate_symmetric_layout(building: BuildingSpec, users_per_floor: int) -> tuple[Point3, ...]:
    """Cell-centred grid of users on every floor, at floor mid-height.

    Invariant under ``y -> y_b - y`` and ``z -> z_b - z``.
    """
    if users_per_floor < 2 or users_per_floor % 2:
        raise DomainError(f"users_per_floor must be even and >= 2, got {users_per_floor}")
    nx, ny = floor_grid_shape(users_per_floor)
    xs = [building.x_b * (2 * i + 1) / (2 * nx) for i in range(nx)]
    ys = [building.y_b * (2 * j + 1) / (2 * ny) for j in range(ny)]
    points = []
    for k in range(building.num_floors):
        z = building.floor_height * (2 * k + 1) / 2
        points.extend(Point3(x, y, z) for x in xs for y in ys)
    return tuple(points)


def make_scenario(
    z_b: float,
    x_b: float,
    y_b: float = 50.0,
    floor_height: float = 5.0,
    users_per_floor: int = DEFAULT_USERS_PER_FLOOR,
    **kwargs: Any,
) -> Scenario:
    """Scenario with a generated symmetric layout (Table I style defaults)."""
    building = BuildingSpec(x_b=x_b, y_b=y_b, z_b=z_b, floor_height=floor_height)
    return Scenario(
        building=building,
        users=generate_symmetric_layout(building, users_per_floor),
        users_per_floor=users_per_floor,
        **kwargs,
    )


def with_building(scenario: Scenario, **dims: float) -> Scenario:
    """Copy of a generated scenario on a resized building, layout regenerated."""
    if scenario.users_per_floor is None:
        raise DomainError("scenario has an explicit user list; cannot regenerate it for a new building")
    building = dataclasses.replace(scenario.building, **dims)
    x_lo, x_hi = scenario.bounds.x_min, scenario.bounds.x_max
    return Scenario(
        building=building,
        users=generate_symmetric_layout(building, scenario.users_per_floor),
        rf=scenario.rf,
        link=scenario.link,
        bounds=UavBounds(x_lo, x_hi, 0.0, building.y_b, 0.0, building.z_b),
        users_per_floor=scenario.users_per_floor,
    )


# --------------------------------------------------------------------------
# config files

_SECTIONS = {
    "building": ("x_b", "y_b", "z_b", "floor_height"),
    "rf": tuple(f.name for f in dataclasses.fields(RfModelParams)),
    "link": ("bandwidth_hz", "rate_demand_bps", "noise_dbm", "snr_threshold_db", "max_tx_power_dbm"),
    "bounds": tuple(f.name for f in dataclasses.fields(UavBounds)),
    "users": ("generate", "explicit"),
}


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioLoadError(f"expected a number, got {value!r}", path)
    return float(value)


def _section(doc: dict, name: str, required: bool = False) -> dict:
    raw = doc.get(name)
    if raw is None:
        if required:
            raise ScenarioLoadError("missing required section", name)
        return {}
    if not isinstance(raw, dict):
        raise ScenarioLoadError("expected a mapping", name)
    unknown = sorted(set(raw) - set(_SECTIONS[name]))
    if unknown:
        raise ScenarioLoadError(f"unknown key(s) {unknown}", name)
    return raw


def _build(cls, raw: dict, section: str):
    values = {k: _number(v, f"{section}.{k}") for k, v in raw.items()}
    try:
        return cls(**values)
    except (DomainError, TypeError) as exc:
        raise ScenarioLoadError(str(exc), section) from exc


def scenario_from_dict(doc: Any) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioLoadError("top level must be a mapping")
    unknown = sorted(set(doc) - set(_SECTIONS))
    if unknown:
        raise ScenarioLoadError(f"unknown section(s) {unknown}")

    building = _build(BuildingSpec, _section(doc, "building", required=True), "building")
    rf = _build(RfModelParams, _section(doc, "rf"), "rf")
    link = _build(LinkBudgetParams, _section(doc, "link"), "link")
    raw_bounds = _section(doc, "bounds")
    bounds = None
    if raw_bounds:
        defaults = dataclasses.asdict(UavBounds.default_for(building))
        bounds = _build(UavBounds, {**defaults, **raw_bounds}, "bounds")

    raw_users = _section(doc, "users")
    per_floor = raw_users.get("generate")
    if per_floor is not None and (isinstance(per_floor, bool) or not isinstance(per_floor, int)):
        raise ScenarioLoadError(f"expected an integer, got {per_floor!r}", "users.generate")
    explicit = raw_users.get("explicit")
    if explicit is not None:
        if not isinstance(explicit, list) or not explicit:
            raise ScenarioLoadError("expected a non-empty list of [x, y, z]", "users.explicit")
        users = []
        for i, p in enumerate(explicit):
            path = f"users.explicit[{i}]"
            if not isinstance(p, (list, tuple)) or len(p) != 3:
                raise ScenarioLoadError(f"expected [x, y, z], got {p!r}", path)
            try:
                point = Point3(*(_number(c, path) for c in p))
            except DomainError as exc:
                raise ScenarioLoadError(str(exc), path) from exc
            if not building.strictly_inside(point):
                raise ScenarioLoadError(f"user {i} at {point.as_tuple()} is outside the building", path)
            users.append(point)
    else:
        per_floor = DEFAULT_USERS_PER_FLOOR if per_floor is None else per_floor
        try:
            users = generate_symmetric_layout(building, per_floor)
        except DomainError as exc:
            raise ScenarioLoadError(str(exc), "users.generate") from exc

    try:
        return Scenario(building, tuple(users), rf, link, bounds, per_floor)
    except DomainError as exc:
        raise ScenarioLoadError(str(exc)) from exc


def load_scenario(path: str | os.PathLike) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioLoadError(f"cannot read: {exc.strerror}", str(path)) from exc
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ScenarioLoadError(f"YAML parse error: {exc}", str(path)) from exc
    return scenario_from_dict(doc)


def scenario_to_dict(scenario: Scenario) -> dict:
    link = dataclasses.asdict(scenario.link)
    del link["num_users"]  # always the user count
    users: dict[str, Any] = {}
    if scenario.users_per_floor is not None:
        users["generate"] = scenario.users_per_floor
    users["explicit"] = [list(p.as_tuple()) for p in scenario.users]
    return {
        "building": dataclasses.asdict(scenario.building),
        "rf": dataclasses.asdict(scenario.rf),
        "link": link,
        "bounds": dataclasses.asdict(scenario.bounds),
        "users": users,
    }


def save_scenario(scenario: Scenario, destination: str | os.PathLike | TextIO) -> None:
    text = yaml.safe_dump(scenario_to_dict(scenario), sort_keys=False, default_flow_style=None)
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        Path(destination).write_text(text, encoding="utf-8")


# --------------------------------------------------------------------------
# sweep CSV


def _fmt(v: float) -> str:
    return f"{v:.{CSV_DIGITS}g}"


def write_sweep_csv(table: SweepTable, destination: str | os.PathLike | TextIO) -> None:
    """Header ``axis_name,value_name`` then one row per entry, 6 significant digits."""
    if hasattr(destination, "write"):
        _write_rows(table, destination)
        return
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            _write_rows(table, fh)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write sweep CSV: {exc.strerror}", str(destination)) from exc


def _write_rows(table: SweepTable, fh: TextIO) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow([table.axis_name, table.value_name])
    writer.writerows((_fmt(a), _fmt(v)) for a, v in table.rows)


def read_sweep_csv(source: str | os.PathLike | TextIO) -> SweepTable:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = [(float(a), float(v)) for a, v in reader]
    return SweepTable(header[0], tuple(rows), value_name=header[1])

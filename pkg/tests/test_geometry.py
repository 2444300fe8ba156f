import inspect
import math

import pytest
from hypothesis import given, strategies as st

from uav_o2i.errors import DomainError
from uav_o2i.geometry import (
    BuildingSpec,
    Point3,
    distance_3d,
    horizontal_distance,
    incident_angle,
    indoor_distance_2d,
)

coord = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)
points = st.builds(Point3, coord, coord, coord)


def test_distance_examples():
    assert distance_3d(Point3(0, 0, 0), Point3(0, 0, 0)) == 0.0
    assert distance_3d(Point3(0, 0, 0), Point3(3, 4, 0)) == 5.0
    # mpmath, 30 digits: sqrt(104.33^2 + 25^2 + 100^2)
    assert distance_3d(Point3(-84.33, 25, 100), Point3(20, 0, 0)) == pytest.approx(146.662022691629341922, rel=1e-14)


def test_point_rejects_non_finite():
    with pytest.raises(DomainError):
        Point3(math.nan, 0, 0)
    with pytest.raises(DomainError):
        Point3(0, math.inf, 0)


@pytest.mark.parametrize(
    "uav, user, expected",
    [
        (Point3(10, 0, 5), Point3(0, 0, 5), 0.0),
        (Point3(0, 0, 10), Point3(0, 0, 0), math.pi / 2),
        (Point3(7.5, 0, 7.5), Point3(0, 0, 0), math.pi / 4),
    ],
)
def test_incident_angle_examples(uav, user, expected):
    assert incident_angle(uav, user) == pytest.approx(expected, abs=1e-15)


def test_incident_angle_coincident_points():
    with pytest.raises(DomainError):
        incident_angle(Point3(1, 2, 3), Point3(1, 2, 3))


def test_indoor_distance_examples():
    b = BuildingSpec(20, 50, 200)
    assert indoor_distance_2d(Point3(0, 25, 10), b) == 0.0
    assert indoor_distance_2d(Point3(20, 0, 0), b) == 20.0
    assert indoor_distance_2d(Point3(10, 40, 55), b) == 10.0
    with pytest.raises(DomainError):
        indoor_distance_2d(Point3(-1, 25, 10), b)


def test_indoor_distance_takes_no_uav():
    assert list(inspect.signature(indoor_distance_2d).parameters) == ["user", "building"]


@pytest.mark.parametrize("kwargs", [dict(x_b=0), dict(y_b=-1), dict(z_b=math.inf), dict(floor_height=0), dict(z_b=202)])
def test_building_invariants(kwargs):
    dims = dict(x_b=20, y_b=50, z_b=200, floor_height=5)
    dims.update(kwargs)
    with pytest.raises(DomainError):
        BuildingSpec(**dims)


@given(points, points, points)
def test_triangle_inequality(a, b, c):
    assert distance_3d(a, c) <= distance_3d(a, b) + distance_3d(b, c) + 1e-9


@given(points, points)
def test_distance_symmetric(a, b):
    assert distance_3d(a, b) == distance_3d(b, a)


@given(points, points)
def test_cos_angle_times_range_is_horizontal(a, b):
    d = distance_3d(a, b)
    if d < 1e-6:
        return
    h = horizontal_distance(a, b)
    assert math.cos(incident_angle(a, b)) * d == pytest.approx(h, rel=1e-12, abs=1e-12 * d)


@given(points, points, coord, coord, coord, st.floats(0, 2 * math.pi))
def test_angle_invariant_under_translation_and_yaw(a, b, tx, ty, tz, phi):
    if distance_3d(a, b) < 1e-3:
        return

    def move(p):
        c, s = math.cos(phi), math.sin(phi)
        return Point3(c * p.x - s * p.y + tx, s * p.x + c * p.y + ty, p.z + tz)

    assert incident_angle(move(a), move(b)) == pytest.approx(incident_angle(a, b), abs=1e-9)

import math

import pytest
from hypothesis import assume, given, strategies as st

from uav_o2i.errors import DomainError
from uav_o2i.geometry import BuildingSpec, Point3, distance_3d, incident_angle
from uav_o2i.pathloss import (
    RfModelParams,
    free_space_loss,
    indoor_loss,
    path_loss_dh_theta,
    penetration_loss,
    total_path_loss,
)

RF = RfModelParams()
BUILDING = BuildingSpec(20, 50, 200)


def test_default_constants():
    assert (RF.w, RF.g1, RF.g2, RF.g3, RF.g4, RF.f_ghz) == (20, 32.4, 14, 15, 0.5, 2)


@pytest.mark.parametrize("field", ["w", "g3", "f_ghz"])
def test_params_must_be_positive(field):
    with pytest.raises(DomainError):
        RfModelParams(**{field: 0.0})


def test_free_space_loss():
    one_ghz = RfModelParams(f_ghz=1.0)
    assert free_space_loss(1.0, one_ghz) == pytest.approx(32.4, abs=1e-12)
    assert free_space_loss(10.0, one_ghz) == pytest.approx(52.4, abs=1e-12)
    # 20 log10(100) + 20 log10(2) + 32.4, mpmath
    assert free_space_loss(100.0, RF) == pytest.approx(78.4205999132796239, abs=1e-12)
    with pytest.raises(DomainError):
        free_space_loss(0.0, RF)


def test_penetration_loss():
    assert penetration_loss(0.0, RF) == 14.0
    assert penetration_loss(math.pi / 2, RF) == pytest.approx(29.0, abs=1e-12)
    assert penetration_loss(math.pi / 3, RF) == pytest.approx(17.75, abs=1e-12)
    for bad in (-0.1, math.pi / 2 + 0.01):
        with pytest.raises(DomainError):
            penetration_loss(bad, RF)


def test_indoor_loss():
    assert indoor_loss(0, RF) == 0
    assert indoor_loss(20, RF) == 10
    assert indoor_loss(50, RF) == 25
    with pytest.raises(DomainError):
        indoor_loss(-1, RF)


def test_total_path_loss_reference_value():
    uav, user = Point3(-84.33, 25, 100), Point3(20, 0, 0)
    # single-formula evaluation at 30 digits (mpmath)
    assert total_path_loss(uav, user, BUILDING, RF) == pytest.approx(106.828324535667911, abs=1e-10)
    parts = (
        free_space_loss(distance_3d(uav, user), RF)
        + penetration_loss(incident_angle(uav, user), RF)
        + indoor_loss(20, RF)
    )
    assert total_path_loss(uav, user, BUILDING, RF) == parts


def test_total_path_loss_rejects_indoor_uav():
    with pytest.raises(DomainError):
        total_path_loss(Point3(5, 25, 100), Point3(10, 10, 10), BUILDING, RF)


def test_dh_theta_examples():
    assert path_loss_dh_theta(100, math.pi / 2, 0, RF) == pytest.approx(free_space_loss(100, RF) + 29, abs=1e-12)
    # mpmath evaluation at theta = 48.654 deg
    assert path_loss_dh_theta(100, math.radians(48.654), 20, RF) == pytest.approx(106.638716592158486, abs=1e-10)
    with pytest.raises(DomainError):
        path_loss_dh_theta(100, 0.0, 0, RF)
    with pytest.raises(DomainError):
        path_loss_dh_theta(0.0, 1.0, 0, RF)


inside = st.tuples(st.floats(0, 20), st.floats(0, 50), st.floats(0, 200))
outside = st.tuples(st.floats(-400, -0.5), st.floats(-100, 150), st.floats(-50, 250))


@given(inside, outside)
def test_reparameterisation_identity(u, a):
    user, uav = Point3(*u), Point3(*a)
    dh = abs(uav.z - user.z)
    assume(dh > 1e-3)
    theta = incident_angle(uav, user)
    assert total_path_loss(uav, user, BUILDING, RF) == pytest.approx(
        path_loss_dh_theta(dh, theta, user.x, RF), abs=1e-9
    )


@given(st.floats(1, 500), st.floats(0.01, 1.5), st.floats(0, 50), st.floats(1e-3, 10))
def test_monotonicity(d3d, theta, d2d, bump):
    dh = d3d * math.sin(theta)
    base = path_loss_dh_theta(dh, theta, d2d, RF)
    assert path_loss_dh_theta(dh * (1 + bump), theta, d2d, RF) > base  # longer range, same angle
    assert path_loss_dh_theta(dh, theta, d2d + bump, RF) > base
    theta2 = min(theta + bump / 10, math.pi / 2)
    if theta2 > theta + 1e-9:
        # same range, steeper angle
        assert path_loss_dh_theta(d3d * math.sin(theta2), theta2, d2d, RF) > base


def test_horizontal_tradeoff():
    user = Point3(20, 25, 0)
    fsl, pen = [], []
    for k in range(1, 200):
        uav = Point3(-float(k), 25, 100)
        fsl.append(free_space_loss(distance_3d(uav, user), RF))
        pen.append(penetration_loss(incident_angle(uav, user), RF))
    assert all(b > a for a, b in zip(fsl, fsl[1:]))
    assert all(b < a for a, b in zip(pen, pen[1:]))

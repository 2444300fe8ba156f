import math
import random

import numpy as np
import pytest

from uav_o2i.errors import DomainError, GeometryInfeasibleError
from uav_o2i.geometry import BuildingSpec, Point3
from uav_o2i.linkbudget import LinkBudgetParams, worst_case_min_tx_power
from uav_o2i.pathloss import RfModelParams, path_loss_dh_theta, total_path_loss
from uav_o2i.worstcase import (
    analyze,
    cubic_residual,
    mid_plane_uav,
    optimal_standoff,
    second_derivative_check,
    solve_optimal_angle,
    sweep_power_vs_angle,
    sweep_power_vs_standoff,
    worst_corner_path_loss,
    worst_corners,
)

RF = RfModelParams()
LINK = LinkBudgetParams()
PAPER_THETA = math.radians(48.654)


def test_cubic_residual_at_reference_roots():
    assert cubic_residual(0.0, RF) == 30.0
    for root in (0.6606, 1.4117, -1.0723):
        assert abs(cubic_residual(root, RF)) < 2e-2


def test_optimal_angle_reference_value():
    res = solve_optimal_angle(RF)
    assert res.theta_deg == pytest.approx(48.654, abs=0.01)
    assert res.cos_theta == pytest.approx(0.6606, abs=5e-4)
    assert res.rejected_roots == pytest.approx((1.4117, -1.0723), abs=5e-4)
    assert abs(cubic_residual(res.cos_theta, RF)) < 1e-12


def test_optimal_angle_against_numpy_roots():
    # independent companion-matrix solve
    roots = np.roots([30.0, -30.0, -(20 / math.log(10) + 30.0), 30.0])
    valid = [r.real for r in roots if 0 < r.real < 1]
    assert solve_optimal_angle(RF).cos_theta == pytest.approx(valid[0], abs=1e-12)


def test_optimal_angle_is_stationary():
    theta = solve_optimal_angle(RF).theta
    h = 1e-5
    for dh, d2d in ((50.0, 20.0), (150.0, 10.0)):
        fd = (path_loss_dh_theta(dh, theta + h, d2d, RF) - path_loss_dh_theta(dh, theta - h, d2d, RF)) / (2 * h)
        assert abs(fd) < 1e-6


def test_other_parameters_still_bracket():
    res = solve_optimal_angle(RfModelParams(w=30.0, g3=5.0))
    assert 0 < res.cos_theta < 1
    assert abs(res.residual) < 1e-12


def test_second_derivative():
    assert second_derivative_check(math.pi / 2, RF) == pytest.approx(20 / math.log(10) + 30, rel=1e-14)
    assert second_derivative_check(0.01, RF) > 1e4
    rng = random.Random(0)
    assert all(second_derivative_check(rng.uniform(1e-6, math.pi / 2), RF) > 0 for _ in range(100))
    with pytest.raises(DomainError):
        second_derivative_check(0.0, RF)


def test_optimal_standoff_reference():
    b = BuildingSpec(20, 50, 200)
    res = optimal_standoff(b, PAPER_THETA)
    # ((100 / tan 48.654 deg)^2 - 25^2)^0.5 - 20, mpmath
    assert res.d_h == pytest.approx(84.3684263898168056, rel=1e-12)
    assert res.d_opt == pytest.approx(64.3684263898168056, rel=1e-12)
    assert res.feasible


def test_optimal_standoff_narrow_limit_and_growth():
    thin = BuildingSpec(20, 1e-9, 200)
    assert optimal_standoff(thin, PAPER_THETA).d_h == pytest.approx(100 / math.tan(PAPER_THETA), rel=1e-12)
    d = [optimal_standoff(BuildingSpec(20, 50, z), PAPER_THETA).d_opt for z in (100, 200, 400, 800)]
    assert all(b > a for a, b in zip(d, d[1:]))


def test_optimal_standoff_infeasible():
    with pytest.raises(GeometryInfeasibleError):
        optimal_standoff(BuildingSpec(20, 500, 50), PAPER_THETA)
    # reachable angle but closer than the facade
    assert not optimal_standoff(BuildingSpec(50, 50, 80), PAPER_THETA).feasible


def test_corner_symmetry():
    b = BuildingSpec(20, 50, 250)
    uav = mid_plane_uav(40.0, b)
    losses = [total_path_loss(uav, c, b, RF) for c in worst_corners(b)]
    assert max(losses) - min(losses) < 1e-9
    assert worst_corner_path_loss(40.0, b, RF) == losses[0]


def test_optimal_standoff_beats_grid():
    b = BuildingSpec(20, 50, 200)
    best = optimal_standoff(b, solve_optimal_angle(RF).theta).d_opt
    at_best = worst_corner_path_loss(best, b, RF)
    for s in np.arange(0.0, 300.0, 0.25):
        assert at_best <= worst_corner_path_loss(float(s), b, RF) + 1e-12


def test_corner_dominates_along_depth_and_height():
    b = BuildingSpec(20, 50, 200)
    s = optimal_standoff(b, solve_optimal_angle(RF).theta).d_opt
    uav = mid_plane_uav(s, b)
    corner = worst_corner_path_loss(s, b, RF)
    rng = random.Random(1)
    for _ in range(500):
        p = Point3(rng.uniform(0, 20), rng.choice((0.0, 50.0)), rng.uniform(0, 200))
        if p in worst_corners(b):
            continue
        assert corner > total_path_loss(uav, p, b, RF)


def test_mid_width_user_exceeds_corner_at_optimum():
    # the corner is not the global worst location: at the optimal standoff a
    # far-wall user on the UAV's vertical plane sees a steeper angle and more loss
    b = BuildingSpec(20, 50, 200)
    s = optimal_standoff(b, solve_optimal_angle(RF).theta).d_opt
    centre = total_path_loss(mid_plane_uav(s, b), Point3(20, 25, 0), b, RF)
    corner = worst_corner_path_loss(s, b, RF)
    assert 0 < centre - corner < 0.05


def test_worst_corner_rejects_negative_standoff():
    with pytest.raises(DomainError):
        worst_corner_path_loss(-1.0, BuildingSpec(20, 50, 200), RF)


def test_standoff_sweep_matches_closed_form():
    prev = -1.0
    for z_b in (150.0, 200.0, 250.0, 300.0):
        b = BuildingSpec(20, 50, z_b)
        table = sweep_power_vs_standoff(b, RF, LINK, (0.0, 200.0), 801)
        step = 200.0 / 800
        closed = optimal_standoff(b, solve_optimal_angle(RF).theta).d_opt
        assert abs(table.argmin() - closed) <= step
        assert table.argmin() >= prev
        prev = table.argmin()


def test_standoff_sweep_collapsed_range():
    b = BuildingSpec(20, 50, 200)
    table = sweep_power_vs_standoff(b, RF, LINK, (30.0, 30.0), 500)
    assert table.rows == ((30.0, worst_case_min_tx_power(worst_corner_path_loss(30.0, b, RF), LINK)),)
    with pytest.raises(DomainError):
        sweep_power_vs_standoff(b, RF, LINK, (50.0, 10.0))


def test_angle_sweep_minimum_and_shape():
    b = BuildingSpec(20, 50, 250)
    table = sweep_power_vs_angle(b, RF, LINK, (math.radians(1), math.radians(90)), 500)
    step = math.radians(89) / 499
    assert abs(table.argmin() - PAPER_THETA) <= step
    v = table.values
    k = int(np.argmin(v))
    assert np.all(np.diff(v[: k + 1]) < 0) and np.all(np.diff(v[k:]) > 0)
    single = sweep_power_vs_angle(b, RF, LINK, (PAPER_THETA, PAPER_THETA))
    assert single.rows[0][1] == worst_case_min_tx_power(path_loss_dh_theta(125.0, PAPER_THETA, 20.0, RF), LINK)
    with pytest.raises(DomainError):
        sweep_power_vs_angle(b, RF, LINK, (0.0, 1.0))


def test_angle_independent_of_building():
    arg = {sweep_power_vs_angle(BuildingSpec(x, 50, z), RF, LINK, (0.5, 1.2), 701).argmin()
           for x in (10, 20, 50) for z in (100, 200, 300)}
    assert len(arg) == 1


def test_analyze_report():
    rep = analyze(BuildingSpec(20, 50, 200), RF, LINK)
    assert rep.feasible
    assert rep.min_tx_power_dbm == pytest.approx(-110 + rep.worst_corner_loss_db)
    neg = analyze(BuildingSpec(50, 50, 80), RF, LINK)
    assert not neg.feasible and neg.worst_corner_loss_db is None

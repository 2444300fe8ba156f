"""Placement of a single aerial base station serving the users of a high-rise building."""

from .errors import (
    DomainError,
    GeometryInfeasibleError,
    PowerRangeError,
    PreconditionError,
    ScenarioLoadError,
    SingularityError,
    SolverError,
    UavO2iError,
)
from .geometry import BuildingSpec, Point3, distance_3d, incident_angle, indoor_distance_2d
from .linkbudget import (
    LinkBudgetParams,
    max_allowable_loss,
    per_user_min_power,
    total_min_power,
    user_rate,
    worst_case_min_tx_power,
)
from .pathloss import (
    RfModelParams,
    free_space_loss,
    indoor_loss,
    path_loss_dh_theta,
    penetration_loss,
    total_path_loss,
)
from .placement import (
    GradientDescentConfig,
    PlacementResult,
    UavBounds,
    check_feasibility,
    descend_x,
    gradient_x,
    gradient_y,
    gradient_z,
    grid_search,
    total_loss_objective,
)
from .scenario_io import (
    Scenario,
    SweepTable,
    generate_symmetric_layout,
    load_scenario,
    make_scenario,
    save_scenario,
    write_sweep_csv,
)
from .worstcase import (
    cubic_residual,
    optimal_standoff,
    second_derivative_check,
    solve_optimal_angle,
    sweep_power_vs_angle,
    sweep_power_vs_standoff,
    worst_corner_path_loss,
)

__version__ = "0.1.0"

__all__ = [
    "BuildingSpec",
    "DomainError",
    "GeometryInfeasibleError",
    "GradientDescentConfig",
    "LinkBudgetParams",
    "PlacementResult",
    "Point3",
    "PowerRangeError",
    "PreconditionError",
    "RfModelParams",
    "Scenario",
    "ScenarioLoadError",
    "SingularityError",
    "SolverError",
    "SweepTable",
    "UavBounds",
    "UavO2iError",
    "check_feasibility",
    "cubic_residual",
    "descend_x",
    "distance_3d",
    "free_space_loss",
    "generate_symmetric_layout",
    "gradient_x",
    "gradient_y",
    "gradient_z",
    "grid_search",
    "incident_angle",
    "indoor_distance_2d",
    "indoor_loss",
    "load_scenario",
    "make_scenario",
    "max_allowable_loss",
    "optimal_standoff",
    "path_loss_dh_theta",
    "penetration_loss",
    "per_user_min_power",
    "save_scenario",
    "second_derivative_check",
    "solve_optimal_angle",
    "sweep_power_vs_angle",
    "sweep_power_vs_standoff",
    "total_loss_objective",
    "total_min_power",
    "total_path_loss",
    "user_rate",
    "worst_case_min_tx_power",
    "worst_corner_path_loss",
    "write_sweep_csv",
]

"""Command-line front end.

Exit codes: 0 ok, 2 geometry infeasible, 3 no convergence, 4 asymmetric
layout, 5 power budget exceeded, 64 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Sequence

from . import placement, worstcase
from .errors import DomainError, GeometryInfeasibleError, PreconditionError, ScenarioLoadError
from .geometry import BuildingSpec
from .placement import GradientDescentConfig, PlacementResult
from .scenario_io import (
    Scenario,
    SweepTable,
    generate_symmetric_layout,
    load_scenario,
    save_scenario,
    with_building,
    write_sweep_csv,
)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_NOT_CONVERGED = 3
EXIT_ASYMMETRIC = 4
EXIT_OVER_BUDGET = 5
EXIT_USAGE = 64

TABLE_ONE_HEIGHTS = (200.0, 250.0, 300.0)
TABLE_ONE_WIDTHS = (10.0, 20.0, 50.0)

log = logging.getLogger("uav_o2i")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit 2, which we reserve
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sig(v: Any) -> Any:
    if isinstance(v, float):
        if not math.isfinite(v):
            return None if math.isnan(v) else v
        return float(f"{v:.6g}")
    return v


def _emit(fields: dict[str, Any], as_json: bool) -> None:
    if as_json:
        print(json.dumps({k: _sig(v) for k, v in fields.items()}))
        return
    for key, value in fields.items():
        value = _sig(value)
        print(f"{key}: {value:.6g}" if isinstance(value, float) else f"{key}: {value}")


def _placement_fields(result: PlacementResult) -> dict[str, Any]:
    p = result.uav_position
    return {
        "x": p.x,
        "y": p.y,
        "z": p.z,
        "standoff_m": -p.x,
        "objective_db_sum": result.objective_db_sum,
        "iterations": result.iterations_used,
        "converged": result.converged,
        "feasible": result.feasible,
    }


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except ScenarioLoadError as exc:
        raise UsageError(f"cannot load scenario: {exc}") from exc


# --------------------------------------------------------------------------
# commands


def cmd_worst_case(args) -> int:
    scenario = _load(args.scenario)
    try:
        report = worstcase.analyze(scenario.building, scenario.rf, scenario.link)
    except GeometryInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _emit(
        {
            "theta_deg": report.theta_deg,
            "cos_theta": report.cos_theta,
            "d_h_m": report.d_h,
            "d_opt_m": report.d_opt,
            "worst_corner_loss_db": report.worst_corner_loss_db,
            "min_tx_power_dbm": report.min_tx_power_dbm,
        },
        args.json,
    )
    if not report.feasible:
        print("error: geometry infeasible: optimal standoff is negative (UAV would be inside the footprint)",
              file=sys.stderr)
        return EXIT_INFEASIBLE
    return EXIT_OK


def _config_from(args) -> GradientDescentConfig:
    try:
        return GradientDescentConfig(
            step_size=args.step_size,
            tolerance=args.tolerance,
            max_iterations=args.max_iters,
            initial_x=args.initial_x,
            halving=args.halving,
        )
    except DomainError as exc:
        raise UsageError(str(exc)) from exc


def _result_code(result: PlacementResult) -> int:
    if not result.converged:
        print(f"error: no convergence within {result.iterations_used} iterations", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    if not result.feasible:
        print("error: required transmit power exceeds max_tx_power_dbm", file=sys.stderr)
        return EXIT_OVER_BUDGET
    return EXIT_OK


def cmd_optimize(args) -> int:
    scenario = _load(args.scenario)
    config = _config_from(args)
    try:
        result = placement.descend_x(scenario, config=config)
    except PreconditionError as exc:
        print(f"error: {exc} (try the `oracle` command)", file=sys.stderr)
        return EXIT_ASYMMETRIC
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["n", "x", "objective_db_sum"])
            for n, (x, f) in enumerate(result.history):
                writer.writerow([n, f"{x:.6g}", f"{f:.6g}"])
    _emit(_placement_fields(result), args.json)
    return _result_code(result)


def cmd_oracle(args) -> int:
    if not args.resolution > 0:
        raise UsageError(f"--resolution must be > 0, got {args.resolution}")
    scenario = _load(args.scenario)
    reduced = False if args.full_3d else None
    result = placement.grid_search(scenario, resolution=args.resolution, reduced=reduced)
    fields = _placement_fields(result)
    fields["lattice_points"] = fields.pop("iterations")
    del fields["converged"]
    _emit(fields, args.json)
    return EXIT_OK if result.feasible else EXIT_OVER_BUDGET


def _sweep_axis_values(args, default_range, default_values=None) -> list[float]:
    if args.values:
        values = sorted(set(args.values))
    elif args.range is None and default_values is not None:
        values = list(default_values)
    else:
        lo, hi = args.range if args.range is not None else default_range
        if lo > hi:
            raise UsageError("--range LO HI needs LO <= HI")
        if lo == hi:
            return [lo]
        if args.steps < 2:
            raise UsageError("--steps must be >= 2")
        values = [lo + (hi - lo) * i / (args.steps - 1) for i in range(args.steps)]
    return values


def _rerun(scenario: Scenario, axis: str, values: Sequence[float]) -> tuple[SweepTable, bool]:
    key = {"height": "z_b", "width": "x_b"}[axis]
    rows, all_converged = [], True
    for v in values:
        try:
            variant = with_building(scenario, **{key: v})
        except DomainError as exc:
            raise UsageError(f"{axis}={v:g}: {exc}") from exc
        result = placement.descend_x(variant)
        if not result.converged:
            print(f"warning: {axis}={v:g} did not converge", file=sys.stderr)
            all_converged = False
        rows.append((v, -result.uav_position.x))
    return SweepTable(f"{axis}_m", tuple(rows), value_name="standoff_m"), all_converged


def _library_sweep(args, sweep, scenario: Scenario, axis_name: str, default_range, to_internal: float = 1.0):
    """Run a worst-corner sweep; ``to_internal`` converts CLI units (m or deg) to the library's."""
    b, rf, link = scenario.building, scenario.rf, scenario.link
    if args.values:
        axis = sorted(set(args.values))
        rows = [sweep(b, rf, link, (v * to_internal, v * to_internal)).rows[0][1] for v in axis]
    else:
        lo, hi = args.range if args.range is not None else default_range
        internal = sweep(b, rf, link, (lo * to_internal, hi * to_internal), args.steps)
        axis = [t / to_internal for t, _ in internal.rows]
        rows = [p for _, p in internal.rows]
    return SweepTable(axis_name, tuple(zip(axis, rows)), value_name="tx_power_dbm")


def cmd_sweep(args) -> int:
    scenario = _load(args.scenario)
    converged = True
    try:
        if args.axis == "standoff":
            table = _library_sweep(args, worstcase.sweep_power_vs_standoff, scenario, "standoff_m", (0.0, 200.0))
        elif args.axis == "angle":
            table = _library_sweep(
                args, worstcase.sweep_power_vs_angle, scenario, "angle_deg", (1.0, 90.0), math.pi / 180
            )
        elif args.axis == "height":
            table, converged = _rerun(scenario, "height", _sweep_axis_values(args, None, TABLE_ONE_HEIGHTS))
        else:
            table, converged = _rerun(scenario, "width", _sweep_axis_values(args, None, TABLE_ONE_WIDTHS))
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASYMMETRIC
    except DomainError as exc:
        raise UsageError(str(exc)) from exc

    if args.json:
        payload = {"axis": table.axis_name, "value": table.value_name,
                   "rows": [[_sig(a), _sig(v)] for a, v in table.rows]}
        text = json.dumps(payload) + "\n"
        if args.output:
            Path(args.output).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        write_sweep_csv(table, args.output or sys.stdout)
    return EXIT_OK if converged else EXIT_NOT_CONVERGED


def cmd_gen(args) -> int:
    try:
        building = BuildingSpec(x_b=args.x_b, y_b=args.y_b, z_b=args.z_b, floor_height=args.floor_height)
        users = generate_symmetric_layout(building, args.users_per_floor)
    except DomainError as exc:
        raise UsageError(str(exc)) from exc
    scenario = Scenario(building, users, users_per_floor=args.users_per_floor)
    if not args.output or args.output == "-":
        save_scenario(scenario, sys.stdout)
        return EXIT_OK
    save_scenario(scenario, args.output)
    _emit({"output": args.output, "users": len(users), "floors": building.num_floors}, args.json)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uav-o2i", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def scenario_cmd(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("scenario", help="scenario YAML file")
        p.add_argument("--json", action="store_true", help="structured output")
        return p

    p = scenario_cmd("worst-case", "optimal incident angle and standoff for the worst-located user")
    p.set_defaults(func=cmd_worst_case)

    p = scenario_cmd("optimize", "gradient descent on the standoff (symmetric layouts)")
    p.add_argument("--step-size", type=float, default=0.01)
    p.add_argument("--tolerance", type=float, default=1e-4)
    p.add_argument("--max-iters", type=int, default=500)
    p.add_argument("--initial-x", type=float, default=None, help="default: x_max of the bounds")
    p.add_argument("--halving", action="store_true", help="halve the step whenever it would increase the loss")
    p.add_argument("--trace", metavar="CSV", help="write per-iteration (n, x, objective)")
    p.set_defaults(func=cmd_optimize)

    p = scenario_cmd("oracle", "exhaustive lattice search")
    p.add_argument("--resolution", type=float, default=0.5, help="lattice pitch in meters")
    p.add_argument("--full-3d", action="store_true", help="search x, y and z even for symmetric layouts")
    p.set_defaults(func=cmd_oracle)

    p = scenario_cmd("sweep", "tabulate power or efficient standoff along one axis")
    p.add_argument("--axis", required=True, choices=("standoff", "angle", "height", "width"))
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"),
                     help="meters (standoff/height/width) or degrees (angle)")
    grp.add_argument("--values", nargs="+", type=float, help="explicit axis values")
    p.add_argument("--steps", type=int, default=worstcase.DEFAULT_SWEEP_STEPS)
    p.add_argument("-o", "--output", help="output file (default stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="write a scenario with a symmetric generated layout")
    p.add_argument("--x-b", type=float, default=20.0)
    p.add_argument("--y-b", type=float, default=50.0)
    p.add_argument("--z-b", type=float, default=200.0)
    p.add_argument("--floor-height", type=float, default=5.0)
    p.add_argument("--users-per-floor", type=int, default=20)
    p.add_argument("-o", "--output", help="scenario file to write (default stdout)")
    p.add_argument("--json", action="store_true", help="structured summary")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

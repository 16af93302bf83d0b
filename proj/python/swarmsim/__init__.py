"""Python facade for the swarm inspection simulator core."""

from ._core import (
    MissionReport,
    Scenario,
    ScenarioError,
    SeriesRow,
    line_of_sight,
    load_scenario,
    parse_fleet_spec,
    principal_axis,
    run,
    run_mission,
)

__all__ = [
    "MissionReport",
    "Scenario",
    "ScenarioError",
    "SeriesRow",
    "line_of_sight",
    "load_scenario",
    "parse_fleet_spec",
    "principal_axis",
    "run",
    "run_mission",
]

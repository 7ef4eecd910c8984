"""Safe-following-distance toolkit for the single-lane same-direction
scenario: rule engine, proper-response controller, simplex supervisor,
kinematic simulation, numerical verification, and trajectory auditing."""

from .core import (
    AC,
    BC,
    RssParams,
    ScenarioState,
    Trajectory,
    TrajectorySample,
    load_params,
    validate_params,
)
from .rule import SafetyEvaluation, evaluate, safe_distance, safe_distance_raw
from .dynamics import (
    ExecutionTrace,
    PovBehavior,
    classify_case,
    integrate,
    pov_stop_distance,
    sv_stop_distance,
    worst_case_execution,
)
from .supervisor import SupervisorConfig, SupervisorState, decide, run_supervised
from .audit import AuditReport, audit, check_compliance, safety_metric

__version__ = "0.1.0"

__all__ = [
    "AC",
    "BC",
    "AuditReport",
    "ExecutionTrace",
    "PovBehavior",
    "RssParams",
    "SafetyEvaluation",
    "ScenarioState",
    "SupervisorConfig",
    "SupervisorState",
    "Trajectory",
    "TrajectorySample",
    "audit",
    "check_compliance",
    "classify_case",
    "decide",
    "evaluate",
    "integrate",
    "load_params",
    "pov_stop_distance",
    "run_supervised",
    "safe_distance",
    "safe_distance_raw",
    "safety_metric",
    "sv_stop_distance",
    "validate_params",
    "worst_case_execution",
]

"""Offline trajectory analysis: compliance checking, the margin-based
safety metric, liability attribution for collisions, and the
responsibility-principle report.

Recorded data carries noise, so the checks here take explicit
tolerances; the rule engine itself stays tolerance-free.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from .core import BC, RssParams, Trajectory
from .dynamics import COLLISION_EPS
from .errors import EmptyTrajectory, NoCollision
from .rule import evaluate

SATISFIED = "Satisfied"
NOT_APPLICABLE = "NotApplicable"
VIOLATED = "Violated"

LIABILITY_NONE = "None"
SV_LIABLE = "SvLiable"
POV_OUTSIDE_MODEL = "PovOutsideModel"
INCONSISTENT = "Inconsistent"

REASON_NO_RESPONSE = "ConditionFalseNoResponse"
REASON_UNSAFE_START = "ResponseStartedUnsafe"
REASON_WEAK_BRAKING = "InsufficientBraking"

DEFAULT_ACCEL_TOL = 0.2
# Trajectory files carry 9 significant digits, so a recorded collision
# sample can sit up to ~1e-6 m away from exact touching.
GAP_RESOLUTION = 1e-6


@dataclass(frozen=True)
class Violation:
    t_start: float
    t_end: float
    reason: str

    def to_dict(self) -> dict:
        return {"t_start": self.t_start, "t_end": self.t_end, "reason": self.reason}


@dataclass(frozen=True)
class AuditReport:
    """Full offline verdict for one trajectory."""

    per_sample: tuple  # (t, condition_holds, margin, mode) per sample
    compliant: bool
    violations: tuple
    metric_score: float
    liability: str
    principles: dict

    def to_dict(self) -> dict:
        return {
            "per_sample": [
                {"t": t, "condition_holds": ok, "margin": m, "mode": mode}
                for (t, ok, m, mode) in self.per_sample
            ],
            "compliant": self.compliant,
            "violations": [v.to_dict() for v in self.violations],
            "metric_score": self.metric_score,
            "liability": self.liability,
            "principles": {str(k): v for k, v in sorted(self.principles.items())},
        }


def _default_time_tol(traj: Trajectory) -> float:
    ts = [s.t for s in traj.samples]
    if len(ts) < 2:
        return 0.0
    dts = sorted(b - a for a, b in zip(ts, ts[1:]))
    return dts[len(dts) // 2]


def _episode_starts(traj: Trajectory):
    """Index of the first sample of the BC episode each sample belongs to."""
    starts = [None] * len(traj.samples)
    current = None
    for i, s in enumerate(traj.samples):
        if s.mode == BC:
            if current is None:
                current = i
            starts[i] = current
        else:
            current = None
    return starts


def check_compliance(
    traj: Trajectory,
    accel_tol: float = DEFAULT_ACCEL_TOL,
    time_tol: Optional[float] = None,
) -> Tuple[bool, List[Violation]]:
    """Check that every moment either satisfies the safety condition or
    sits inside a valid proper-response episode.

    An episode is valid if its first sample satisfied the condition, and
    its samples past the response window (rho + time_tol after the
    episode start) brake at least a_brake_min - accel_tol while still
    moving.  Consecutive failing samples with the same reason are merged
    into one violation range.
    """
    if not traj.samples:
        raise EmptyTrajectory("cannot check compliance of an empty trajectory")
    if time_tol is None:
        time_tol = _default_time_tol(traj)
    params = traj.params
    starts = _episode_starts(traj)
    episode_ok = {}
    for i, s in enumerate(traj.samples):
        if starts[i] == i:
            episode_ok[i] = evaluate(params, s.state).condition_holds

    failures = []  # (t, reason)
    for i, s in enumerate(traj.samples):
        ev = evaluate(params, s.state)
        if ev.condition_holds:
            continue
        if s.mode != BC:
            failures.append((s.t, REASON_NO_RESPONSE))
            continue
        ep = starts[i]
        if not episode_ok[ep]:
            failures.append((s.t, REASON_UNSAFE_START))
            continue
        in_window = s.t - traj.samples[ep].t <= params.rho + time_tol
        if in_window:
            continue
        if s.state.v_r > 0.0 and s.a_r > -params.a_brake_min + accel_tol:
            failures.append((s.t, REASON_WEAK_BRAKING))

    violations = []
    for t, reason in failures:
        if violations and violations[-1][2] == reason and t - violations[-1][1] <= 2 * (time_tol or 0.0) + 1e-12:
            violations[-1][1] = t
        else:
            violations.append([t, t, reason])
    violations = [Violation(a, b, r) for a, b, r in violations]
    return (not violations), violations


def safety_metric(traj: Trajectory):
    """Per-sample margin timeline plus the overall score (minimum margin)."""
    if not traj.samples:
        raise EmptyTrajectory("cannot score an empty trajectory")
    timeline = [(s.t, evaluate(traj.params, s.state).margin) for s in traj.samples]
    score = min(m for _, m in timeline)
    return timeline, score


def find_collision_index(traj: Trajectory) -> Optional[int]:
    length = traj.params.vehicle_length
    tol = max(COLLISION_EPS, GAP_RESOLUTION)
    for i, s in enumerate(traj.samples):
        if s.state.gap - length <= tol:
            return i
    return None


def pov_accelerations(traj: Trajectory) -> List[float]:
    """POV acceleration reconstructed by finite differences on v_f.

    Central differences in the interior, one-sided at the ends; the POV's
    acceleration is not part of the trajectory format.
    """
    samples = traj.samples
    n = len(samples)
    if n < 2:
        return [0.0] * n
    accs = []
    for i in range(n):
        lo = max(0, i - 1)
        hi = min(n - 1, i + 1)
        dt = samples[hi].t - samples[lo].t
        accs.append((samples[hi].state.v_f - samples[lo].state.v_f) / dt)
    return accs


def attribute_liability(
    traj: Trajectory,
    accel_tol: float = DEFAULT_ACCEL_TOL,
    time_tol: Optional[float] = None,
) -> str:
    """Assign fault for a collision.

    The POV is outside the behavior model if its reconstructed braking
    exceeded a_brake_max before the collision (the act-of-God exclusion);
    otherwise the SV is liable if compliance failed before the collision;
    otherwise the finding is Inconsistent -- a compliant in-model
    collision contradicts the safety guarantee and flags a numerical or
    data problem rather than being silently accepted.
    """
    idx = find_collision_index(traj)
    if idx is None:
        raise NoCollision("trajectory contains no collision sample")
    accs = pov_accelerations(traj)
    limit = traj.params.a_brake_max + accel_tol
    if any(a < -limit for a in accs[: idx + 1]):
        return POV_OUTSIDE_MODEL
    prefix = traj.prefix(max(idx, 1))
    compliant, _ = check_compliance(prefix, accel_tol, time_tol)
    if not compliant:
        return SV_LIABLE
    return INCONSISTENT


def principles_report(
    traj: Trajectory,
    accel_tol: float = DEFAULT_ACCEL_TOL,
    time_tol: Optional[float] = None,
) -> dict:
    """Responsibility principles 1-5 for this trajectory.

    Principles 1 and 5 hold unless a collision is attributable to the
    SV; 2-4 do not apply to this driving scenario.
    """
    idx = find_collision_index(traj)
    if idx is None:
        sv_fault = False
    else:
        sv_fault = attribute_liability(traj, accel_tol, time_tol) == SV_LIABLE
    verdict = VIOLATED if sv_fault else SATISFIED
    return {1: verdict, 2: NOT_APPLICABLE, 3: NOT_APPLICABLE, 4: NOT_APPLICABLE, 5: verdict}


def audit(
    traj: Trajectory,
    accel_tol: float = DEFAULT_ACCEL_TOL,
    time_tol: Optional[float] = None,
) -> AuditReport:
    """Assemble the full audit report for one trajectory."""
    params = traj.params
    per_sample = tuple(
        (s.t, ev.condition_holds, ev.margin, s.mode)
        for s, ev in ((s, evaluate(params, s.state)) for s in traj.samples)
    )
    compliant, violations = check_compliance(traj, accel_tol, time_tol)
    _, score = safety_metric(traj)
    if find_collision_index(traj) is None:
        liability = LIABILITY_NONE
    else:
        liability = attribute_liability(traj, accel_tol, time_tol)
    principles = principles_report(traj, accel_tol, time_tol)
    return AuditReport(
        per_sample=per_sample,
        compliant=compliant,
        violations=tuple(violations),
        metric_score=score,
        liability=liability,
        principles=principles,
    )

"""The proper response as an executable controller state machine.

An episode runs through three phases: a response window of at most rho
seconds with arbitrary but bounded behavior, then maximum comfortable
braking, then a halt that is held for the rest of the episode.  The
window policy is pluggable; the worst case is constant +a_max.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .core import RssParams
from .errors import StepError

RESPONSE_WINDOW = "response_window"
BRAKING = "braking"
HALTED = "halted"


@dataclass(frozen=True)
class ResponsePhase:
    """Phase of one proper-response episode.

    elapsed tracks time spent in the response window; it never exceeds
    rho while the phase is still the window.  Transitions are monotone:
    window -> braking -> halted.
    """

    kind: str
    elapsed: float = 0.0
    started_at: float = 0.0
    start_state_condition_held: bool = True


def begin_response(t: float, condition_held: bool = True) -> ResponsePhase:
    return ResponsePhase(RESPONSE_WINDOW, 0.0, t, condition_held)


def worst_case_window(params: RssParams, v_r: float) -> float:
    """Worst admissible response-window behavior: full forward acceleration."""
    return params.a_max


def coast_window(params: RssParams, v_r: float) -> float:
    return 0.0


def hold_command_window(command: float):
    """Window policy that keeps emitting the last pre-engagement command."""

    def policy(params: RssParams, v_r: float) -> float:
        return command

    return policy


def proper_response_command(
    params: RssParams,
    phase: ResponsePhase,
    v_r: float,
    window_policy=worst_case_window,
) -> float:
    """Commanded SV acceleration for the current phase.

    The window policy output is clamped to [-a_brake_min, a_max]; the
    braking phase commands -a_brake_min until the vehicle stops; a halted
    vehicle stays halted.
    """
    if phase.kind == RESPONSE_WINDOW:
        cmd = window_policy(params, v_r)
        return min(params.a_max, max(-params.a_brake_min, cmd))
    if phase.kind == BRAKING:
        return -params.a_brake_min if v_r > 0.0 else 0.0
    return 0.0


def advance_phase(
    params: RssParams, phase: ResponsePhase, dt: float, v_r_next: float
) -> ResponsePhase:
    """Advance the episode clock by dt, given the velocity after the step.

    The window may end before rho has fully elapsed (a shorter actual
    response time is always admissible); it must end once elapsed + dt
    reaches rho.
    """
    if dt <= 0:
        raise StepError(f"dt must be > 0, got {dt!r}")
    if phase.kind == RESPONSE_WINDOW:
        elapsed = phase.elapsed + dt
        if elapsed >= params.rho:
            return replace(phase, kind=BRAKING, elapsed=min(elapsed, params.rho))
        return replace(phase, elapsed=elapsed)
    if phase.kind == BRAKING and v_r_next <= 0.0:
        return replace(phase, kind=HALTED)
    return phase

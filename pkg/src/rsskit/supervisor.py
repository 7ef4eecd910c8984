"""Simplex-architecture supervisor: advanced controller wrapped by a
decision module that engages the proper-response baseline controller.

The decision module runs every `period` seconds.  In AC mode it computes
the one-period worst-case successor (SV at +a_max, POV at -a_brake_max)
and engages the baseline controller while the safety condition still
holds if that successor would violate it.  In BC mode it switches back
once braking/halting has restored the margin beyond the hysteresis
threshold and the lookahead clears again.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Tuple

from .core import AC, BC, RssParams, ScenarioState, TrajectorySample
from .dynamics import (
    COLLISION_EPS,
    CollisionEvent,
    ExecutionTrace,
    PovBehavior,
    advance_vehicle,
    refine_crossing,
)
from .errors import ConfigError, InvariantBreach, StepError
from .response import (
    BRAKING,
    HALTED,
    ResponsePhase,
    advance_phase,
    begin_response,
    hold_command_window,
    proper_response_command,
)
from .rule import evaluate, safe_distance


@dataclass(frozen=True)
class SupervisorConfig:
    """Decision-module settings.

    period is the decision interval and must not exceed rho;
    switchback_margin is the hysteresis on returning to the advanced
    controller; sv_command_bounds clamp AC commands (None means
    [-a_brake_min, a_max], matching the capability assumptions of the
    safe-distance formula).
    """

    period: float = 0.1
    switchback_margin: float = 1.0
    sv_command_bounds: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        if self.period <= 0:
            raise ConfigError(f"period must be > 0, got {self.period!r}")
        if self.switchback_margin < 0:
            raise ConfigError(
                f"switchback_margin must be >= 0, got {self.switchback_margin!r}"
            )

    def bounds(self, params: RssParams) -> Tuple[float, float]:
        if self.sv_command_bounds is not None:
            return self.sv_command_bounds
        return (-params.a_brake_min, params.a_max)

    def validate_against(self, params: RssParams) -> None:
        if self.period > params.rho:
            raise ConfigError(
                f"period {self.period!r} must not exceed rho {params.rho!r}"
            )


@dataclass(frozen=True)
class SupervisorState:
    """Current control mode plus episode bookkeeping."""

    mode: str = AC
    phase: Optional[ResponsePhase] = None
    last_decision_t: float = 0.0
    held_command: float = 0.0
    engagements: int = 0


def worst_case_successor(
    params: RssParams, state: ScenarioState, delta: float
) -> ScenarioState:
    """State after delta seconds of SV at +a_max and POV at -a_brake_max."""
    v_r = state.v_r + params.a_max * delta
    x_r = state.x_r + state.v_r * delta + 0.5 * params.a_max * delta * delta
    t_b = min(delta, state.v_f / params.a_brake_max)
    x_f = state.x_f + state.v_f * t_b - 0.5 * params.a_brake_max * t_b * t_b
    v_f = max(0.0, state.v_f - params.a_brake_max * delta)
    return ScenarioState(x_f, v_f, x_r, v_r)


def decide(
    params: RssParams,
    cfg: SupervisorConfig,
    sup: SupervisorState,
    state: ScenarioState,
    ac_command: float,
    t: float = 0.0,
):
    """One decision: returns (new supervisor state, commanded acceleration).

    Raises InvariantBreach if asked to decide from AC mode in a state
    where the safety condition already fails -- the supervised loop is
    responsible for never letting that happen.
    """
    lo, hi = cfg.bounds(params)
    clamped = min(hi, max(lo, ac_command))

    if sup.mode == AC:
        ev = evaluate(params, state)
        if not ev.condition_holds:
            raise InvariantBreach(
                f"AC-mode decision at t={t!r} with the safety condition violated "
                f"(margin {ev.margin!r}); the supervised loop is misconfigured"
            )
        succ = worst_case_successor(params, state, cfg.period)
        if evaluate(params, succ).condition_holds:
            return (
                replace(sup, last_decision_t=t, held_command=clamped),
                clamped,
            )
        phase = begin_response(t, condition_held=True)
        new = SupervisorState(BC, phase, t, clamped, sup.engagements + 1)
        cmd = proper_response_command(
            params, phase, state.v_r, hold_command_window(clamped)
        )
        return new, cmd

    # BC mode: consider switching back only once braking has begun, the
    # margin clears the hysteresis threshold, and the lookahead is clean.
    phase = sup.phase
    ev = evaluate(params, state)
    if phase.kind in (BRAKING, HALTED) and ev.margin > cfg.switchback_margin:
        succ = worst_case_successor(params, state, cfg.period)
        if evaluate(params, succ).condition_holds:
            new = SupervisorState(AC, None, t, clamped, sup.engagements)
            return new, clamped
    cmd = proper_response_command(
        params, phase, state.v_r, hold_command_window(sup.held_command)
    )
    return replace(sup, last_decision_t=t), cmd


def adversarial_ac(params: RssParams) -> Callable[[float, ScenarioState], float]:
    """Advanced controller that always floors it (stress test)."""
    return lambda t, state: params.a_max


def benign_ac(
    params: RssParams,
    headway_ratio: float = 1.5,
    k_gap: float = 0.5,
    k_speed: float = 1.0,
) -> Callable[[float, ScenarioState], float]:
    """Gap-tracking controller aiming at headway_ratio times the safe distance."""

    def policy(t, state):
        target = headway_ratio * safe_distance(params, state.v_r, state.v_f)
        return k_gap * (state.gap - target) + k_speed * (state.v_f - state.v_r)

    return policy


def run_supervised(
    params: RssParams,
    cfg: SupervisorConfig,
    start: ScenarioState,
    ac_policy: Callable[[float, ScenarioState], float],
    pov_behavior: PovBehavior,
    dt: float = 1e-3,
    t_end: Optional[float] = None,
    supervised: bool = True,
    stop_when_settled: bool = True,
) -> ExecutionTrace:
    """Closed-loop run with the supervisor in the SV command path.

    Decisions happen every cfg.period; between decisions the AC command is
    held and the BC recomputes the proper-response command each step so
    braking engages the moment the response window elapses.  With
    supervised=False the (clamped) AC command passes straight through --
    the negative control.  stop_when_settled ends the run early once both
    vehicles have halted and no response episode is mid-flight.
    """
    if dt <= 0:
        raise StepError(f"dt must be > 0, got {dt!r}")
    cfg.validate_against(params)
    steps_per_period = max(1, int(round(cfg.period / dt)))
    length = params.vehicle_length

    start_ev = evaluate(params, start)
    if not start_ev.condition_holds:
        raise InvariantBreach(
            f"supervised run must start with the safety condition true "
            f"(margin {start_ev.margin!r})"
        )
    if t_end is None:
        v_peak = start.v_r + params.a_max * params.rho
        t_end = 4.0 * (params.rho + v_peak / params.a_brake_min) + (
            start.v_f / params.a_brake_max
        ) + 10.0

    sup = SupervisorState(held_command=0.0)
    x_f, v_f, x_r, v_r = start.x_f, start.v_f, start.x_r, start.v_r
    samples = []
    collision = None
    sv_halt = None
    pov_halt = None
    min_gap = math.inf
    min_gap_t = 0.0
    cmd = 0.0
    lo, hi = cfg.bounds(params)

    n_steps = max(1, int(math.ceil(t_end / dt - 1e-9)))
    for i in range(n_steps + 1):
        t = i * dt
        state = ScenarioState(x_f, v_f, x_r, v_r)
        if i % steps_per_period == 0:
            ac_cmd = ac_policy(t, state)
            if supervised:
                sup, cmd = decide(params, cfg, sup, state, ac_cmd, t)
            else:
                cmd = min(hi, max(lo, ac_cmd))
        elif supervised and sup.mode == BC:
            cmd = proper_response_command(
                params, sup.phase, v_r, hold_command_window(sup.held_command)
            )

        g = state.gap - length
        if g < min_gap:
            min_gap, min_gap_t = g, t
        mode = sup.mode if supervised else AC
        samples.append(TrajectorySample(t, state, cmd, mode))
        if g <= COLLISION_EPS:
            collision = CollisionEvent(t, state.gap)
            break
        if sv_halt is None and v_r <= 0.0:
            sv_halt = t
        if pov_halt is None and v_f <= 0.0:
            pov_halt = t
        if i == n_steps:
            break
        if (
            stop_when_settled
            and v_r <= 0.0
            and v_f <= 0.0
            and (not supervised or sup.mode == AC or sup.phase.kind == HALTED)
            and i % steps_per_period == 0
        ):
            break

        a_f = pov_behavior.command(t, x_f, v_f)
        nx_r, nv_r = advance_vehicle(x_r, v_r, cmd, dt)
        nx_f, nv_f = advance_vehicle(x_f, v_f, a_f, dt)
        g_new = (nx_f - nx_r) - length
        if g_new <= COLLISION_EPS:
            tau = refine_crossing(x_r, v_r, cmd, x_f, v_f, a_f, dt, length)
            t_c = t + tau
            cx_r, cv_r = advance_vehicle(x_r, v_r, cmd, tau)
            cx_f, cv_f = advance_vehicle(x_f, v_f, a_f, tau)
            cstate = ScenarioState(cx_f, cv_f, cx_r, cv_r)
            samples.append(TrajectorySample(t_c, cstate, cmd, mode))
            collision = CollisionEvent(t_c, cstate.gap)
            if cstate.gap - length < min_gap:
                min_gap, min_gap_t = cstate.gap - length, t_c
            break
        x_r, v_r, x_f, v_f = nx_r, nv_r, nx_f, nv_f
        if supervised and sup.mode == BC:
            sup = replace(
                sup, phase=advance_phase(params, sup.phase, dt, v_r)
            )

    return ExecutionTrace(
        samples=tuple(samples),
        params=params,
        collision=collision,
        sv_halt_time=sv_halt,
        pov_halt_time=pov_halt,
        min_gap=min_gap + length,
        min_gap_time=min_gap_t,
        bc_engagements=sup.engagements if supervised else 0,
    )

"""Longitudinal kinematics: closed-form worst-case executions, an exact
piecewise-constant-acceleration motion engine, a fixed-step integrator
for arbitrary behaviors, POV behavior models, and collision detection.

The motion engine evolves a vehicle under a piecewise-constant
acceleration schedule, splitting segments exactly where the velocity
hits zero (a braking command holds a stopped vehicle at rest; there is
no reversing).  Positions are then piecewise quadratic, so gap minima
and collision times are computed in closed form.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import BC, AC, RssParams, ScenarioState, Trajectory, TrajectorySample
from .errors import ClassifyError, DomainError, StepError

# Touching counts as collision (strict inequality reading of the safety
# condition).  The epsilon absorbs float rounding at exact-boundary starts;
# it is far below any physically meaningful gap.
COLLISION_EPS = 1e-9

CASE_1 = "Case1"
CASE_2 = "Case2"
CASE_3 = "Case3"
CASE_4 = "Case4"
ALL_CASES = (CASE_1, CASE_2, CASE_3, CASE_4)


def sv_stop_distance(params: RssParams, v_r: float) -> float:
    """Worst-case SV travel: a_max for rho, then a_brake_min to a halt."""
    if v_r < 0:
        raise DomainError(f"v_r must be >= 0, got {v_r!r}")
    v_peak = v_r + params.a_max * params.rho
    if v_peak <= 0.0:
        return 0.0
    return (
        v_r * params.rho
        + 0.5 * params.a_max * params.rho ** 2
        + v_peak ** 2 / (2.0 * params.a_brake_min)
    )


def pov_stop_distance(params: RssParams, v_f: float) -> float:
    """POV travel under maximum emergency braking."""
    if v_f < 0:
        raise DomainError(f"v_f must be >= 0, got {v_f!r}")
    return v_f ** 2 / (2.0 * params.a_brake_max)


# ---------------------------------------------------------------------------
# piecewise-constant-acceleration motion engine

def build_profile(x0: float, v0: float, schedule, t_end: float):
    """Motion segments for one vehicle over [0, t_end].

    schedule is a list of (start time, acceleration) pairs with strictly
    increasing start times, the first at 0.  Returns a list of
    (t0, t1, x0, v0, a) tuples; within a segment the acceleration is
    constant and the velocity stays nonnegative.  Velocity-zero crossings
    split segments exactly; while the commanded acceleration is
    nonpositive a stopped vehicle stays stopped.
    """
    if t_end <= 0.0:
        return [(0.0, 0.0, x0, max(0.0, v0), 0.0)]
    segs = []
    x, v = x0, max(0.0, v0)
    starts = [t for t, _ in schedule]
    for i, (tb, a) in enumerate(schedule):
        if tb >= t_end:
            break
        t_next = min(starts[i + 1] if i + 1 < len(starts) else t_end, t_end)
        t = tb
        while t < t_next:
            if v <= 0.0 and a <= 0.0:
                segs.append((t, t_next, x, 0.0, 0.0))
                v = 0.0
                t = t_next
            elif a < 0.0 and v + a * (t_next - t) < 0.0:
                t_stop = t + v / (-a)
                segs.append((t, t_stop, x, v, a))
                x += v * (t_stop - t) + 0.5 * a * (t_stop - t) ** 2
                v = 0.0
                t = t_stop
            else:
                span = t_next - t
                segs.append((t, t_next, x, v, a))
                x += v * span + 0.5 * a * span * span
                v = max(0.0, v + a * span)
                t = t_next
    return segs


def profile_state(segs, t: float):
    """(position, velocity, acceleration) at time t; t clamped to the span."""
    starts = [s[0] for s in segs]
    i = max(0, bisect_right(starts, t) - 1)
    t0, t1, x0, v0, a = segs[i]
    dt = min(max(t, t0), t1) - t0
    return (
        x0 + v0 * dt + 0.5 * a * dt * dt,
        max(0.0, v0 + a * dt),
        a,
    )


def first_stop_time(segs) -> Optional[float]:
    """Earliest time the profile's velocity reaches zero, if it does."""
    for t0, t1, x0, v0, a in segs:
        if v0 <= 0.0:
            return t0
        if a < 0.0:
            t_stop = t0 + v0 / (-a)
            if t_stop <= t1 + 1e-12:
                return min(t_stop, t1)
    return None


def analyze_gap(segs_r, segs_f, length: float = 0.0, eps: float = COLLISION_EPS):
    """Earliest collision and minimum gap between two motion profiles.

    Returns (collision_t, gap_at_collision, min_gap, min_gap_t); the
    first two are None when the gap never falls to length + eps.  The
    minimum is tracked only up to the collision, if any.
    """
    times = sorted(
        {s[0] for s in segs_r}
        | {s[1] for s in segs_r}
        | {s[0] for s in segs_f}
        | {s[1] for s in segs_f}
    )
    xr0, _, _ = profile_state(segs_r, times[0])
    xf0, _, _ = profile_state(segs_f, times[0])
    best_gap = xf0 - xr0 - length
    best_t = times[0]
    if best_gap <= eps:
        return times[0], best_gap + length, best_gap + length, times[0]

    for u0, u1 in zip(times, times[1:]):
        if u1 <= u0:
            continue
        xr, vr, ar = profile_state(segs_r, u0)
        xf, vf, af = profile_state(segs_f, u0)
        g0 = xf - xr - length
        gv = vf - vr
        ga = af - ar
        tau = u1 - u0

        # earliest root of g(t) = eps within this interval
        root = None
        c = g0 - eps
        if ga != 0.0:
            disc = gv * gv - 2.0 * ga * c
            if disc >= 0.0:
                sq = math.sqrt(disc)
                r1 = (-gv - sq) / ga
                r2 = (-gv + sq) / ga
                for r in sorted((r1, r2)):
                    if 0.0 <= r <= tau:
                        root = r
                        break
        elif gv < 0.0:
            r = c / (-gv)
            if r <= tau:
                root = r
        if root is not None:
            g_col = g0 + gv * root + 0.5 * ga * root * root
            return u0 + root, g_col + length, g_col + length, u0 + root

        # interval minimum: endpoints plus the interior vertex, if a minimum
        candidates = [(0.0, g0), (tau, g0 + gv * tau + 0.5 * ga * tau * tau)]
        if ga > 0.0:
            tv = -gv / ga
            if 0.0 < tv < tau:
                candidates.append((tv, g0 + gv * tv + 0.5 * ga * tv * tv))
        for tt, gg in candidates:
            if gg < best_gap:
                best_gap = gg
                best_t = u0 + tt
    return None, None, best_gap + length, best_t


# ---------------------------------------------------------------------------
# execution traces

@dataclass(frozen=True)
class CollisionEvent:
    t: float
    gap: float


@dataclass(frozen=True)
class ExecutionTrace:
    """Immutable result of one simulated execution."""

    samples: tuple
    params: RssParams
    collision: Optional[CollisionEvent] = None
    sv_halt_time: Optional[float] = None
    pov_halt_time: Optional[float] = None
    min_gap: float = math.inf
    min_gap_time: float = 0.0
    bc_engagements: int = 0

    @property
    def start(self) -> ScenarioState:
        return self.samples[0].state

    def to_trajectory(self) -> Trajectory:
        return Trajectory(self.samples, self.params)


def _worst_case_schedules(params: RssParams, start: ScenarioState):
    """SV/POV acceleration schedules plus halt times for the worst case."""
    v_peak = start.v_r + params.a_max * params.rho
    if v_peak <= 0.0:
        t_sv_halt = 0.0
    else:
        t_sv_halt = params.rho + v_peak / params.a_brake_min
    t_pov_halt = start.v_f / params.a_brake_max
    sched_r = [(0.0, params.a_max), (params.rho, -params.a_brake_min)]
    sched_f = [(0.0, -params.a_brake_max)]
    return sched_r, sched_f, t_sv_halt, t_pov_halt


def worst_case_gap_analysis(params: RssParams, start: ScenarioState):
    """Closed-form worst-case run without building a sampled trace.

    Returns (collision_t, gap_at_collision, min_gap, min_gap_t, t_sv_halt,
    t_pov_halt).  Used by the verification campaigns, where sampled traces
    would only add overhead.
    """
    sched_r, sched_f, t_sv_halt, t_pov_halt = _worst_case_schedules(params, start)
    segs_r = build_profile(start.x_r, start.v_r, sched_r, t_sv_halt)
    segs_f = build_profile(start.x_f, start.v_f, sched_f, t_sv_halt)
    col_t, col_gap, min_gap, min_gap_t = analyze_gap(
        segs_r, segs_f, params.vehicle_length
    )
    return col_t, col_gap, min_gap, min_gap_t, t_sv_halt, t_pov_halt


def worst_case_execution(
    params: RssParams, start: ScenarioState, dt: float = 1e-3
) -> ExecutionTrace:
    """Closed-form worst-case run, sampled at dt.

    The SV accelerates at a_max for exactly rho then brakes at
    a_brake_min; the POV brakes at a_brake_max.  The trace ends at SV
    halt or at the collision, whichever comes first.
    """
    if dt <= 0:
        raise StepError(f"dt must be > 0, got {dt!r}")
    sched_r, sched_f, t_sv_halt, t_pov_halt = _worst_case_schedules(params, start)
    segs_r = build_profile(start.x_r, start.v_r, sched_r, t_sv_halt)
    segs_f = build_profile(start.x_f, start.v_f, sched_f, t_sv_halt)
    col_t, col_gap, min_gap, min_gap_t = analyze_gap(
        segs_r, segs_f, params.vehicle_length
    )
    end = col_t if col_t is not None else t_sv_halt

    ts = []
    k = 0
    while k * dt < end - 1e-12:
        ts.append(k * dt)
        k += 1
    ts.append(end)

    samples = []
    for t in ts:
        xr, vr, ar = profile_state(segs_r, t)
        xf, vf, _ = profile_state(segs_f, t)
        samples.append(
            TrajectorySample(t, ScenarioState(xf, vf, xr, vr), ar, BC)
        )
    collision = CollisionEvent(col_t, col_gap) if col_t is not None else None
    if collision is not None:
        min_gap, min_gap_t = col_gap, col_t
    return ExecutionTrace(
        samples=tuple(samples),
        params=params,
        collision=collision,
        sv_halt_time=t_sv_halt if col_t is None or col_t >= t_sv_halt else None,
        pov_halt_time=t_pov_halt if t_pov_halt <= end else None,
        min_gap=min_gap,
        min_gap_time=min_gap_t,
    )


def classify_case(trace: ExecutionTrace) -> str:
    """Velocity-pattern case of a worst-case execution trace."""
    if not trace.samples:
        raise ClassifyError("cannot classify an empty trace")
    return classify_worst_case(trace.params, trace.samples[0].state)


def classify_worst_case(params: RssParams, start: ScenarioState) -> str:
    """Velocity-pattern case of the worst-case execution from `start`.

    The sign history of the relative velocity w = v_r - v_f decides the
    case: always nonnegative (Case1), always negative until the SV halts
    (Case4), or crossing from negative to positive -- during the response
    window (Case2) or during the braking phase (Case3).  w is piecewise
    linear under the worst-case behaviors, so the crossing is computed
    exactly from the start state.
    """
    w = start.v_r - start.v_f
    if w >= 0.0:
        return CASE_1

    v_peak = start.v_r + params.a_max * params.rho
    t_s = params.rho + v_peak / params.a_brake_min if v_peak > 0 else 0.0
    t_p = start.v_f / params.a_brake_max

    breakpoints = sorted({min(params.rho, t_s), min(t_p, t_s), t_s})
    prev = 0.0
    for b in breakpoints:
        if b <= prev:
            continue
        mid = 0.5 * (prev + b)
        slope = (params.a_max if mid < params.rho else -params.a_brake_min) + (
            params.a_brake_max if mid < t_p else 0.0
        )
        w_end = w + slope * (b - prev)
        if w_end >= 0.0:
            t_c = prev + (-w) / slope if slope > 0 else b
            return CASE_2 if t_c < params.rho else CASE_3
        w = w_end
        prev = b
    return CASE_4


# ---------------------------------------------------------------------------
# POV behavior models

@dataclass(frozen=True)
class PovBehavior:
    """Front-vehicle behavior: an acceleration policy plus its bounds.

    The policy maps (t, position, velocity) to an acceleration, which is
    clamped to [-brake_limit, a_fwd_max].  brake_limit is normally the
    scenario's a_brake_max; exceeding it puts the POV outside the model.
    """

    policy: Callable[[float, float, float], float]
    brake_limit: float
    a_fwd_max: float = 2.0

    def command(self, t: float, x: float, v: float) -> float:
        return min(self.a_fwd_max, max(-self.brake_limit, self.policy(t, x, v)))


def worst_case_pov(params: RssParams) -> PovBehavior:
    """Emergency braking to a halt: the worst admissible POV behavior."""
    return PovBehavior(lambda t, x, v: -params.a_brake_max, params.a_brake_max)


def gentle_pov(params: RssParams, rate: float = 1.0) -> PovBehavior:
    return PovBehavior(lambda t, x, v: -rate, params.a_brake_max)


def constant_pov(params: RssParams, accel: float, a_fwd_max: float = 2.0) -> PovBehavior:
    return PovBehavior(lambda t, x, v: accel, params.a_brake_max, a_fwd_max)


def piecewise_pov(params: RssParams, schedule, a_fwd_max: float = 2.0) -> PovBehavior:
    """Piecewise-constant acceleration schedule [(start time, accel), ...]."""
    starts = [t for t, _ in schedule]
    accels = [a for _, a in schedule]

    def policy(t, x, v):
        i = max(0, bisect_right(starts, t) - 1)
        return accels[i]

    return PovBehavior(policy, params.a_brake_max, a_fwd_max)


# ---------------------------------------------------------------------------
# fixed-step integrator

def advance_vehicle(x: float, v: float, a: float, dt: float):
    """One exact constant-acceleration step with the no-reversing clamp.

    The velocity-zero crossing is solved inside the step, so stopping
    distances carry no O(dt) bias.
    """
    if v <= 0.0 and a <= 0.0:
        return x, 0.0
    if a < 0.0 and v + a * dt < 0.0:
        t_stop = v / (-a)
        return x + v * t_stop + 0.5 * a * t_stop * t_stop, 0.0
    return x + v * dt + 0.5 * a * dt * dt, max(0.0, v + a * dt)


def refine_crossing(x_r, v_r, a_r, x_f, v_f, a_f, step, length):
    """Bisect for the time within (0, step] where the gap falls to
    length + COLLISION_EPS, using the exact per-vehicle kinematics.

    Precondition: the gap is above the threshold at 0 and at or below it
    at `step`.
    """

    def gap_at(tau):
        xr, _ = advance_vehicle(x_r, v_r, a_r, tau)
        xf, _ = advance_vehicle(x_f, v_f, a_f, tau)
        return xf - xr - length

    lo, hi = 0.0, step
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if gap_at(mid) <= COLLISION_EPS:
            hi = mid
        else:
            lo = mid
    return hi


def integrate(
    params: RssParams,
    start: ScenarioState,
    sv_policy: Callable[[float, ScenarioState], float],
    pov_behavior: PovBehavior,
    dt: float,
    t_end: float,
    mode: str = AC,
) -> ExecutionTrace:
    """Fixed-step simulation of arbitrary SV/POV behaviors.

    Policies are sampled at the start of each step and held constant over
    it; within a step the kinematics are exact.  A collision (gap falling
    to vehicle_length) is located by linear sub-step refinement and ends
    the trace.
    """
    if dt <= 0:
        raise StepError(f"dt must be > 0, got {dt!r}")
    length = params.vehicle_length
    x_f, v_f, x_r, v_r = start.x_f, start.v_f, start.x_r, start.v_r
    samples = []
    collision = None
    sv_halt = None
    pov_halt = None
    min_gap = math.inf
    min_gap_t = 0.0

    n_steps = max(0, int(math.ceil(t_end / dt - 1e-9)))
    t = 0.0
    for i in range(n_steps + 1):
        t = i * dt
        state = ScenarioState(x_f, v_f, x_r, v_r)
        a_r = sv_policy(t, state)
        g = state.gap - length
        if g < min_gap:
            min_gap, min_gap_t = g, t
        samples.append(TrajectorySample(t, state, a_r, mode))
        if g <= COLLISION_EPS:
            collision = CollisionEvent(t, state.gap)
            break
        if sv_halt is None and v_r <= 0.0:
            sv_halt = t
        if pov_halt is None and v_f <= 0.0:
            pov_halt = t
        if i == n_steps:
            break

        step = min(dt, t_end - t)
        a_f = pov_behavior.command(t, x_f, v_f)
        nx_r, nv_r = advance_vehicle(x_r, v_r, a_r, step)
        nx_f, nv_f = advance_vehicle(x_f, v_f, a_f, step)
        g_new = (nx_f - nx_r) - length
        if g_new <= COLLISION_EPS:
            tau = refine_crossing(x_r, v_r, a_r, x_f, v_f, a_f, step, length)
            t_c = t + tau
            cx_r, cv_r = advance_vehicle(x_r, v_r, a_r, tau)
            cx_f, cv_f = advance_vehicle(x_f, v_f, a_f, tau)
            cstate = ScenarioState(cx_f, cv_f, cx_r, cv_r)
            samples.append(TrajectorySample(t_c, cstate, a_r, mode))
            collision = CollisionEvent(t_c, cstate.gap)
            if cstate.gap - length < min_gap:
                min_gap, min_gap_t = cstate.gap - length, t_c
            break
        x_r, v_r, x_f, v_f = nx_r, nv_r, nx_f, nv_f

    return ExecutionTrace(
        samples=tuple(samples),
        params=params,
        collision=collision,
        sv_halt_time=sv_halt,
        pov_halt_time=pov_halt,
        min_gap=min_gap + length,
        min_gap_time=min_gap_t,
    )

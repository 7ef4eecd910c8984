"""Golden-trajectory tests for the offline auditor.

The fixtures are hand-constructed sample sequences; states need not be
kinematically exact because the auditor judges recorded data, not a
simulator.
"""
import pytest

from rsskit.audit import (
    INCONSISTENT,
    LIABILITY_NONE,
    POV_OUTSIDE_MODEL,
    REASON_NO_RESPONSE,
    REASON_UNSAFE_START,
    REASON_WEAK_BRAKING,
    SATISFIED,
    NOT_APPLICABLE,
    SV_LIABLE,
    VIOLATED,
    attribute_liability,
    audit,
    check_compliance,
    principles_report,
    safety_metric,
)
from rsskit.core import AC, BC, RssParams, ScenarioState, Trajectory, TrajectorySample
from rsskit.errors import NoCollision

PAPER = RssParams(0.3, 2.0, 4.0, 8.0)


def traj(rows):
    """rows: (t, gap, v_r, v_f, a_r, mode) with the rear vehicle pinned at 0."""
    return Trajectory(
        tuple(
            TrajectorySample(t, ScenarioState(gap, v_f, 0.0, v_r), a_r, mode)
            for t, gap, v_r, v_f, a_r, mode in rows
        ),
        PAPER,
    )


def moving_traj(rows):
    """rows: (t, x_r, v_r, x_f, v_f, a_r, mode) with explicit positions."""
    return Trajectory(
        tuple(
            TrajectorySample(t, ScenarioState(x_f, v_f, x_r, v_r), a_r, mode)
            for t, x_r, v_r, x_f, v_f, a_r, mode in rows
        ),
        PAPER,
    )


GOLDEN_COMPLIANT = traj(
    [(0.1 * i, 40.0, 20.0, 20.0, 0.0, AC) for i in range(6)]
)

# condition false (gap 30 < 34.135) and no response running
GOLDEN_NO_RESPONSE = traj(
    [(0.0, 40.0, 20.0, 20.0, 0.0, AC)]
    + [(0.1 * i, 30.0, 20.0, 20.0, 0.0, AC) for i in range(1, 5)]
)

# a response episode whose first sample already violated the condition
GOLDEN_UNSAFE_START = traj(
    [(0.1 * i, 30.0, 20.0, 20.0, -4.0, BC) for i in range(5)]
)

# episode starts safe, but past the response window the braking is too weak
GOLDEN_WEAK_BRAKING = traj(
    [
        (0.0, 40.0, 20.0, 20.0, 2.0, BC),
        (0.2, 35.0, 20.0, 20.0, 2.0, BC),
        (0.4, 33.0, 20.0, 20.0, -1.0, BC),   # still inside rho + time_tol
        (0.6, 31.0, 20.0, 20.0, -1.0, BC),   # window over; -1 is not braking
        (0.8, 29.0, 20.0, 20.0, -1.0, BC),
    ]
)


def test_golden_compliant():
    compliant, violations = check_compliance(GOLDEN_COMPLIANT)
    assert compliant
    assert violations == []


def test_golden_no_response():
    compliant, violations = check_compliance(GOLDEN_NO_RESPONSE)
    assert not compliant
    assert len(violations) == 1
    v = violations[0]
    assert v.reason == REASON_NO_RESPONSE
    assert v.t_start == pytest.approx(0.1)
    assert v.t_end == pytest.approx(0.4)


def test_golden_unsafe_start():
    compliant, violations = check_compliance(GOLDEN_UNSAFE_START)
    assert not compliant
    assert {v.reason for v in violations} == {REASON_UNSAFE_START}


def test_golden_weak_braking():
    compliant, violations = check_compliance(GOLDEN_WEAK_BRAKING)
    assert not compliant
    assert [v.reason for v in violations] == [REASON_WEAK_BRAKING]
    assert violations[0].t_start == pytest.approx(0.6)


def test_valid_episode_bridges_condition_violation():
    # proper response started from a safe state: later condition-false
    # samples are compliant while braking hard enough
    rows = [
        (0.0, 40.0, 20.0, 20.0, 2.0, BC),
        (0.2, 36.0, 20.0, 18.0, 2.0, BC),
        (0.4, 33.0, 19.6, 16.4, -4.0, BC),
        (0.6, 31.0, 18.8, 14.8, -4.0, BC),
    ]
    compliant, violations = check_compliance(traj(rows))
    assert compliant, violations


def test_metric_score():
    timeline, score = safety_metric(GOLDEN_COMPLIANT)
    assert score == pytest.approx(5.865, abs=1e-9)
    assert all(m == pytest.approx(5.865, abs=1e-9) for _, m in timeline)


def test_metric_negative_on_violation():
    _, score = safety_metric(GOLDEN_NO_RESPONSE)
    assert score == pytest.approx(30.0 - 34.135, abs=1e-9)


# --- liability -------------------------------------------------------------

# SV closes on an in-model front vehicle without responding
LIAB_SV = moving_traj(
    [
        (0.0, 0.0, 25.0, 30.0, 20.0, 0.0, AC),
        (0.5, 12.5, 25.0, 40.0, 20.0, 0.0, AC),
        (1.0, 25.0, 25.0, 50.0, 20.0, 0.0, AC),
        (2.0, 50.0, 25.0, 70.0, 20.0, 0.0, AC),
        (4.0, 100.0, 25.0, 100.0, 20.0, 0.0, AC),  # gap 0: collision
    ]
)

# front vehicle decelerates far beyond the model limit (11 m/s^2)
LIAB_POV = moving_traj(
    [
        (0.0, 0.0, 20.0, 25.0, 20.0, 0.0, AC),
        (0.1, 2.0, 20.0, 26.9, 18.9, 0.0, AC),
        (0.2, 4.0, 20.0, 28.7, 17.8, 0.0, AC),
        (0.3, 6.0, 20.0, 30.3, 16.7, 0.0, AC),
        (0.4, 8.0, 20.0, 31.9, 15.6, 0.0, AC),
        (0.5, 10.0, 20.0, 10.0, 14.5, 0.0, AC),  # gap 0: collision
    ]
)

# compliant prefix followed by an in-model collision: contradicts the
# safety guarantee, so the auditor must flag the record itself
LIAB_INCONSISTENT = moving_traj(
    [
        (0.0, 0.0, 0.0, 1.0, 0.0, 0.0, AC),
        (0.5, 0.0, 0.0, 1.0, 0.0, 0.0, AC),
        (1.0, 0.0, 0.0, 0.0, 0.0, 0.0, AC),  # gap 0: collision
    ]
)


def test_liability_sv():
    assert attribute_liability(LIAB_SV) == SV_LIABLE


def test_liability_pov_outside_model():
    assert attribute_liability(LIAB_POV) == POV_OUTSIDE_MODEL


def test_liability_inconsistent():
    assert attribute_liability(LIAB_INCONSISTENT) == INCONSISTENT


def test_liability_requires_collision():
    with pytest.raises(NoCollision):
        attribute_liability(GOLDEN_COMPLIANT)


def test_principles():
    rep = principles_report(GOLDEN_COMPLIANT)
    assert rep == {1: SATISFIED, 2: NOT_APPLICABLE, 3: NOT_APPLICABLE,
                   4: NOT_APPLICABLE, 5: SATISFIED}
    rep = principles_report(LIAB_SV)
    assert rep[1] == VIOLATED and rep[5] == VIOLATED
    # a collision caused by an out-of-model front vehicle is not our fault
    rep = principles_report(LIAB_POV)
    assert rep[1] == SATISFIED


def test_audit_report_assembly():
    rep = audit(GOLDEN_COMPLIANT)
    assert rep.compliant
    assert rep.liability == LIABILITY_NONE
    assert rep.metric_score == pytest.approx(5.865, abs=1e-9)
    d = rep.to_dict()
    assert d["compliant"] is True
    assert len(d["per_sample"]) == len(GOLDEN_COMPLIANT)

    rep = audit(LIAB_SV)
    assert not rep.compliant
    assert rep.liability == SV_LIABLE


def test_compliance_monotone_under_prefix():
    # a compliant trajectory has compliant prefixes
    for n in range(1, len(GOLDEN_COMPLIANT) + 1):
        ok, _ = check_compliance(GOLDEN_COMPLIANT.prefix(n))
        assert ok

"""Shared domain types: parameters, instantaneous states, trajectories.

Units are SI throughout (m, s, m/s^2).  Braking rates are stored as
positive magnitudes and applied as negative accelerations.  All types are
immutable value objects after construction.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    ConfigError,
    DomainError,
    EmptyTrajectory,
    Negative,
    NonPositive,
    OrderViolation,
)

AC = "AC"
BC = "BC"

_REQUIRED_PARAM_KEYS = ("rho", "a_max", "a_brake_min", "a_brake_max")


@dataclass(frozen=True)
class RssParams:
    """Static scenario parameters.

    rho          -- max response time of the rear vehicle [s]
    a_max        -- max forward acceleration of the rear vehicle [m/s^2]
    a_brake_min  -- max comfortable braking rate of the rear vehicle [m/s^2]
    a_brake_max  -- max emergency braking rate of the front vehicle [m/s^2]
    vehicle_length -- collision offset; 0 treats vehicles as points [m]
    """

    rho: float
    a_max: float
    a_brake_min: float
    a_brake_max: float
    vehicle_length: float = 0.0

    def __post_init__(self) -> None:
        if not self.rho > 0:
            raise NonPositive(f"rho must be > 0, got {self.rho!r}")
        if not self.a_brake_min > 0:
            raise NonPositive(f"a_brake_min must be > 0, got {self.a_brake_min!r}")
        if not self.a_brake_min < self.a_brake_max:
            raise OrderViolation(
                "need a_brake_min < a_brake_max, got "
                f"{self.a_brake_min!r} >= {self.a_brake_max!r}"
            )
        if self.a_max < 0:
            raise Negative(f"a_max must be >= 0, got {self.a_max!r}")
        if self.vehicle_length < 0:
            raise Negative(f"vehicle_length must be >= 0, got {self.vehicle_length!r}")

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "a_max": self.a_max,
            "a_brake_min": self.a_brake_min,
            "a_brake_max": self.a_brake_max,
            "vehicle_length": self.vehicle_length,
        }


def validate_params(raw: dict) -> RssParams:
    """Build RssParams from a raw record (e.g. parsed JSON).

    Missing vehicle_length defaults to 0.  Malformed records raise
    ConfigError; records violating the parameter invariants raise the
    corresponding ParamError subclass.
    """
    if not isinstance(raw, dict):
        raise ConfigError(f"parameter record must be a mapping, got {type(raw).__name__}")
    missing = [k for k in _REQUIRED_PARAM_KEYS if k not in raw]
    if missing:
        raise ConfigError(f"missing parameter keys: {', '.join(missing)}")
    values = {}
    for key in _REQUIRED_PARAM_KEYS + ("vehicle_length",):
        if key == "vehicle_length" and key not in raw:
            values[key] = 0.0
            continue
        try:
            v = float(raw[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"parameter {key!r} is not a number: {raw[key]!r}") from exc
        if not math.isfinite(v):
            raise ConfigError(f"parameter {key!r} must be finite, got {v!r}")
        values[key] = v
    return RssParams(**values)


def load_params(path) -> RssParams:
    """Load parameters from a JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"cannot parse parameter file {path}: {exc}") from exc
    return validate_params(raw)


@dataclass(frozen=True)
class ScenarioState:
    """Positions and velocities of both vehicles at one instant.

    x_f/v_f belong to the front vehicle (POV), x_r/v_r to the rear
    vehicle (SV), in the 1-D lane coordinate.  Velocities are
    nonnegative; the lane model has no reversing.
    """

    x_f: float
    v_f: float
    x_r: float
    v_r: float

    def __post_init__(self) -> None:
        if self.v_f < 0 or self.v_r < 0:
            raise DomainError(
                f"velocities must be >= 0, got v_f={self.v_f!r}, v_r={self.v_r!r}"
            )

    @property
    def gap(self) -> float:
        return self.x_f - self.x_r


@dataclass(frozen=True)
class TrajectorySample:
    """One recorded instant: time, state, SV acceleration, control mode."""

    t: float
    state: ScenarioState
    a_r: float
    mode: str = AC


@dataclass(frozen=True)
class Trajectory:
    """Timestamped sample sequence plus the parameters it was recorded under."""

    samples: tuple
    params: RssParams

    def __post_init__(self) -> None:
        samples = tuple(self.samples)
        object.__setattr__(self, "samples", samples)
        if not samples:
            raise EmptyTrajectory("trajectory must contain at least one sample")
        for prev, cur in zip(samples, samples[1:]):
            if not cur.t > prev.t:
                raise DomainError(
                    f"timestamps must be strictly increasing: {prev.t!r} -> {cur.t!r}"
                )

    def __len__(self) -> int:
        return len(self.samples)

    def prefix(self, n: int) -> "Trajectory":
        return Trajectory(self.samples[:n], self.params)

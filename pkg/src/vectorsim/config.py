"""Declarative description of a single run."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional

from .behavior import BehaviorParams, EfficacyFn, ParticipationDist
from .capacity import CapacityParams, ImpulseSchedule
from .entomology import BioParams, DomainError


class ConfigError(ValueError):
    """Invalid configuration. ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class ParameterShift:
    new_k_tol: Optional[int] = None
    new_r_K: Optional[float] = None
    persistent_s_e: bool = True

    def __post_init__(self):
        if self.new_k_tol is not None and (int(self.new_k_tol) != self.new_k_tol or self.new_k_tol < 0):
            raise DomainError(f"new_k_tol must be a non-negative integer, got {self.new_k_tol!r}")
        if self.new_r_K is not None and not (math.isfinite(self.new_r_K) and self.new_r_K >= 0):
            raise DomainError(f"new_r_K must be >= 0, got {self.new_r_K!r}")


@dataclass(frozen=True)
class ExternalEvent:
    """Agency intervention: destroys ``extra_fraction`` of the capacity on top
    of the households' control and then applies ``shift``."""

    day: float
    extra_fraction: float = 0.5
    shift: ParameterShift = field(default_factory=ParameterShift)

    def __post_init__(self):
        if not 0.0 <= self.extra_fraction < 1.0:
            raise DomainError(f"extra_fraction must lie in [0, 1), got {self.extra_fraction!r}")
        if not self.day >= 0:
            raise DomainError(f"day must be >= 0, got {self.day!r}")


@dataclass(frozen=True)
class EventSchedule:
    local: ImpulseSchedule = field(default_factory=ImpulseSchedule)
    local_control: bool = True
    external_events: tuple[ExternalEvent, ...] = ()

    @property
    def horizon(self) -> float:
        return self.local.horizon


@dataclass(frozen=True)
class ScenarioConfig:
    label: str = "run"
    bio: BioParams = field(default_factory=BioParams)
    capacity: CapacityParams = field(default_factory=CapacityParams)
    behavior: BehaviorParams = field(default_factory=BehaviorParams)
    efficacy: EfficacyFn = field(default_factory=EfficacyFn)
    # None -> scale derived from the behavior parameters
    dist_scale: Optional[float] = None
    schedule: EventSchedule = field(default_factory=EventSchedule)
    L_0: float = 20000.0
    A_0: float = 20000.0
    # not None -> households ignored, every local control destroys this fraction
    frozen_gamma: Optional[float] = None
    step: float = 0.1
    output_interval: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.step) and self.step > 0):
            raise ConfigError("step", "must be finite and > 0")
        if not self.output_interval > 0:
            raise ConfigError("output_interval", "must be > 0")
        if self.L_0 < 0 or self.A_0 < 0:
            raise ConfigError("initial", "L_0 and A_0 must be >= 0")
        if self.frozen_gamma is not None and not 0.0 <= self.frozen_gamma < 1.0:
            raise ConfigError("frozen_gamma", "must lie in [0, 1)")
        if self.dist_scale is not None and not self.dist_scale > 0:
            raise ConfigError("dist_scale", "must be > 0")
        sched = self.schedule
        if sched.local_control:
            grid_index(sched.local.tau, self.step, "schedule.tau")
            grid_index(sched.local.t_0, self.step, "schedule.t_0")
        grid_index(sched.horizon, self.step, "schedule.horizon")
        grid_index(self.output_interval, self.step, "output_interval")
        for i, ev in enumerate(sched.external_events):
            if ev.day > sched.horizon:
                raise ConfigError(f"schedule.external_events[{i}].day", "beyond horizon")
            grid_index(ev.day, self.step, f"schedule.external_events[{i}].day")

    def participation_dist(self) -> ParticipationDist:
        if self.dist_scale is None:
            return ParticipationDist.auto(self.behavior)
        return ParticipationDist(self.dist_scale)

    def without_external(self) -> "ScenarioConfig":
        """The counterfactual: identical except for the external events."""
        return replace(self, schedule=replace(self.schedule, external_events=()),
                       label=self.label + "_cf")


def grid_index(value: float, step: float, name: str = "value") -> int:
    """Number of steps that land exactly on ``value``; raises if it is off-grid."""
    q = value / step
    n = round(q)
    if abs(q - n) > 1e-9 * max(1.0, abs(q)):
        raise ConfigError(name, f"{value!r} is not an integer multiple of step {step!r}")
    return int(n)

"""Larval carrying capacity: exponential recovery toward K_max, broken by
instantaneous fractional destruction at control days.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .entomology import DomainError


@dataclass(frozen=True)
class CapacityParams:
    r_K: float = 0.05
    K_max: float = 2e6
    K_0: float = 20000.0

    def __post_init__(self):
        if not (math.isfinite(self.r_K) and self.r_K >= 0):
            raise DomainError(f"r_K must be >= 0, got {self.r_K!r}")
        if not (math.isfinite(self.K_max) and self.K_max > 0):
            raise DomainError(f"K_max must be > 0, got {self.K_max!r}")
        if not (0 < self.K_0 <= self.K_max):
            raise DomainError(f"K_0 must satisfy 0 < K_0 <= K_max, got {self.K_0!r}")


@dataclass(frozen=True)
class ImpulseSchedule:
    """Local control on days t_0, t_0 + tau, ... up to and including horizon."""

    t_0: float = 0.0
    tau: float = 7.0
    horizon: float = 365.0

    def __post_init__(self):
        if not self.tau > 0:
            raise DomainError(f"tau must be > 0, got {self.tau!r}")
        if not self.t_0 >= 0:
            raise DomainError(f"t_0 must be >= 0, got {self.t_0!r}")
        if not self.horizon > self.t_0:
            raise DomainError(f"horizon must exceed t_0, got {self.horizon!r}")

    def days(self) -> list[float]:
        n = int(math.floor((self.horizon - self.t_0) / self.tau + 1e-9))
        return [self.t_0 + i * self.tau for i in range(n + 1)]


def capacity_flow(K_start: float, cp: CapacityParams, dt: float) -> float:
    """Exact solution of dK/dt = r_K (K_max - K) after ``dt`` days."""
    if dt < 0:
        raise DomainError(f"dt must be >= 0, got {dt!r}")
    if K_start < 0:
        raise DomainError(f"K_start must be >= 0, got {K_start!r}")
    return cp.K_max + (K_start - cp.K_max) * math.exp(-cp.r_K * dt)


def apply_impulse(K: float, gamma_val: float) -> float:
    if not 0.0 <= gamma_val < 1.0:
        raise DomainError(f"destroyed fraction must lie in [0, 1), got {gamma_val!r}")
    if K < 0:
        raise DomainError(f"K must be >= 0, got {K!r}")
    return (1.0 - gamma_val) * K


def _check_periodic_args(cp: CapacityParams, tau: float, gamma_H0: float) -> None:
    if cp.r_K <= 0:
        raise DomainError("periodic capacity requires r_K > 0")
    if not tau > 0:
        raise DomainError(f"tau must be > 0, got {tau!r}")
    if not 0.0 <= gamma_H0 < 1.0:
        raise DomainError(f"gamma_H0 must lie in [0, 1), got {gamma_H0!r}")


def periodic_capacity(cp: CapacityParams, tau: float, gamma_H0: float, phase: float) -> float:
    """Value of the attracting tau-periodic capacity orbit at ``phase`` days
    after an impulse (post-impulse value at phase 0)."""
    _check_periodic_args(cp, tau, gamma_H0)
    decay = math.exp(-cp.r_K * tau)
    return (1.0 - gamma_H0 * math.exp(-cp.r_K * phase) / (1.0 - (1.0 - gamma_H0) * decay)) * cp.K_max


def periodic_capacity_bounds(cp: CapacityParams, tau: float, gamma_H0: float) -> tuple[float, float]:
    """(post-impulse minimum, pre-impulse maximum) of the periodic orbit."""
    _check_periodic_args(cp, tau, gamma_H0)
    decay = math.exp(-cp.r_K * tau)
    denom = 1.0 - (1.0 - gamma_H0) * decay
    lo = (1.0 - gamma_H0) * (1.0 - decay) / denom * cp.K_max
    hi = (1.0 - decay) / denom * cp.K_max
    return lo, hi


def one_period_map(K: float, cp: CapacityParams, tau: float, gamma_H0: float) -> float:
    """Post-impulse capacity -> post-impulse capacity one period later."""
    return apply_impulse(capacity_flow(K, cp, tau), gamma_H0)

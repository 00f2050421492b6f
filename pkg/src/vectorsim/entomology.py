"""Autonomous two-stage mosquito model (aquatic stage L_v, adult females A_v).

    dL/dt = rb * A * (1 - L/K) - (nu_L + mu_L) * L
    dA/dt = nu_L * L - mu_v * A
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass


class DomainError(ValueError):
    """Raised when an input lies outside the domain of a model formula."""


def _check_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class BioParams:
    """Mosquito biology. ``rb`` is the product sex ratio x daily emerged-egg rate."""

    rb: float = 5.0
    nu_L: float = 1.0 / 15.0
    mu_L: float = 0.01
    mu_v: float = 0.05

    def __post_init__(self):
        for name in ("rb", "nu_L", "mu_L", "mu_v"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be finite and > 0, got {v!r}")

    @property
    def aquatic_exit_rate(self) -> float:
        return self.nu_L + self.mu_L


@dataclass(frozen=True)
class MosquitoState:
    L_v: float
    A_v: float


class Verdict(enum.Enum):
    EXTINCTION = "Extinction"
    PERSISTENCE = "Persistence"


def ode_rhs(state: MosquitoState, p: BioParams, K_v: float) -> tuple[float, float]:
    L, A = state.L_v, state.A_v
    _check_finite(L_v=L, A_v=A, K_v=K_v)
    if K_v <= 0:
        raise DomainError(f"K_v must be > 0, got {K_v!r}")
    if L < 0 or A < 0:
        raise DomainError("state must be non-negative")
    dL = p.rb * A * (1.0 - L / K_v) - (p.nu_L + p.mu_L) * L
    dA = p.nu_L * L - p.mu_v * A
    return dL, dA


def basic_offspring_number(p: BioParams) -> float:
    """Mean number of offspring a female produces over its lifetime."""
    return p.nu_L * p.rb / ((p.nu_L + p.mu_L) * p.mu_v)


def equilibria(p: BioParams, K_v: float) -> list[MosquitoState]:
    """Equilibria of the autonomous model, trivial state first.

    The positive equilibrium is included only when the offspring number
    exceeds one.
    """
    if not K_v > 0:
        raise DomainError(f"K_v must be > 0, got {K_v!r}")
    out = [MosquitoState(0.0, 0.0)]
    n = basic_offspring_number(p)
    if n > 1.0:
        frac = 1.0 - 1.0 / n
        out.append(MosquitoState(frac * K_v, p.nu_L / p.mu_v * frac * K_v))
    return out


def invariant_region(p: BioParams, K_v: float) -> tuple[float, float]:
    """Upper corner (L_max, A_max) of the positively invariant box."""
    if not K_v > 0:
        raise DomainError(f"K_v must be > 0, got {K_v!r}")
    return K_v, p.nu_L / p.mu_v * K_v


def classify_autonomous(p: BioParams) -> Verdict:
    # the boundary N == 1 belongs to extinction
    if basic_offspring_number(p) <= 1.0:
        return Verdict.EXTINCTION
    return Verdict.PERSISTENCE


def jacobian(state: MosquitoState, p: BioParams, K_v: float) -> tuple[tuple[float, float], tuple[float, float]]:
    L, A = state.L_v, state.A_v
    return (
        (-p.rb * A / K_v - (p.nu_L + p.mu_L), p.rb * (1.0 - L / K_v)),
        (p.nu_L, -p.mu_v),
    )

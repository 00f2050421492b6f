"""Threshold analysis of the periodically controlled system."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .entomology import BioParams, DomainError, basic_offspring_number


class ControlledKind(enum.Enum):
    PERIODIC_PERSISTENCE = "PeriodicPersistence"
    EXTINCTION = "Extinction"
    INDETERMINATE = "Indeterminate"


@dataclass(frozen=True)
class ControlledVerdict:
    kind: ControlledKind
    C: float
    lhs: float
    rhs_persist: float
    rhs_extinct: float
    # extinction bound with C scaled by exp(-r_K tau); weaker than rhs_extinct
    rhs_extinct_diag: float


def _check(gamma_H0: float, r_K: float, tau: float) -> None:
    if not r_K > 0:
        raise DomainError(f"r_K must be > 0, got {r_K!r}")
    if not tau > 0:
        raise DomainError(f"tau must be > 0, got {tau!r}")
    if not 0.0 <= gamma_H0 < 1.0:
        raise DomainError(f"gamma_H0 must lie in [0, 1), got {gamma_H0!r}")


def impulse_strength(r_K: float, gamma_H0: float, tau: float) -> float:
    """Average per-day capacity removal rate C of the periodic control."""
    _check(gamma_H0, r_K, tau)
    return r_K * gamma_H0 / -math.expm1(-r_K * tau)


def _rhs(p: BioParams, c: float) -> float:
    return (1.0 + p.mu_v / p.nu_L * c) * (1.0 + c / (p.nu_L + p.mu_L))


def persistence_rhs(p: BioParams, gamma_H0: float, r_K: float, tau: float) -> float:
    return _rhs(p, impulse_strength(r_K, gamma_H0, tau) / (1.0 - gamma_H0))


def extinction_rhs(p: BioParams, gamma_H0: float, r_K: float, tau: float) -> float:
    return _rhs(p, impulse_strength(r_K, gamma_H0, tau))


def persistence_condition(p: BioParams, gamma_H0: float, r_K: float, tau: float) -> bool:
    return basic_offspring_number(p) > persistence_rhs(p, gamma_H0, r_K, tau)


def extinction_condition(p: BioParams, gamma_H0: float, r_K: float, tau: float) -> bool:
    return basic_offspring_number(p) <= extinction_rhs(p, gamma_H0, r_K, tau)


def classify_controlled(p: BioParams, gamma_H0: float, r_K: float, tau: float) -> ControlledVerdict:
    c = impulse_strength(r_K, gamma_H0, tau)
    n = basic_offspring_number(p)
    rp = _rhs(p, c / (1.0 - gamma_H0))
    re = _rhs(p, c)
    if n > rp:
        kind = ControlledKind.PERIODIC_PERSISTENCE
    elif n <= re:
        kind = ControlledKind.EXTINCTION
    else:
        kind = ControlledKind.INDETERMINATE
    return ControlledVerdict(kind, c, n, rp, re, _rhs(p, c * math.exp(-r_K * tau)))


def limiting_participation(traj, last: int = 5) -> float:
    """Empirical limit H_0: mean H over the last ``last`` control days."""
    hs = [r.H for r in traj.impulses[-last:]]
    if not hs:
        raise ValueError("trajectory has no control days")
    return sum(hs) / len(hs)

"""Household decision layer: perceived bite risk, adoption threshold,
participation rate H and the efficacy map gamma(H).

Each household carries a cost proclivity ``s`` drawn from a zero-mean normal
density with standard deviation ``scale``; its weekly control cost in
utility units is ``W * kappa(s, s_e)``. A household controls when the
expected utility gain ``pi * u_c`` covers that cost.

Two sign conventions are available through ``BehaviorParams.convention``:

``"adoption"`` (default)
    kappa(s, s_e) = kappa_0 * s - kappa_1 * s_e. Adopters are the households
    with s <= threshold, so H = F(threshold). H grows with the perceived risk
    and with the external intervention.
``"literal"``
    threshold = (pi * u_c / W - kappa_1 * s_e) / kappa_0 and
    H = 1 - F(threshold), i.e. the formulas taken symbol for symbol. H then
    counts the households that do not satisfy ``adopts`` and falls as risk
    rises.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .entomology import DomainError

CONVENTIONS = ("adoption", "literal")


@dataclass(frozen=True)
class BehaviorParams:
    u_c: float = 0.6
    beta: float = 1.2
    income: float = 103.0
    kappa_0: float = 14.8
    kappa_1: float = 50.0
    k_tol: int = 3
    N_h: float = 200000.0
    s_e: int = 0
    convention: str = "adoption"

    def __post_init__(self):
        if not 0 < self.u_c <= 1:
            raise DomainError(f"u_c must lie in (0, 1], got {self.u_c!r}")
        if not self.beta > 0:
            raise DomainError(f"beta must be > 0, got {self.beta!r}")
        if not self.income > 0:
            raise DomainError(f"income must be > 0, got {self.income!r}")
        if not self.kappa_0 > 0:
            raise DomainError(f"kappa_0 must be > 0, got {self.kappa_0!r}")
        if not self.kappa_1 >= 0:
            raise DomainError(f"kappa_1 must be >= 0, got {self.kappa_1!r}")
        if isinstance(self.k_tol, bool) or int(self.k_tol) != self.k_tol or self.k_tol < 0:
            raise DomainError(f"k_tol must be a non-negative integer, got {self.k_tol!r}")
        object.__setattr__(self, "k_tol", int(self.k_tol))
        if not self.N_h > 0:
            raise DomainError(f"N_h must be > 0, got {self.N_h!r}")
        if self.s_e not in (0, 1):
            raise DomainError(f"s_e must be 0 or 1, got {self.s_e!r}")
        if self.convention not in CONVENTIONS:
            raise DomainError(f"convention must be one of {CONVENTIONS}, got {self.convention!r}")

    @property
    def W(self) -> float:
        return marginal_utility(self.beta, self.income)


class EfficacyKind(enum.Enum):
    LINEAR = "linear"
    SIGMOID = "sigmoid"


@dataclass(frozen=True)
class EfficacyFn:
    kind: EfficacyKind = EfficacyKind.LINEAR
    a: float = 0.5

    def __post_init__(self):
        kind = EfficacyKind(self.kind) if not isinstance(self.kind, EfficacyKind) else self.kind
        object.__setattr__(self, "kind", kind)
        if kind is EfficacyKind.LINEAR and not 0 < self.a < 1:
            raise DomainError(f"linear efficacy needs 0 < a < 1, got {self.a!r}")
        if kind is EfficacyKind.SIGMOID and not self.a > 0:
            raise DomainError(f"sigmoid efficacy needs a > 0, got {self.a!r}")


@dataclass(frozen=True)
class ParticipationDist:
    """Zero-mean normal density of the cost proclivity, parameterized by its
    standard deviation."""

    scale: float

    def __post_init__(self):
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise DomainError(f"scale must be finite and > 0, got {self.scale!r}")

    @classmethod
    def auto(cls, bp: BehaviorParams) -> "ParticipationDist":
        return cls(bp.u_c / (bp.W * bp.kappa_0))

    def cdf(self, x: float) -> float:
        return float(special.ndtr(x / self.scale))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.normal(0.0, self.scale, size)


def marginal_utility(beta: float, income: float) -> float:
    """Marginal utility of income under constant relative risk aversion."""
    if not (beta > 0 and income > 0):
        raise DomainError("beta and income must be > 0")
    return math.exp(-beta * math.log(income))


def bite_probability(A_v: float, N_h: float, k_tol: int) -> float:
    """P(X >= k_tol) for X ~ Poisson(A_v / N_h).

    Uses the identity P(X >= k) = P(k, lam), the regularized lower
    incomplete gamma function, which avoids cancellation in 1 - sum(pmf).
    """
    if A_v < 0 or not N_h > 0 or k_tol < 0:
        raise DomainError("need A_v >= 0, N_h > 0, k_tol >= 0")
    if k_tol == 0:
        return 1.0
    lam = A_v / N_h
    if lam == 0.0:
        return 0.0
    return float(special.gammainc(k_tol, lam))


def control_cost(s: float, bp: BehaviorParams) -> float:
    """Per-household cost kappa(s, s_e) of one round of mechanical control."""
    if bp.convention == "adoption":
        return bp.kappa_0 * s - bp.kappa_1 * bp.s_e
    return bp.kappa_0 * s + bp.kappa_1 * bp.s_e


def adopts(s, pi: float, bp: BehaviorParams):
    """Whether a household with proclivity ``s`` performs control: the
    expected utility loss avoided must cover the cost in utility units.
    Accepts scalars or arrays."""
    return pi * bp.u_c >= control_cost(s, bp) * bp.W


def participation_threshold(pi: float, bp: BehaviorParams) -> float:
    if not 0.0 <= pi <= 1.0:
        raise DomainError(f"pi must lie in [0, 1], got {pi!r}")
    gain = pi * bp.u_c / bp.W
    if bp.convention == "adoption":
        return (gain + bp.kappa_1 * bp.s_e) / bp.kappa_0
    return (gain - bp.kappa_1 * bp.s_e) / bp.kappa_0


def participation_rate(pi: float, bp: BehaviorParams, dist: ParticipationDist) -> float:
    """Fraction H of households performing mechanical control."""
    x = participation_threshold(pi, bp)
    if bp.convention == "adoption":
        return dist.cdf(x)
    return 1.0 - dist.cdf(x)


def efficacy(H: float, fn: EfficacyFn) -> float:
    """Fraction of breeding sites destroyed when a fraction H participates."""
    if not 0.0 <= H <= 1.0:
        raise DomainError(f"H must lie in [0, 1], got {H!r}")
    if fn.kind is EfficacyKind.LINEAR:
        return fn.a * H
    return fn.a * H / (1.0 + fn.a * H)

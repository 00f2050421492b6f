"""Time integration of the coupled mosquito / capacity / household system.

The mosquito part uses a nonlocal nonstandard finite-difference (NSFD)
update, the capacity is advanced by its exact flow, and control days are
handled as exact jumps on the step grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import behavior as bh
from .capacity import CapacityParams, capacity_flow
from .config import ScenarioConfig, grid_index
from .entomology import BioParams, DomainError


class IntegrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SimState:
    t: float
    L_v: float
    A_v: float
    K_v: float


@dataclass(frozen=True)
class ImpulseRecord:
    t: float
    pi: float
    H: float
    gamma: float
    K_pre: float
    K_post: float
    s_e: int


@dataclass(frozen=True)
class ExternalRecord:
    t: float
    extra_fraction: float
    K_pre: float
    K_post: float


@dataclass
class Trajectory:
    t: np.ndarray
    L_v: np.ndarray
    A_v: np.ndarray
    K_v: np.ndarray
    impulses: list[ImpulseRecord] = field(default_factory=list)
    external: list[ExternalRecord] = field(default_factory=list)
    label: str = ""

    def __len__(self):
        return len(self.t)

    @classmethod
    def empty(cls, label: str = "") -> "Trajectory":
        z = np.zeros(0)
        return cls(z, z.copy(), z.copy(), z.copy(), label=label)

    def control_H(self, after: float = -math.inf) -> tuple[np.ndarray, np.ndarray]:
        """(days, H) of the local-control records strictly after ``after``."""
        rec = [r for r in self.impulses if r.t > after]
        return np.array([r.t for r in rec]), np.array([r.H for r in rec])


@dataclass(frozen=True)
class OrbitSummary:
    mean: float
    min: float
    max: float


def nsfd_denominator(p: BioParams, h: float) -> float:
    q = p.nu_L + p.mu_L + p.mu_v
    return -math.expm1(-q * h) / q


def _nsfd_update(L, A, K, rb, exit_rate, nu_L, mu_v, phi):
    L_new = (L + phi * rb * A) / (1.0 + phi * (rb * A / K + exit_rate))
    A_new = (A + phi * nu_L * L_new) / (1.0 + phi * mu_v)
    return L_new, A_new


def nsfd_step(state: SimState, p: BioParams, cp: CapacityParams, h: float) -> SimState:
    """Advance one step of size ``h``.

    L and A use a nonlocal update with the start-of-step capacity; every
    denominator is >= 1 so positivity holds for any ``h > 0``, and fixed
    points are exactly the ODE equilibria. K uses the exact flow.
    """
    if not h > 0:
        raise DomainError(f"h must be > 0, got {h!r}")
    if not all(math.isfinite(v) for v in (state.L_v, state.A_v, state.K_v)):
        raise IntegrationError(f"non-finite state at t={state.t}: {state}")
    phi = nsfd_denominator(p, h)
    L, A = _nsfd_update(state.L_v, state.A_v, state.K_v, p.rb, p.nu_L + p.mu_L, p.nu_L, p.mu_v, phi)
    return SimState(state.t + h, L, A, capacity_flow(state.K_v, cp, h))


def simulate(config: ScenarioConfig) -> Trajectory:
    """Run one scenario and return the sampled trajectory.

    Same-day order on a control day: local impulse, external impulse,
    parameter shifts, then the (post-impulse) output sample. While an
    external event takes place households see s_e = 1; afterwards s_e stays
    at 1 only if the event's shift is persistent.
    """
    p, cp, bp = config.bio, config.capacity, config.behavior
    sched = config.schedule
    h = config.step
    n_steps = grid_index(sched.horizon, h, "schedule.horizon")
    out_every = grid_index(config.output_interval, h, "output_interval")
    dist = config.participation_dist()

    control = set()
    if sched.local_control:
        control = {grid_index(d, h) for d in sched.local.days()}
    events: dict[int, list] = {}
    for ev in sched.external_events:
        events.setdefault(grid_index(ev.day, h), []).append(ev)

    phi = nsfd_denominator(p, h)
    rb, exit_rate, nu_L, mu_v = p.rb, p.nu_L + p.mu_L, p.nu_L, p.mu_v
    K_max = cp.K_max
    r_K = cp.r_K
    decay = math.exp(-r_K * h)
    k_tol, s_e = bp.k_tol, bp.s_e

    L, A, K = float(config.L_0), float(config.A_0), float(cp.K_0)
    n_out = n_steps // out_every + 1
    ts = np.empty(n_out)
    Ls = np.empty(n_out)
    As = np.empty(n_out)
    Ks = np.empty(n_out)
    impulses, external = [], []
    j = 0
    for i in range(n_steps + 1):
        t = i * h
        todays = events.get(i)
        if i in control:
            s_now = 1 if todays else s_e
            pi = bh.bite_probability(A, bp.N_h, k_tol)
            cur = bh.BehaviorParams(bp.u_c, bp.beta, bp.income, bp.kappa_0, bp.kappa_1,
                                    k_tol, bp.N_h, s_now, bp.convention)
            H = bh.participation_rate(pi, cur, dist)
            g = config.frozen_gamma if config.frozen_gamma is not None else bh.efficacy(H, config.efficacy)
            K_post = (1.0 - g) * K
            impulses.append(ImpulseRecord(t, pi, H, g, K, K_post, s_now))
            K = K_post
        if todays:
            for ev in todays:
                K_post = (1.0 - ev.extra_fraction) * K
                external.append(ExternalRecord(t, ev.extra_fraction, K, K_post))
                K = K_post
            for ev in todays:
                sh = ev.shift
                if sh.new_k_tol is not None:
                    k_tol = int(sh.new_k_tol)
                if sh.new_r_K is not None:
                    r_K = sh.new_r_K
                    decay = math.exp(-r_K * h)
                s_e = 1 if sh.persistent_s_e else 0
        if i % out_every == 0:
            ts[j], Ls[j], As[j], Ks[j] = t, L, A, K
            j += 1
        if i == n_steps:
            break
        L, A = _nsfd_update(L, A, K, rb, exit_rate, nu_L, mu_v, phi)
        K = K_max + (K - K_max) * decay
        if not (math.isfinite(L) and math.isfinite(A) and math.isfinite(K)):
            raise IntegrationError(f"non-finite state at t={t + h}: L={L}, A={A}, K={K}")
    return Trajectory(ts[:j], Ls[:j], As[:j], Ks[:j], impulses, external, label=config.label)


def detect_periodic_orbit(traj: Trajectory, tau: float, tol: float = 1e-4) -> Optional[OrbitSummary]:
    """Statistics of A_v over the last period if it repeats the previous one.

    Returns None when the trajectory is shorter than 10 periods, when the
    sampling does not divide ``tau``, or when the last two periods differ by
    more than ``tol`` relative to the previous period's maximum.
    """
    if len(traj) < 2:
        return None
    dt = traj.t[1] - traj.t[0]
    m = round(tau / dt)
    if m < 1 or abs(m * dt - tau) > 1e-9 * tau or len(traj) <= 10 * m:
        return None
    last = traj.A_v[-m:]
    prev = traj.A_v[-2 * m:-m]
    ref = np.max(np.abs(prev))
    if ref == 0.0:
        return OrbitSummary(0.0, 0.0, 0.0) if np.all(last == 0.0) else None
    if np.max(np.abs(last - prev)) > tol * ref:
        return None
    return OrbitSummary(float(last.mean()), float(last.min()), float(last.max()))

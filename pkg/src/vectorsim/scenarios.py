"""Scenario configuration files, the built-in presets and paired runs.

A config file is a JSON object. Every key is optional; missing keys take the
value of ``preset`` (default ``"Baseline"``)::

    {
      "preset": "S3",
      "label": "my_run",
      "bio": {"rb": 5, "nu_L": 0.0667, "mu_L": 0.01, "mu_v": 0.05},
      "capacity": {"r_K": 0.05, "K_max": 2e6, "K_0": 20000},
      "behavior": {"u_c": 0.6, "beta": 1.2, "income": 103, "kappa_0": 14.8,
                   "kappa_1": 50, "k_tol": 3, "N_h": 200000, "s_e": 0,
                   "convention": "adoption"},
      "efficacy": {"kind": "linear", "a": 0.5},
      "dist_scale": "auto",
      "initial": {"L_v": 20000, "A_v": 20000},
      "frozen_gamma": null,
      "schedule": {"t_0": 0, "tau": 7, "horizon": 365, "local_control": true,
                   "external_events": [{"day": 70, "extra_fraction": 0.5,
                                        "new_k_tol": null, "new_r_K": 0.06,
                                        "persistent_s_e": true}]},
      "step": 0.1,
      "output_interval": 1
    }
"""
from __future__ import annotations

import copy
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

import numpy as np

from .behavior import BehaviorParams, EfficacyFn
from .capacity import CapacityParams, ImpulseSchedule
from .config import ConfigError, EventSchedule, ExternalEvent, ParameterShift, ScenarioConfig
from .dynamics import OrbitSummary, Trajectory, detect_periodic_orbit, simulate
from .entomology import BioParams, DomainError

PRESETS = ("Baseline", "S1", "S2", "S3", "S4")
INTERVENTION_DAY = 70.0

# sweep axes of each preset; the middle value is the preset's default cell
PRESET_GRIDS: dict[str, dict[str, tuple]] = {
    "Baseline": {},
    "S1": {"u_c": (0.3, 0.6, 0.9), "kappa_1": (0.0, 50.0, 100.0)},
    "S2": {"k_shift": (6, 9, 12)},
    "S3": {},
    "S4": {},
}

_BASE = {
    "label": "run",
    "bio": {"rb": 5.0, "nu_L": 1.0 / 15.0, "mu_L": 0.01, "mu_v": 0.05},
    "capacity": {"r_K": 0.05, "K_max": 2e6, "K_0": 20000.0},
    "behavior": {"u_c": 0.6, "beta": 1.2, "income": 103.0, "kappa_0": 14.8,
                 "kappa_1": 50.0, "k_tol": 3, "N_h": 200000.0, "s_e": 0,
                 "convention": "adoption"},
    "efficacy": {"kind": "linear", "a": 0.5},
    "dist_scale": "auto",
    "initial": {"L_v": 20000.0, "A_v": 20000.0},
    "frozen_gamma": None,
    "schedule": {"t_0": 0.0, "tau": 7.0, "horizon": 365.0, "local_control": True,
                 "external_events": []},
    "step": 0.1,
    "output_interval": 1.0,
}

_EVENT_KEYS = {"day", "extra_fraction", "new_k_tol", "new_r_K", "persistent_s_e"}


def _event(**shift) -> dict:
    ev = {"day": INTERVENTION_DAY, "extra_fraction": 0.5, "new_k_tol": None,
          "new_r_K": None, "persistent_s_e": True}
    ev.update(shift)
    return ev


def preset_dict(name: str, **axes) -> dict:
    """Config dictionary of one cell of a preset. ``axes`` override the
    preset's default (middle) grid values."""
    if name not in PRESETS:
        raise ConfigError("preset", f"unknown preset {name!r}; expected one of {PRESETS}")
    grid = PRESET_GRIDS[name]
    unknown = set(axes) - set(grid)
    if unknown:
        raise ConfigError("preset", f"{name} has no axis {sorted(unknown)}")
    vals = {k: v[len(v) // 2] for k, v in grid.items()}
    vals.update(axes)
    d = copy.deepcopy(_BASE)
    d["label"] = name
    if name == "Baseline":
        d["frozen_gamma"] = 0.0
        d["schedule"]["external_events"] = [_event()]
    elif name == "S1":
        d["behavior"]["u_c"] = vals["u_c"]
        d["behavior"]["kappa_1"] = vals["kappa_1"]
        d["schedule"]["external_events"] = [_event()]
    elif name == "S2":
        d["schedule"]["external_events"] = [_event(new_k_tol=vals["k_shift"])]
    elif name == "S3":
        d["schedule"]["external_events"] = [_event(new_r_K=0.06)]
    else:
        d["schedule"]["external_events"] = [_event(new_k_tol=6, new_r_K=0.06)]
    return d


def preset_cells(name: str) -> list[tuple[str, dict]]:
    grid = PRESET_GRIDS.get(name)
    if grid is None:
        raise ConfigError("preset", f"unknown preset {name!r}; expected one of {PRESETS}")
    keys = list(grid)
    cells = []
    for combo in itertools.product(*(grid[k] for k in keys)):
        axes = dict(zip(keys, combo))
        label = name + "".join(f"_{k}-{_fmt(v)}" for k, v in axes.items())
        d = preset_dict(name, **axes)
        d["label"] = label
        cells.append((label, d))
    return cells


def _fmt(v) -> str:
    return str(int(v)) if float(v).is_integer() else str(v)


def _merge(base: dict, over: dict, path: str = "") -> dict:
    out = dict(base)
    for k, v in over.items():
        where = f"{path}{k}"
        if k not in base:
            raise ConfigError(where, f"unknown key {k!r}")
        if isinstance(base[k], dict) and k != "external_events":
            if not isinstance(v, dict):
                raise ConfigError(where, "expected an object")
            out[k] = _merge(base[k], v, where + ".")
        else:
            out[k] = v
    return out


def _build(section: str, cls, kw: dict):
    try:
        return cls(**kw)
    except (DomainError, TypeError) as e:
        raise ConfigError(section, str(e)) from None


def config_from_dict(raw: dict) -> ScenarioConfig:
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    raw = dict(raw)
    preset = raw.pop("preset", "Baseline")
    d = _merge(preset_dict(preset), raw)

    sched = d["schedule"]
    events = []
    for i, ev in enumerate(sched["external_events"] or []):
        where = f"schedule.external_events[{i}]"
        if not isinstance(ev, dict):
            raise ConfigError(where, "expected an object")
        bad = set(ev) - _EVENT_KEYS
        if bad:
            raise ConfigError(where, f"unknown key {sorted(bad)[0]!r}")
        if "day" not in ev:
            raise ConfigError(where + ".day", "required")
        shift = _build(where, ParameterShift, {k: ev[k] for k in ("new_k_tol", "new_r_K", "persistent_s_e") if k in ev})
        events.append(_build(where, ExternalEvent, {"day": ev["day"], "extra_fraction": ev.get("extra_fraction", 0.5), "shift": shift}))
    local = _build("schedule", ImpulseSchedule, {k: sched[k] for k in ("t_0", "tau", "horizon")})

    scale = d["dist_scale"]
    if scale == "auto":
        scale = None
    elif not isinstance(scale, (int, float)) or isinstance(scale, bool):
        raise ConfigError("dist_scale", "expected 'auto' or a positive number")

    return ScenarioConfig(
        label=str(d["label"]),
        bio=_build("bio", BioParams, d["bio"]),
        capacity=_build("capacity", CapacityParams, d["capacity"]),
        behavior=_build("behavior", BehaviorParams, d["behavior"]),
        efficacy=_build("efficacy", EfficacyFn, d["efficacy"]),
        dist_scale=scale,
        schedule=EventSchedule(local, bool(sched["local_control"]), tuple(events)),
        L_0=d["initial"]["L_v"],
        A_0=d["initial"]["A_v"],
        frozen_gamma=d["frozen_gamma"],
        step=d["step"],
        output_interval=d["output_interval"],
    )


def config_to_dict(cfg: ScenarioConfig) -> dict:
    b = cfg.behavior
    return {
        "label": cfg.label,
        "bio": {"rb": cfg.bio.rb, "nu_L": cfg.bio.nu_L, "mu_L": cfg.bio.mu_L, "mu_v": cfg.bio.mu_v},
        "capacity": {"r_K": cfg.capacity.r_K, "K_max": cfg.capacity.K_max, "K_0": cfg.capacity.K_0},
        "behavior": {"u_c": b.u_c, "beta": b.beta, "income": b.income, "kappa_0": b.kappa_0,
                     "kappa_1": b.kappa_1, "k_tol": b.k_tol, "N_h": b.N_h, "s_e": b.s_e,
                     "convention": b.convention},
        "efficacy": {"kind": cfg.efficacy.kind.value, "a": cfg.efficacy.a},
        "dist_scale": "auto" if cfg.dist_scale is None else cfg.dist_scale,
        "initial": {"L_v": cfg.L_0, "A_v": cfg.A_0},
        "frozen_gamma": cfg.frozen_gamma,
        "schedule": {
            "t_0": cfg.schedule.local.t_0, "tau": cfg.schedule.local.tau,
            "horizon": cfg.schedule.horizon, "local_control": cfg.schedule.local_control,
            "external_events": [
                {"day": e.day, "extra_fraction": e.extra_fraction, "new_k_tol": e.shift.new_k_tol,
                 "new_r_K": e.shift.new_r_K, "persistent_s_e": e.shift.persistent_s_e}
                for e in cfg.schedule.external_events
            ],
        },
        "step": cfg.step,
        "output_interval": cfg.output_interval,
    }


def load_config(path) -> ScenarioConfig:
    text = Path(path).read_text()
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError("<file>", f"invalid JSON: {e}") from None
    return config_from_dict(raw)


@dataclass
class PairedRun:
    label: str
    traj: Trajectory
    counterfactual: Trajectory
    config: ScenarioConfig


def run_pair(cfg: ScenarioConfig) -> PairedRun:
    return PairedRun(cfg.label, simulate(cfg), simulate(cfg.without_external()), cfg)


def run_configs(configs: list[ScenarioConfig], workers: Optional[int] = None) -> list[PairedRun]:
    if workers and workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(run_pair, configs))
    return [run_pair(c) for c in configs]


def run_preset(name: str, workers: Optional[int] = None) -> list[PairedRun]:
    """With/without-intervention pair for every grid cell of a preset."""
    return run_configs([config_from_dict(d) for _, d in preset_cells(name)], workers)


def report_recovery_time(traj: Trajectory, counterfactual: Trajectory, tol: float = 0.05,
                         event_day: Optional[float] = None, sustain: float = 7.0,
                         floor: float = 1.0) -> Optional[float]:
    """Days from the external event until A_v stays within ``tol`` (relative)
    of the counterfactual for ``sustain`` consecutive days.

    Points where the counterfactual A_v is below ``floor`` individuals make
    the relative criterion undefined and never count as recovered.
    """
    if len(traj) != len(counterfactual) or not np.array_equal(traj.t, counterfactual.t):
        raise ValueError("trajectories do not share a time grid")
    if event_day is None:
        if not traj.external:
            raise ValueError("no external event recorded and no event_day given")
        event_day = traj.external[0].t
    t = traj.t
    ref = counterfactual.A_v
    with np.errstate(divide="ignore", invalid="ignore"):
        ok = (ref >= floor) & (np.abs(traj.A_v - ref) <= tol * ref)
    start = int(np.searchsorted(t, event_day - 1e-9))
    for i in range(start, len(t)):
        end = int(np.searchsorted(t, t[i] + sustain + 1e-9, side="right"))
        if t[-1] < t[i] + sustain - 1e-9:
            return None
        if ok[i:end].all():
            return float(t[i] - event_day)
    return None


def summarize(run: PairedRun, tol: float = 1e-3) -> dict[str, Any]:
    tau = run.config.schedule.local.tau
    orb = detect_periodic_orbit(run.traj, tau, tol)
    orb_cf = detect_periodic_orbit(run.counterfactual, tau, tol)
    rec = report_recovery_time(run.traj, run.counterfactual) if run.traj.external else None

    def stats(o: Optional[OrbitSummary]):
        return (o.mean, o.min, o.max) if o else (None, None, None)

    m, lo, hi = stats(orb)
    mc, loc, hic = stats(orb_cf)
    return {
        "label": run.label,
        "orbit_mean": m, "orbit_min": lo, "orbit_max": hi,
        "cf_orbit_mean": mc, "cf_orbit_min": loc, "cf_orbit_max": hic,
        "recovery_time": rec,
        "final_H": run.traj.impulses[-1].H if run.traj.impulses else None,
        "cf_final_H": run.counterfactual.impulses[-1].H if run.counterfactual.impulses else None,
    }

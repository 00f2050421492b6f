"""Command line entry point ``vectorsim``."""
from __future__ import annotations

import argparse
import copy
import itertools
import json
import sys
from pathlib import Path

from . import analysis
from .behavior import efficacy
from .config import ConfigError
from .dynamics import IntegrationError, simulate
from .output import emit_csv, emit_impulses_csv, emit_summary, emit_svg
from .scenarios import (PRESETS, PairedRun, config_from_dict, config_to_dict, load_config,
                        run_configs, run_preset, summarize)

AXIS_ALIASES = {
    "u_c": "behavior.u_c",
    "kappa_1": "behavior.kappa_1",
    "k_tol": "behavior.k_tol",
    "a": "efficacy.a",
    "tau": "schedule.tau",
    "r_K": "capacity.r_K",
    "k_shift": "events.new_k_tol",
    "r_K_shift": "events.new_r_K",
}


def write_pair(run: PairedRun, out: Path) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    for traj in (run.traj, run.counterfactual):
        emit_csv(traj, out / f"{traj.label}_trajectory.csv")
        emit_impulses_csv(traj, out / f"{traj.label}_impulses.csv")
    ev = run.traj.external[0].t if run.traj.external else None
    emit_svg([("with intervention", run.traj), ("without intervention", run.counterfactual)],
             out / f"{run.label}.svg", title=run.label, event_day=ev)
    return summarize(run)


def _write_all(runs: list[PairedRun], out: Path) -> None:
    rows = [write_pair(r, out) for r in runs]
    emit_summary(rows, out / "summary.csv")
    for r in rows:
        print(", ".join(f"{k}={v}" for k, v in r.items()))


def _parse_value(s: str):
    s = s.strip()
    low = s.lower()
    if low in ("null", "none"):
        return None
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(s)
    except ValueError:
        return float(s)


def apply_axis(d: dict, name: str, value) -> dict:
    d = copy.deepcopy(d)
    path = AXIS_ALIASES.get(name, name)
    head, _, key = path.partition(".")
    if head == "events":
        for ev in d["schedule"]["external_events"]:
            if key not in ev:
                raise ConfigError(f"axis {name}", f"events have no field {key!r}")
            ev[key] = value
        return d
    node = d
    parts = path.split(".")
    for p in parts[:-1]:
        if not isinstance(node.get(p), dict):
            raise ConfigError(f"axis {name}", f"unknown section {p!r}")
        node = node[p]
    if parts[-1] not in node:
        raise ConfigError(f"axis {name}", f"unknown field {parts[-1]!r}")
    node[parts[-1]] = value
    return d


def sweep_configs(base: dict, axes: list[tuple[str, list]]):
    names = [n for n, _ in axes]
    for combo in itertools.product(*(v for _, v in axes)):
        d = base
        for n, v in zip(names, combo):
            d = apply_axis(d, n, v)
        d["label"] = base["label"] + "".join(f"_{n}-{v}" for n, v in zip(names, combo))
        yield config_from_dict(d)


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    _write_all(run_configs([cfg]), Path(args.out))
    return 0


def cmd_preset(args) -> int:
    _write_all(run_preset(args.name, workers=args.workers), Path(args.out))
    return 0


def cmd_sweep(args) -> int:
    base = config_to_dict(load_config(args.config))
    axes = []
    for spec in args.axis:
        name, sep, vals = spec.partition("=")
        if not sep or not vals:
            raise ConfigError("--axis", f"expected name=v1,v2,..., got {spec!r}")
        axes.append((name.strip(), [_parse_value(v) for v in vals.split(",")]))
    _write_all(run_configs(list(sweep_configs(base, axes)), workers=args.workers), Path(args.out))
    return 0


def cmd_classify(args) -> int:
    cfg = load_config(args.config)
    r_K = cfg.capacity.r_K
    for ev in cfg.schedule.external_events:
        if ev.shift.new_r_K is not None:
            r_K = ev.shift.new_r_K
    if cfg.frozen_gamma is not None:
        H0, g = None, cfg.frozen_gamma
    else:
        H0 = analysis.limiting_participation(simulate(cfg))
        g = efficacy(H0, cfg.efficacy)
    v = analysis.classify_controlled(cfg.bio, g, r_K, cfg.schedule.local.tau)
    fields = {"kind": v.kind.value, "C": v.C, "lhs": v.lhs, "rhs_persist": v.rhs_persist,
              "rhs_extinct": v.rhs_extinct, "rhs_extinct_diag": v.rhs_extinct_diag,
              "H0": H0, "gamma_H0": g, "r_K": r_K, "tau": cfg.schedule.local.tau}
    if args.json:
        print(json.dumps(fields, indent=2))
    else:
        for k, val in fields.items():
            print(f"{k}: {val}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vectorsim", description="Mosquito control with household behavior.")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("run", help="run one config with and without its external events")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("preset", help="run a built-in scenario")
    p.add_argument("name", choices=PRESETS)
    p.add_argument("--out", default="out")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("classify", help="threshold verdict for the controlled system")
    p.add_argument("--config", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("sweep", help="cartesian sweep over config fields")
    p.add_argument("--config", required=True)
    p.add_argument("--axis", action="append", required=True, help="name=v1,v2,...")
    p.add_argument("--out", default="out")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, IntegrationError, FileNotFoundError) as e:
        print(f"vectorsim: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

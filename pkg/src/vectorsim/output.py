"""CSV and SVG writers for trajectories.

Floats are written with ``repr`` (shortest round-trip form), so re-reading a
CSV gives back the exact in-memory values and repeated runs are
byte-identical.
"""
from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .dynamics import Trajectory

TRAJECTORY_COLUMNS = ("t", "L_v", "A_v", "K_v")
IMPULSE_COLUMNS = ("t", "pi", "H", "gamma", "K_pre", "K_post", "s_e")


def _num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def emit_csv(traj: Trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        for row in zip(traj.t, traj.L_v, traj.A_v, traj.K_v):
            w.writerow([_num(v) for v in row])


def emit_impulses_csv(traj: Trajectory, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(IMPULSE_COLUMNS)
        for r in traj.impulses:
            w.writerow([_num(r.t), _num(r.pi), _num(r.H), _num(r.gamma),
                        _num(r.K_pre), _num(r.K_post), str(r.s_e)])


def read_csv(path) -> Trajectory:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if tuple(rows[0]) != TRAJECTORY_COLUMNS:
        raise ValueError(f"unexpected header {rows[0]!r}")
    data = np.array([[float(v) for v in r] for r in rows[1:]], dtype=float).reshape(-1, 4)
    return Trajectory(data[:, 0].copy(), data[:, 1].copy(), data[:, 2].copy(), data[:, 3].copy())


def emit_summary(rows: list[dict], path) -> None:
    if not rows:
        Path(path).write_text("")
        return
    cols = list(rows[0])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([r[c] if isinstance(r[c], str) else _num(r[c]) for c in cols])


def emit_svg(plots: Iterable[tuple[str, Trajectory]], path, title: Optional[str] = None,
             event_day: Optional[float] = None) -> None:
    """Two stacked panels: adult females A_v and participation H per control
    day, one line per (name, trajectory) pair."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    plots = list(plots)
    with matplotlib.rc_context({"svg.hashsalt": "vectorsim", "svg.fonttype": "none"}):
        fig, (ax_a, ax_h) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
        for name, traj in plots:
            ax_a.plot(traj.t, traj.A_v, label=name, lw=1.2)
            days, hs = traj.control_H()
            if len(days):
                ax_h.step(days, hs, where="post", label=name, lw=1.2)
        if event_day is not None and math.isfinite(event_day):
            for ax in (ax_a, ax_h):
                ax.axvline(event_day, color="grey", ls=":", lw=0.8)
        ax_a.set_ylabel("adult females A_v")
        ax_h.set_ylabel("participation H")
        ax_h.set_xlabel("day")
        ax_a.legend(loc="best", fontsize="small")
        if title:
            ax_a.set_title(title)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)

import json

import numpy as np
import pytest

from vectorsim.config import ConfigError
from vectorsim.dynamics import Trajectory, detect_periodic_orbit
from vectorsim.scenarios import (PRESET_GRIDS, PRESETS, config_from_dict, config_to_dict, load_config,
                                 preset_cells, preset_dict, report_recovery_time, run_pair, run_preset,
                                 summarize)

# frozen description of each preset's default cell
PRESET_TABLE = {
    "Baseline": dict(frozen_gamma=0.0, k_shift=None, r_K_shift=None, u_c=0.6, kappa_1=50.0),
    "S1": dict(frozen_gamma=None, k_shift=None, r_K_shift=None, u_c=0.6, kappa_1=50.0),
    "S2": dict(frozen_gamma=None, k_shift=9, r_K_shift=None, u_c=0.6, kappa_1=50.0),
    "S3": dict(frozen_gamma=None, k_shift=None, r_K_shift=0.06, u_c=0.6, kappa_1=50.0),
    "S4": dict(frozen_gamma=None, k_shift=6, r_K_shift=0.06, u_c=0.6, kappa_1=50.0),
}


def post_event_H(run, day=70.0):
    d1, h1 = run.traj.control_H(after=day)
    d0, h0 = run.counterfactual.control_H(after=day)
    assert np.array_equal(d1, d0) and len(d1) > 0
    return h1, h0


@pytest.mark.parametrize("name", PRESETS)
def test_preset_table(name):
    cfg = config_from_dict({"preset": name})
    row = PRESET_TABLE[name]
    (ev,) = cfg.schedule.external_events
    assert (ev.day, ev.extra_fraction, ev.shift.persistent_s_e) == (70.0, 0.5, True)
    assert cfg.frozen_gamma == row["frozen_gamma"]
    assert ev.shift.new_k_tol == row["k_shift"]
    assert ev.shift.new_r_K == row["r_K_shift"]
    assert (cfg.behavior.u_c, cfg.behavior.kappa_1) == (row["u_c"], row["kappa_1"])
    assert cfg.schedule.local.tau == 7.0 and cfg.schedule.horizon == 365.0
    assert cfg.label == name


def test_preset_cells_labels():
    assert [l for l, _ in preset_cells("S2")] == ["S2_k_shift-6", "S2_k_shift-9", "S2_k_shift-12"]
    labels = [l for l, _ in preset_cells("S1")]
    assert len(labels) == 9 and labels[0] == "S1_u_c-0.3_kappa_1-0"
    assert [l for l, _ in preset_cells("S4")] == ["S4"]
    with pytest.raises(ConfigError):
        preset_cells("S9")
    with pytest.raises(ConfigError):
        preset_dict("S2", tau=3)


def test_load_minimal(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"preset": "Baseline"}))
    cfg = load_config(p)
    assert cfg == config_from_dict({})


def test_load_rejects_off_grid_step(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"step": 0.3}))
    with pytest.raises(ConfigError) as exc:
        load_config(p)
    assert "tau" in exc.value.field


@pytest.mark.parametrize("raw,field", [
    ({"bogus": 1}, "bogus"),
    ({"behavior": {"kapa_1": 3}}, "behavior.kapa_1"),
    ({"schedule": {"external_events": [{"day": 70, "frac": 0.2}]}}, "schedule.external_events[0]"),
    ({"bio": {"rb": -1}}, "bio"),
    ({"schedule": {"external_events": [{"day": 400}]}}, "schedule.external_events[0].day"),
])
def test_config_errors_name_field(raw, field):
    with pytest.raises(ConfigError) as exc:
        config_from_dict(raw)
    assert exc.value.field == field


def test_bad_json(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{nope")
    with pytest.raises(ConfigError):
        load_config(p)


@pytest.mark.parametrize("name", PRESETS)
def test_dict_round_trip(name):
    cfg = config_from_dict({"preset": name})
    assert config_from_dict(config_to_dict(cfg)) == cfg


def test_counterfactual_differs_only_in_events():
    cfg = config_from_dict({"preset": "S4"})
    cf = cfg.without_external()
    assert cf.schedule.external_events == ()
    assert cf.schedule.local == cfg.schedule.local
    for f in ("bio", "capacity", "behavior", "efficacy", "frozen_gamma", "step", "L_0", "A_0"):
        assert getattr(cf, f) == getattr(cfg, f)


def test_runs_agree_before_event():
    run = run_pair(config_from_dict({"preset": "S2"}))
    pre = run.traj.t < 70.0
    assert np.array_equal(run.traj.A_v[pre], run.counterfactual.A_v[pre])


def test_s1_monotone_in_kappa():
    runs = {(c.config.behavior.u_c, c.config.behavior.kappa_1): c for c in run_preset("S1")}
    assert len(runs) == 9
    for uc in PRESET_GRIDS["S1"]["u_c"]:
        finals = [runs[(uc, k)].traj.impulses[-1].H for k in PRESET_GRIDS["S1"]["kappa_1"]]
        assert finals[0] < finals[1] < finals[2]
        # without a psychological effect the event leaves the event-day decision
        # unchanged, and later decisions relax back to the counterfactual ones
        r = runs[(uc, 0.0)]
        day = {i.t: i.H for i in r.traj.impulses}
        day_cf = {i.t: i.H for i in r.counterfactual.impulses}
        assert day[70.0] == day_cf[70.0]
        h1, h0 = post_event_H(r)
        assert h1[-1] == pytest.approx(h0[-1], rel=1e-4)


def test_s2_threat():
    run = run_pair(config_from_dict(preset_dict("S2", k_shift=6)))
    h1, h0 = post_event_H(run)
    assert np.all(h1 < h0)
    o1 = detect_periodic_orbit(run.traj, 7.0, 1e-4)
    o0 = detect_periodic_orbit(run.counterfactual, 7.0, 1e-4)
    assert o1.mean > o0.mean


def test_s3_environment_shift():
    run = run_pair(config_from_dict({"preset": "S3"}))
    h1, h0 = post_event_H(run)
    assert np.all(h1 >= h0)
    assert detect_periodic_orbit(run.traj, 7.0, 1e-4).mean > detect_periodic_orbit(run.counterfactual, 7.0, 1e-4).mean


def test_recovery_identical_is_zero():
    run = run_pair(config_from_dict({"preset": "S1"}))
    assert report_recovery_time(run.counterfactual, run.counterfactual, event_day=70.0) == 0.0


def test_recovery_baseline_finite():
    run = run_pair(config_from_dict({"preset": "Baseline"}))
    rec = report_recovery_time(run.traj, run.counterfactual)
    assert rec is not None and 0 < rec < 365 - 70
    # the dip is real
    i = int(np.searchsorted(run.traj.t, 80.0))
    assert run.traj.A_v[i] < 0.95 * run.counterfactual.A_v[i]


def test_recovery_never():
    t = np.arange(0.0, 100.0)
    a = Trajectory(t, t, np.full_like(t, 1000.0), t)
    b = Trajectory(t, t, np.full_like(t, 10.0), t)
    assert report_recovery_time(b, a, event_day=10.0) is None


def test_recovery_mismatched_grids():
    t = np.arange(0.0, 10.0)
    a = Trajectory(t, t, t, t)
    b = Trajectory(t[:-1], t[:-1], t[:-1], t[:-1])
    with pytest.raises(ValueError):
        report_recovery_time(a, b, event_day=1.0)


def test_summary_fields():
    row = summarize(run_pair(config_from_dict({"preset": "S3"})))
    assert row["label"] == "S3"
    assert row["orbit_mean"] > row["cf_orbit_mean"]
    assert row["orbit_min"] <= row["orbit_mean"] <= row["orbit_max"]
    assert 0 < row["final_H"] < 1

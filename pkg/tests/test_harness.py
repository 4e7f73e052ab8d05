import json
import random

import pytest

from hyperconn.errors import ScaleGuardError
from hyperconn.harness import (
    TOLERANCES, ConfigError, ExperimentConfig, aggregate, emit, load_config,
    run_experiment, run_hitting_times, run_quasi_disjoint, run_trials, to_csv, to_json,
)


def cfg(**kw):
    base = dict(kind="hitting-times", n=20, d=3, k=2, trials=6, master_seed=11)
    base.update(kw)
    return ExperimentConfig(**base)


def test_forced_hitting_cases():
    s = run_hitting_times(cfg(n=4, trials=5))
    assert s.estimates["equal"]["estimate"] == 0.0
    assert s.estimates["gap_distribution"] == {"1": 5}
    s = run_hitting_times(cfg(n=3, k=1, trials=3))
    assert s.estimates["equal"]["estimate"] == 1.0


def test_validation():
    with pytest.raises(ConfigError):
        cfg(trials=0).validate()
    with pytest.raises(ConfigError):
        cfg(kind="nope").validate()
    with pytest.raises(ConfigError):
        cfg(n=2, k=2).validate()
    with pytest.raises(ScaleGuardError):
        cfg(kind="property-q", n=501).validate()
    with pytest.raises(ConfigError):
        run_quasi_disjoint(cfg())
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kind": "hitting-times", "n": 5, "bogus": 1})


def test_deterministic_bytes(tmp_path):
    c = cfg(kind="threshold-sweep", n=60, trials=4, c_grid=[-1.0, 0.0, 1.0], include_gnp=True)
    a, b = run_experiment(c), run_experiment(c)
    assert to_csv(a) == to_csv(b) and to_json(a) == to_json(b)
    pa = emit(a, tmp_path / "a.csv")
    pb = emit(b, tmp_path / "b.csv")
    assert pa[0].read_bytes() == pb[0].read_bytes()
    assert (tmp_path / "a.estimate.dat").read_text() == (tmp_path / "b.estimate.dat").read_text()
    assert (tmp_path / "a.runtime.json").exists()


def test_order_independent_aggregation():
    c = cfg(kind="poisson-count", n=50, trials=12)
    recs = run_trials(c)
    shuffled = recs[:]
    random.Random(0).shuffle(shuffled)
    assert to_json(aggregate(c, recs)) == to_json(aggregate(c, shuffled))


def test_workers_match_serial():
    c = cfg(kind="property-q", n=30, trials=4)
    par = ExperimentConfig(**{**c.to_dict(), "workers": 2})
    assert to_csv(run_experiment(c)) == to_csv(run_experiment(par))


def test_csv_row_counts():
    s = run_experiment(cfg(trials=5))
    assert len(to_csv(s).strip().splitlines()) == 1 + 5
    s = run_experiment(cfg(kind="threshold-sweep", n=40, trials=3, c_grid=[0.0, 1.0]))
    assert len(to_csv(s).strip().splitlines()) == 1 + 2


def test_json_roundtrip(tmp_path):
    c = cfg(kind="quasi-disjoint", n=30, trials=2, omega=2.0)
    out = tmp_path / "q.json"
    emit(run_experiment(c), out, "json")
    assert load_config(out) == c
    data = json.loads(out.read_text())
    assert data["tolerances"] == TOLERANCES
    assert [t["streams"] for t in data["trials"]] == [[0], [1]]


def test_quasi_small_cases():
    s = run_experiment(cfg(kind="quasi-disjoint", n=10, k=1, trials=5))
    assert s.estimates["event"]["estimate"] == 1.0
    assert s.estimates["profiles_sum_to_n"]


def test_poisson_complete_regime():
    s = run_experiment(cfg(kind="poisson-count", n=5, k=1, c_grid=[50.0], trials=5))
    assert s.estimates["m"] == 10 and s.estimates["mean_X"] == 0.0


def test_sweep_monotone_and_intervals():
    c = cfg(kind="threshold-sweep", n=150, trials=40, c_grid=[-2.0, 0.0, 2.0])
    rows = run_experiment(c).rows
    for r in rows:
        assert r["p_k_connected_lo"] <= r["p_k_connected"] <= r["p_k_connected_hi"]
    for a, b in zip(rows, rows[1:]):
        width = a["p_k_connected_hi"] - a["p_k_connected_lo"]
        assert b["p_k_connected"] >= a["p_k_connected"] - 2 * width


def test_emit_bad_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        emit(run_experiment(cfg(trials=1)), blocker / "sub" / "out.csv")

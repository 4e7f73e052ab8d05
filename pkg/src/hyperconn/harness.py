"""Experiment orchestration: configs, trials, aggregation, output.

Every trial draws its randomness from ``Seed(master_seed, stream)`` where
``stream`` is a documented function of the trial index, so a summary is a
pure function of the configuration.  Records are sorted by trial index
before aggregation; completion order never reaches the output.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import analytics
from .connectivity import check_property_Q, is_k_connected
from .errors import ScaleGuardError
from .hypergraph import Hypergraph
from .random_models import Seed, sample_gnm, sample_gnp, stopping_times
from .structure import has_quasi_disjoint, quasi_profile

KINDS = ("hitting-times", "threshold-sweep", "poisson-count", "quasi-disjoint", "property-q")

DEFAULT_MAX_N = {
    "hitting-times": 10_000,
    "threshold-sweep": 10_000,
    "poisson-count": 10_000,
    "quasi-disjoint": 10_000,
    "property-q": 500,
}

# finite-n tolerances for the statistical checks; the limits themselves
# only say "tends to", so these are choices of this package
TOLERANCES = {
    "equality_fraction_min": 0.9,
    "prob_gap_max": 0.02,
    "flank_low_min": 0.97,
    "flank_high_max": 0.03,
    "tv_max": 0.05,
    "mean_z_max": 3.0,
    "window_fraction_min": 0.85,
    "min_degree_fraction_min": 0.95,
    "m1_zero_fraction_min": 0.95,
    "quasi_event_fraction_min": 0.9,
}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    kind: str
    n: int
    d: int = 3
    k: int = 2
    c_grid: list = field(default_factory=lambda: [0.0])
    omega: float = 3.0
    trials: int = 100
    master_seed: int = 0
    include_gnp: bool = False
    max_n: int | None = None
    workers: int = 1

    def validate(self) -> "ExperimentConfig":
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.d < 2:
            raise ConfigError(f"d must be >= 2, got {self.d}")
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.n <= self.k or self.n < self.d:
            raise ConfigError(f"need n > k and n >= d, got n={self.n}, d={self.d}, k={self.k}")
        if self.kind != "hitting-times" and self.n < 3:
            raise ConfigError("threshold formulas need n >= 3")
        if not self.c_grid:
            raise ConfigError("c_grid must not be empty")
        if self.omega <= 0:
            raise ConfigError(f"omega must be positive, got {self.omega}")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in 64 bits")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        limit = self.max_n if self.max_n is not None else DEFAULT_MAX_N[self.kind]
        if self.n > limit:
            raise ScaleGuardError(f"{self.kind} limited to n <= {limit}, got n={self.n}")
        return self

    def to_dict(self) -> dict:
        out = asdict(self)
        out["c_grid"] = [float(c) for c in self.c_grid]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if "config" in data and isinstance(data["config"], dict):
            data = data["config"]
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        if "kind" not in data or "n" not in data:
            raise ConfigError("config needs at least 'kind' and 'n'")
        try:
            cfg = cls(**data)
            cfg.n, cfg.d, cfg.k = int(cfg.n), int(cfg.d), int(cfg.k)
            cfg.trials, cfg.master_seed = int(cfg.trials), int(cfg.master_seed)
            cfg.c_grid = [float(c) for c in cfg.c_grid]
            cfg.omega = float(cfg.omega)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad config value: {exc}") from None
        return cfg


def load_config(path) -> ExperimentConfig:
    """Read a config file, or the config echoed inside a summary JSON."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    return ExperimentConfig.from_dict(data)


@dataclass
class TrialRecord:
    trial_index: int
    streams: list
    observables: dict


@dataclass
class ExperimentSummary:
    config: ExperimentConfig
    rows: list
    trials: list
    estimates: dict
    runtime: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "seeding": "numpy PCG64 over SeedSequence(master_seed, spawn_key=(stream,))",
            "tolerances": TOLERANCES,
            "estimates": self.estimates,
            "rows": self.rows,
            "trials": [asdict(t) for t in self.trials],
        }


# --------------------------------------------------------------------------
# per-trial work (module level so process pools can pickle it)

def _count_degree(H: Hypergraph, j: int) -> int:
    return sum(1 for es in H.incidence.values() if len(es) == j)


def _hitting_trial(cfg: ExperimentConfig, t: int) -> TrialRecord:
    k = cfg.k
    trace = stopping_times(cfg.n, cfg.d, k, Seed(cfg.master_seed, t))
    obs = {}
    for j in range(1, k + 1):
        obs[f"tau_{j}"] = trace.tau(j)
        obs[f"T_{j}"] = trace.T(j)
    obs["equal"] = trace.tau(k) == trace.T(k)
    obs["gap"] = trace.T(k) - trace.tau(k)
    H = trace.hypergraph_at(trace.tau(k))
    obs["quasi_ok"] = all(has_quasi_disjoint(H, v, k) for v in H.sorted_vertices())
    return TrialRecord(t, [t], obs)


def _connectivity_flags(H: Hypergraph, k: int) -> dict:
    conn_k = is_k_connected(H, k)
    if k == 1:
        conn_lo = True  # 0-connectivity is vacuous
    else:
        conn_lo = True if conn_k else is_k_connected(H, k - 1)
    conn_hi = is_k_connected(H, k + 1) if conn_k else False
    return {"conn_k_minus_1": conn_lo, "conn_k": conn_k, "conn_k_plus_1": conn_hi}


def _sweep_trial(cfg: ExperimentConfig, t: int) -> TrialRecord:
    # stream layout: grid point g, trial i -> g*trials + i (gnm) and
    # (len(grid) + g)*trials + i (gnp)
    g, i = divmod(t, cfg.trials)
    c = cfg.c_grid[g]
    th = analytics.thresholds(cfg.n, cfg.d, cfg.k, c, cfg.omega)
    H = sample_gnm(cfg.n, cfg.d, th.m_at_c, Seed(cfg.master_seed, t))
    obs = {"grid": g, "c": c, "m": th.m_at_c, "min_degree": H.min_degree()}
    obs["min_degree_ge_k"] = obs["min_degree"] >= cfg.k
    obs.update(_connectivity_flags(H, cfg.k))
    obs["X"] = _count_degree(H, cfg.k - 1)
    streams = [t]
    if cfg.include_gnp:
        s2 = (len(cfg.c_grid) + g) * cfg.trials + i
        Hp = sample_gnp(cfg.n, cfg.d, th.p_at_c, Seed(cfg.master_seed, s2))
        obs["gnp_edges"] = Hp.m
        obs["gnp_conn_k"] = is_k_connected(Hp, cfg.k)
        streams.append(s2)
    return TrialRecord(t, streams, obs)


def _poisson_trial(cfg: ExperimentConfig, t: int) -> TrialRecord:
    # streams 3t, 3t+1, 3t+2 for the samples at m(c), m0 and m1
    th = analytics.thresholds(cfg.n, cfg.d, cfg.k, cfg.c_grid[0], cfg.omega)
    j = cfg.k - 1
    H = sample_gnm(cfg.n, cfg.d, th.m_at_c, Seed(cfg.master_seed, 3 * t))
    H0 = sample_gnm(cfg.n, cfg.d, th.m0, Seed(cfg.master_seed, 3 * t + 1))
    H1 = sample_gnm(cfg.n, cfg.d, th.m1, Seed(cfg.master_seed, 3 * t + 2))
    obs = {
        "X": _count_degree(H, j),
        "X_m0": _count_degree(H0, j),
        "min_degree_m0": H0.min_degree(),
        "X_m1": _count_degree(H1, j),
    }
    return TrialRecord(t, [3 * t, 3 * t + 1, 3 * t + 2], obs)


def _quasi_trial(cfg: ExperimentConfig, t: int) -> TrialRecord:
    th = analytics.thresholds(cfg.n, cfg.d, cfg.k, 0.0, cfg.omega)
    H = sample_gnm(cfg.n, cfg.d, th.m0, Seed(cfg.master_seed, t))
    prof = quasi_profile(H)
    k = cfg.k
    high_ok = all(j >= k for (j, l), cnt in prof.counts.items() if j + l >= k)
    obs = {
        "m": th.m0,
        "profile_total": prof.total(),
        "low_mass": prof.low_quasi_mass(k),
        "event": prof.low_quasi_mass(k) == 0,
        "high_degree_ok": high_ok,
        "profile": ";".join(f"{j}:{l}:{c}" for (j, l), c in prof.counts.items()),
    }
    return TrialRecord(t, [t], obs)


def _property_q_trial(cfg: ExperimentConfig, t: int) -> TrialRecord:
    th = analytics.thresholds(cfg.n, cfg.d, cfg.k, 0.0, cfg.omega)
    m = th.m0_prime if th.m0_prime is not None else th.m0
    H = sample_gnm(cfg.n, cfg.d, m, Seed(cfg.master_seed, t))
    return TrialRecord(t, [t], {"m": m, "property_q": check_property_Q(H, cfg.k)})


_TRIAL_FN = {
    "hitting-times": _hitting_trial,
    "threshold-sweep": _sweep_trial,
    "poisson-count": _poisson_trial,
    "quasi-disjoint": _quasi_trial,
    "property-q": _property_q_trial,
}


def _trial_count(cfg: ExperimentConfig) -> int:
    if cfg.kind == "threshold-sweep":
        return cfg.trials * len(cfg.c_grid)
    return cfg.trials


def _run_one(args):
    cfg, t = args
    return _TRIAL_FN[cfg.kind](cfg, t)


def run_trials(cfg: ExperimentConfig) -> list[TrialRecord]:
    cfg.validate()
    jobs = [(cfg, t) for t in range(_trial_count(cfg))]
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_one, jobs, chunksize=4))
    else:
        records = [_run_one(job) for job in jobs]
    return records


# --------------------------------------------------------------------------
# aggregation

def _proportion(records, key) -> dict:
    hits = sum(1 for r in records if r.observables[key])
    total = len(records)
    lo, hi = analytics.wilson_interval(hits, total)
    return {"estimate": hits / total, "ci_low": lo, "ci_high": hi, "count": hits, "trials": total}


def _aggregate_hitting(cfg, records):
    gaps = Counter(r.observables["gap"] for r in records)
    est = {
        "equal": _proportion(records, "equal"),
        "quasi_ok": _proportion(records, "quasi_ok"),
        "gap_distribution": {str(g): c for g, c in sorted(gaps.items())},
        "mean_tau_k": float(np.mean([r.observables[f"tau_{cfg.k}"] for r in records])),
        "mean_T_k": float(np.mean([r.observables[f"T_{cfg.k}"] for r in records])),
    }
    return [], est


def _aggregate_sweep(cfg, records):
    rows = []
    for g, c in enumerate(cfg.c_grid):
        recs = [r for r in records if r.observables["grid"] == g]
        th = analytics.thresholds(cfg.n, cfg.d, cfg.k, c, cfg.omega)
        pk = _proportion(recs, "conn_k")
        pm = _proportion(recs, "min_degree_ge_k")
        lo = _proportion(recs, "conn_k_minus_1")
        hi = _proportion(recs, "conn_k_plus_1")
        lam_exact = analytics.exact_expected_deg_count(cfg.n, cfg.d, th.m_at_c, cfg.k)
        row = {
            "c": float(c),
            "m": th.m_at_c,
            "p": th.p_at_c,
            "trials": len(recs),
            "p_k_connected": pk["estimate"],
            "p_k_connected_lo": pk["ci_low"],
            "p_k_connected_hi": pk["ci_high"],
            "p_min_degree_ge_k": pm["estimate"],
            "p_min_degree_lo": pm["ci_low"],
            "p_min_degree_hi": pm["ci_high"],
            "p_k_minus_1_connected": lo["estimate"],
            "p_k_plus_1_connected": hi["estimate"],
            "gap_k_conn_vs_min_degree": abs(pk["estimate"] - pm["estimate"]),
            "limit": analytics.limit_prob_k_connected(c, cfg.k),
            "poissonized_limit": math.exp(-lam_exact),
            "exact_mean_X": lam_exact,
        }
        if cfg.include_gnp:
            pg = _proportion(recs, "gnp_conn_k")
            row["gnp_p_k_connected"] = pg["estimate"]
            row["gnp_mean_edges"] = float(np.mean([r.observables["gnp_edges"] for r in recs]))
        rows.append(row)
    return rows, {"grid_points": len(rows)}


def _aggregate_poisson(cfg, records):
    c = cfg.c_grid[0]
    th = analytics.thresholds(cfg.n, cfg.d, cfg.k, c, cfg.omega)
    X = np.array([r.observables["X"] for r in records])
    lam_exact = analytics.exact_expected_deg_count(cfg.n, cfg.d, th.m_at_c, cfg.k)
    lam_limit = analytics.poisson_limit_lambda(c, cfg.k)
    se = float(X.std(ddof=1) / math.sqrt(len(X))) if len(X) > 1 else float("nan")
    scale = math.exp(cfg.omega) / math.factorial(cfg.k - 1)
    win_lo, win_hi = 0.5 * scale, 1.5 * scale
    in_window = [win_lo <= r.observables["X_m0"] <= win_hi for r in records]
    mind_ok = [r.observables["min_degree_m0"] == cfg.k - 1 for r in records]
    zero_m1 = [r.observables["X_m1"] == 0 for r in records]

    def frac(flags):
        h = sum(flags)
        lo, hi = analytics.wilson_interval(h, len(flags))
        return {"estimate": h / len(flags), "ci_low": lo, "ci_high": hi}

    est = {
        "m": th.m_at_c,
        "mean_X": float(X.mean()),
        "se_X": se,
        "exact_mean_X": lam_exact,
        "mean_z": abs(float(X.mean()) - lam_exact) / se if se and se > 0 else 0.0,
        "limit_lambda": lam_limit,
        "tv_exact": analytics.tv_to_poisson(X, lam_exact),
        "tv_limit": analytics.tv_to_poisson(X, lam_limit),
        "m0": th.m0,
        "m1": th.m1,
        "window": [win_lo, win_hi],
        "window_fraction": frac(in_window),
        "min_degree_fraction": frac(mind_ok),
        "m1_zero_fraction": frac(zero_m1),
        "histogram": {str(x): int(cnt) for x, cnt in sorted(Counter(X.tolist()).items())},
    }
    return [], est


def _aggregate_quasi(cfg, records):
    return [], {
        "event": _proportion(records, "event"),
        "high_degree_ok": _proportion(records, "high_degree_ok"),
        "profiles_sum_to_n": all(r.observables["profile_total"] == cfg.n for r in records),
    }


def _aggregate_property_q(cfg, records):
    return [], {"property_q": _proportion(records, "property_q")}


_AGGREGATE = {
    "hitting-times": _aggregate_hitting,
    "threshold-sweep": _aggregate_sweep,
    "poisson-count": _aggregate_poisson,
    "quasi-disjoint": _aggregate_quasi,
    "property-q": _aggregate_property_q,
}


def aggregate(cfg: ExperimentConfig, records) -> ExperimentSummary:
    records = sorted(records, key=lambda r: r.trial_index)
    rows, est = _AGGREGATE[cfg.kind](cfg, records)
    return ExperimentSummary(cfg, rows, records, est)


def run_experiment(cfg: ExperimentConfig) -> ExperimentSummary:
    start = time.perf_counter()
    records = run_trials(cfg)
    summary = aggregate(cfg, records)
    summary.runtime = {"seconds": time.perf_counter() - start, "trials": len(records)}
    return summary


def run_hitting_times(cfg):
    return run_experiment(_with_kind(cfg, "hitting-times"))


def run_threshold_sweep(cfg):
    return run_experiment(_with_kind(cfg, "threshold-sweep"))


def run_poisson_count(cfg):
    return run_experiment(_with_kind(cfg, "poisson-count"))


def run_quasi_disjoint(cfg):
    return run_experiment(_with_kind(cfg, "quasi-disjoint"))


def run_property_q(cfg):
    return run_experiment(_with_kind(cfg, "property-q"))


def _with_kind(cfg: ExperimentConfig, kind: str) -> ExperimentConfig:
    if cfg.kind != kind:
        raise ConfigError(f"expected a {kind} config, got {cfg.kind}")
    return cfg


# --------------------------------------------------------------------------
# output

def _csv_value(v):
    if isinstance(v, bool):
        return int(v)
    if isinstance(v, float):
        return repr(v)
    return v


def trial_columns(summary: ExperimentSummary) -> list[str]:
    """Per-trial CSV columns: trial_index, streams, then observables in
    the order the trial function records them."""
    if not summary.trials:
        return ["trial_index", "streams"]
    return ["trial_index", "streams", *summary.trials[0].observables]


def to_csv(summary: ExperimentSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if summary.rows:
        cols = list(summary.rows[0])
        writer.writerow(cols)
        for row in summary.rows:
            writer.writerow([_csv_value(row[c]) for c in cols])
    else:
        cols = trial_columns(summary)
        writer.writerow(cols)
        for rec in summary.trials:
            vals = [rec.trial_index, " ".join(map(str, rec.streams))]
            vals += [_csv_value(rec.observables[c]) for c in cols[2:]]
            writer.writerow(vals)
    return buf.getvalue()


def to_json(summary: ExperimentSummary) -> str:
    return json.dumps(summary.to_dict(), indent=2, sort_keys=True) + "\n"


def emit(summary: ExperimentSummary, out, fmt: str = "csv") -> list[Path]:
    """Write the summary; returns the written paths.

    ``csv`` writes one row per grid point (sweep) or per trial (all other
    kinds); ``json`` writes the nested summary with the config echo.  A
    sweep also gets two-column ``.estimate.dat`` and ``.limit.dat`` files.
    Wall-clock timings go to a separate ``.runtime.json`` so the main
    outputs stay byte-identical across reruns.
    """
    if fmt not in ("csv", "json"):
        raise ConfigError(f"unknown format {fmt!r}")
    out = Path(out)
    written = []
    try:
        if out.parent and not out.parent.exists():
            out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(to_csv(summary) if fmt == "csv" else to_json(summary), encoding="utf-8")
        written.append(out)
        if summary.rows:
            est = out.with_suffix(".estimate.dat")
            lim = out.with_suffix(".limit.dat")
            est.write_text("".join(f"{r['c']!r} {r['p_k_connected']!r}\n" for r in summary.rows))
            lim.write_text("".join(f"{r['c']!r} {r['limit']!r}\n" for r in summary.rows))
            written += [est, lim]
        if summary.runtime:
            rt = out.with_suffix(".runtime.json")
            rt.write_text(json.dumps(summary.runtime, indent=2, sort_keys=True) + "\n")
            written.append(rt)
    except OSError as exc:
        raise OSError(f"cannot write results to {out}: {exc}") from exc
    return written

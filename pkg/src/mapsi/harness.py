"""Experiment orchestration: Monte Carlo sweeps, scheme dispatch, persistence.

A trial draws one channel realization shared by every scheme so comparisons
are paired.  The multicast-requirement grid is built per trial from the fixed
array's multicast capacity (plus any user-requested absolute points, which may
land beyond a scheme's capacity and are then recorded infeasible).  The
movable-antenna scheme chains searches from high requirements down, so its
recorded rates are nonincreasing in the requirement by construction.

All outputs are deterministic functions of (config, seed) regardless of the
thread count: trials use counter-derived random substreams and records are
canonically sorted before writing.
"""

from __future__ import annotations

import csv
import hashlib
import json
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from . import inner, outer, rates
from .channel import ScenarioParams, element_response, sample_channel

log = logging.getLogger("mapsi.harness")

SCHEMES = ("ma", "fpa", "ts", "pso", "single-ma")

CSV_COLUMNS = ["scheme", "trial", "seed", "N", "M", "A_over_lambda",
               "r_ms_bits", "Rc_bits", "R0_bits", "status", "elapsed_ms",
               "apv_json"]


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    carrier_freq: float = 5e9
    tx_power_dbm: float = 41.0
    noise_dbm: float = -80.0
    link_distance: float = 70.0
    num_paths: int = 7
    pathloss_exponent: float = 2.8
    n_antennas: int = 4
    grid_points: int = 10
    region_wavelengths: float = 8.0
    min_spacing_wavelengths: float = 0.5
    r_ms_points: int = 12
    r_ms_grid: list = field(default_factory=list)
    trials: int = 100
    seed: int = 0
    schemes: list = field(default_factory=lambda: ["ma", "fpa", "ts"])
    threads: int = 1
    max_rounds: int = 5
    solver_tol: float = 1e-8
    record_timings: bool = False
    pso_particles: int = 20
    pso_iterations: int = 50
    pso_inertia: float = 0.7
    pso_cognitive: float = 1.5
    pso_social: float = 1.5
    pso_penalty: float = 1e3

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.n_antennas < 1 or self.grid_points < 1 or self.trials < 1:
            raise ConfigError("antennas, grid points and trials must be >= 1")
        if self.region_wavelengths <= 0 or self.min_spacing_wavelengths < 0:
            raise ConfigError("region size must be positive, spacing nonnegative")
        if self.r_ms_points < 1:
            raise ConfigError("need at least one requirement point")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad:
            raise ConfigError(f"unknown schemes {bad}; valid: {SCHEMES}")
        if any(r < 0 for r in self.r_ms_grid):
            raise ConfigError("requirement grid values must be nonnegative")
        if self.threads < 1 or self.max_rounds < 1:
            raise ConfigError("threads and max_rounds must be >= 1")

    def scenario(self) -> ScenarioParams:
        return ScenarioParams(
            carrier_freq=self.carrier_freq, tx_power_dbm=self.tx_power_dbm,
            noise_dbm=self.noise_dbm, num_paths=self.num_paths,
            pathloss_exponent=self.pathloss_exponent,
            link_distance=self.link_distance)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a flat JSON object")
        return cls.from_dict(data)

    def content_hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class TrialRecord:
    scheme: str
    trial: int
    seed: int
    n_antennas: int
    grid_points: int
    region_wavelengths: float
    r_ms: float
    rc: float | None
    r0: float | None
    status: str
    apv: np.ndarray | None
    elapsed_ms: float | None = None


@dataclass
class RegionCurvePoint:
    r_ms_mean: float
    rc_mean: float
    rc_std: float
    feasible_fraction: float
    n_feasible: int


@dataclass
class RegionCurve:
    scheme: str
    n_antennas: int
    grid_points: int
    region_wavelengths: float
    points: list


def _trial_rng(seed: int, trial: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed,
                                                        spawn_key=(tag, trial)))


def _requirement_grid(cfg: ExperimentConfig, cap: float) -> np.ndarray:
    rel = np.linspace(0.0, 0.98 * cap, cfg.r_ms_points)
    grid = np.concatenate([rel, np.asarray(cfg.r_ms_grid, dtype=float)])
    return np.unique(grid)


def _achieved_common_rate(h1, h2, sol: inner.InnerSolution, noise: float) -> float | None:
    if sol.status != inner.OPTIMAL or sol.w0 is None:
        return None
    return rates.multicast_rate(h1, h2, sol.w0, sol.wc, noise)


def _closed_form_search(e1, e2, n_ant, grid, d_min, initial, objective_fn,
                        max_rounds):
    """Coordinate ascent over grid placements for a cheap per-Gram objective.

    Same movement rules as the SDP-backed search; used for the time-sharing
    slots whose per-placement optima have closed forms.
    """
    idx = np.array([grid.index_of(p) for p in initial])
    h1 = e1[idx].copy()
    h2 = e2[idx].copy()
    g11 = float(np.vdot(h1, h1).real)
    g22 = float(np.vdot(h2, h2).real)
    g12 = complex(np.vdot(h1, h2))
    cur = float(objective_fn(np.array([g11]), np.array([g22]),
                             np.array([g12]))[0])
    for _ in range(max_rounds):
        start = cur
        for n in range(n_ant):
            mask = outer.feasible_mask(grid, grid.points[idx], n, d_min)
            mask[idx[n]] = False
            cand = np.flatnonzero(mask)
            if cand.size == 0:
                continue
            c11 = g11 - np.abs(h1[n]) ** 2 + np.abs(e1[cand]) ** 2
            c22 = g22 - np.abs(h2[n]) ** 2 + np.abs(e2[cand]) ** 2
            c12 = g12 - np.conj(h1[n]) * h2[n] + np.conj(e1[cand]) * e2[cand]
            vals = objective_fn(c11, c22, c12)
            best = int(np.argmax(vals))
            if vals[best] > cur:
                q = int(cand[best])
                g11, g22, g12 = float(c11[best]), float(c22[best]), complex(c12[best])
                idx[n] = q
                h1[n] = e1[q]
                h2[n] = e2[q]
                cur = float(vals[best])
        if cur - start < 1e-12:
            break
    return grid.points[idx], cur


class _TrialContext:
    """Per-trial precomputation shared by all schemes."""

    def __init__(self, cfg: ExperimentConfig, trial: int, r_grid=None):
        self.cfg = cfg
        self.trial = trial
        par = cfg.scenario()
        self.par = par
        self.channel = sample_channel(par, cfg.seed, trial)
        self.lam = par.wavelength
        self.region = cfg.region_wavelengths * self.lam
        self.d_min = cfg.min_spacing_wavelengths * self.lam
        self.power = par.tx_power_watts
        self.noise = par.noise_watts
        self.grid = outer.build_grid(self.region, cfg.grid_points)
        self.fpa = outer.fpa_apv(cfg.n_antennas, self.lam, self.region)
        self.h1_fpa, self.h2_fpa = self.channel.vectors(self.fpa)
        _, self.fpa_capacity = rates.multicast_only_optimal(
            self.h1_fpa, self.h2_fpa, self.power, self.noise)
        self.r_grid = (_requirement_grid(cfg, self.fpa_capacity)
                       if r_grid is None else np.asarray(r_grid, dtype=float))

    def record(self, scheme, r, rc, r0, status, apv, elapsed):
        cfg = self.cfg
        return TrialRecord(
            scheme=scheme, trial=self.trial, seed=cfg.seed,
            n_antennas=cfg.n_antennas, grid_points=cfg.grid_points,
            region_wavelengths=cfg.region_wavelengths, r_ms=float(r),
            rc=rc, r0=r0, status=status,
            apv=None if apv is None else np.asarray(apv, dtype=float),
            elapsed_ms=elapsed if cfg.record_timings else None)


def _run_fpa(ctx: _TrialContext):
    out = []
    for r in ctx.r_grid:
        t0 = time.perf_counter()
        sol = inner.solve_inner(inner.InnerProblem(
            ctx.h1_fpa, ctx.h2_fpa, ctx.power, float(r), ctx.noise),
            tol=ctx.cfg.solver_tol)
        ms = (time.perf_counter() - t0) * 1e3
        if sol.status == inner.OPTIMAL:
            r0 = _achieved_common_rate(ctx.h1_fpa, ctx.h2_fpa, sol, ctx.noise)
            out.append(ctx.record("fpa", r, sol.secrecy_rate_bits, r0,
                                  sol.status, ctx.fpa, ms))
        else:
            out.append(ctx.record("fpa", r, None, None, sol.status, ctx.fpa, ms))
    return out


def _run_ma(ctx: _TrialContext, warm_start: dict | None = None):
    """Movable-antenna scheme: searches chained from the top requirement down.

    ``warm_start`` optionally maps requirement index -> APV carried over from
    a coarser grid of the same region (sweep chaining); candidate starts are
    compared through the inner objective and the best one seeds the search.
    """
    cfg = ctx.cfg
    out = []
    finals: dict[int, np.ndarray] = {}
    rng = _trial_rng(cfg.seed, ctx.trial, tag=1)
    default_init = outer.initial_apv(ctx.grid, cfg.n_antennas, ctx.d_min, rng)
    # when the fixed array happens to sit on grid points, searching from it
    # guarantees the movable result dominates the fixed one per trial
    fpa_init: np.ndarray | None = None
    try:
        fpa_init = ctx.grid.points[[ctx.grid.index_of(p) for p in ctx.fpa]]
    except outer.ConfigurationError:
        pass
    chain: np.ndarray | None = None
    for i in range(len(ctx.r_grid) - 1, -1, -1):
        r = float(ctx.r_grid[i])
        t0 = time.perf_counter()
        # warm starts: requirement chain and (in sweeps) the coarser-grid
        # result; searching from every warm start keeps the recorded rate
        # monotone both along the requirement grid and across nested grids
        warm: list[np.ndarray] = []

        def add_start(apv):
            if apv is not None and not any(np.array_equal(apv, w) for w in warm):
                warm.append(apv)

        add_start(chain)
        add_start(fpa_init)
        if warm_start and i in warm_start:
            cand = warm_start[i]
            try:
                add_start(ctx.grid.points[[ctx.grid.index_of(p) for p in cand]])
            except outer.ConfigurationError:
                pass
        best_state = None
        for init in warm:
            st = outer.sequential_search(
                ctx.channel, ctx.grid, ctx.power, r, init, ctx.d_min,
                max_rounds=cfg.max_rounds, solver_tol=cfg.solver_tol)
            if st.status == inner.OPTIMAL and (
                    best_state is None or st.objective_bits > best_state.objective_bits):
                best_state = st
        if best_state is None:
            st = outer.sequential_search(
                ctx.channel, ctx.grid, ctx.power, r, default_init, ctx.d_min,
                max_rounds=cfg.max_rounds, solver_tol=cfg.solver_tol)
            if st.status == inner.OPTIMAL:
                best_state = st
        ms = (time.perf_counter() - t0) * 1e3
        if best_state is None:
            out.append(ctx.record("ma", r, None, None, inner.INFEASIBLE, None, ms))
            continue
        chain = best_state.apv
        finals[i] = best_state.apv
        sol = best_state.solution
        h1, h2 = ctx.channel.vectors(best_state.apv)
        r0 = _achieved_common_rate(h1, h2, sol, ctx.noise)
        out.append(ctx.record("ma", r, sol.secrecy_rate_bits, r0, sol.status,
                              best_state.apv, ms))
    out.reverse()
    return out, finals


def _run_ts(ctx: _TrialContext):
    """Two-slot baseline with per-slot placement optimization.

    The secrecy slot maximizes the confidential-only rate (a generalized
    eigenvalue per placement); the multicast slot maximizes the worst-user
    common rate.  Each slot carries the full power budget and its own
    placement; the slot fraction then traces a straight-line region.
    """
    cfg = ctx.cfg
    e1 = element_response(ctx.grid.points, ctx.channel.user1, ctx.lam)
    e2 = element_response(ctx.grid.points, ctx.channel.user2, ctx.lam)
    rng = _trial_rng(cfg.seed, ctx.trial, tag=2)
    init = outer.initial_apv(ctx.grid, cfg.n_antennas, ctx.d_min, rng)
    t0 = time.perf_counter()

    def sec_obj(g11, g22, g12):
        return inner.secrecy_objective_upper_bound(
            g11, g22, g12, ctx.power, ctx.noise)

    apv_c, lam_max = _closed_form_search(
        e1, e2, cfg.n_antennas, ctx.grid, ctx.d_min, init, sec_obj,
        cfg.max_rounds)
    rc_slot = float(np.log2(lam_max))

    def mc_obj(g11, g22, g12):
        st, rate, _ = inner.multicast_capacity_gram_batch(
            g11, g22, g12, ctx.power, ctx.noise)
        return np.where(st == inner.OPTIMAL, rate, -np.inf)

    apv_0, r0_slot = _closed_form_search(
        e1, e2, cfg.n_antennas, ctx.grid, ctx.d_min, init, mc_obj,
        cfg.max_rounds)
    slot_ms = (time.perf_counter() - t0) * 1e3

    out = []
    for k, r in enumerate(ctx.r_grid):
        ms = slot_ms if k == 0 else 0.0   # slot searches are shared work
        if r > r0_slot or r0_slot <= 0:
            out.append(ctx.record("ts", r, None, None, inner.INFEASIBLE, apv_0, ms))
        else:
            alpha = 1.0 - float(r) / r0_slot
            rc = max(alpha * rc_slot, 0.0)
            out.append(ctx.record("ts", r, rc, float(r), inner.OPTIMAL, apv_c, ms))
    return out


def _run_pso(ctx: _TrialContext):
    cfg = ctx.cfg
    params = outer.PsoParams(
        particles=cfg.pso_particles, iterations=cfg.pso_iterations,
        inertia=cfg.pso_inertia, cognitive=cfg.pso_cognitive,
        social=cfg.pso_social, penalty=cfg.pso_penalty)
    out = []
    for k, r in enumerate(ctx.r_grid):
        rng = _trial_rng(cfg.seed, ctx.trial, tag=3000 + k)
        t0 = time.perf_counter()
        res = outer.pso_baseline(ctx.channel, cfg.n_antennas, ctx.power,
                                 float(r), ctx.region, ctx.d_min, params, rng)
        ms = (time.perf_counter() - t0) * 1e3
        if res.feasible and np.isfinite(res.objective_bits):
            h1, h2 = ctx.channel.vectors(res.apv)
            sol = inner.solve_inner(inner.InnerProblem(
                h1, h2, ctx.power, float(r), ctx.noise), tol=cfg.solver_tol)
            r0 = _achieved_common_rate(h1, h2, sol, ctx.noise)
            out.append(ctx.record("pso", r, sol.secrecy_rate_bits, r0,
                                  sol.status, res.apv, ms))
        else:
            out.append(ctx.record("pso", r, None, None, inner.INFEASIBLE,
                                  res.apv, ms))
    return out


def _run_single_ma(ctx: _TrialContext):
    """Single-antenna scheme: exhaustive position search per requirement."""
    out = []
    for r in ctx.r_grid:
        t0 = time.perf_counter()
        try:
            pos, rc = rates.single_ma_position_search(
                ctx.channel, ctx.grid.points, ctx.power, float(r))
            ms = (time.perf_counter() - t0) * 1e3
            out.append(ctx.record("single-ma", r, rc, float(r), inner.OPTIMAL,
                                  pos[None, :], ms))
        except rates.InfeasibleRequirementError:
            ms = (time.perf_counter() - t0) * 1e3
            out.append(ctx.record("single-ma", r, None, None,
                                  inner.INFEASIBLE, None, ms))
    return out


_RUNNERS = {"fpa": _run_fpa, "ts": _run_ts, "pso": _run_pso,
            "single-ma": _run_single_ma}


def run_trial(cfg: ExperimentConfig, trial: int, r_grid=None,
              warm_start: dict | None = None):
    """All schemes on one shared channel realization; returns (records, ma_apvs)."""
    ctx = _TrialContext(cfg, trial, r_grid=r_grid)
    records = []
    finals: dict[int, np.ndarray] = {}
    for scheme in cfg.schemes:
        if scheme == "ma":
            recs, finals = _run_ma(ctx, warm_start)
            records.extend(recs)
        else:
            records.extend(_RUNNERS[scheme](ctx))
    return records, finals


def _sort_records(records: list) -> list:
    return sorted(records, key=lambda r: (r.scheme, r.trial, r.r_ms))


def aggregate_curves(records: list) -> list:
    """Group records by scheme and per-trial requirement rank, then average."""
    by_scheme: dict[str, dict[int, list]] = {}
    meta: dict[str, TrialRecord] = {}
    for rec in records:
        meta.setdefault(rec.scheme, rec)
        trials = by_scheme.setdefault(rec.scheme, {})
        trials.setdefault(rec.trial, []).append(rec)
    curves = []
    for scheme in sorted(by_scheme):
        trials = by_scheme[scheme]
        ranked: dict[int, list] = {}
        for tr, recs in trials.items():
            for rank, rec in enumerate(sorted(recs, key=lambda r: r.r_ms)):
                ranked.setdefault(rank, []).append(rec)
        points = []
        for rank in sorted(ranked):
            recs = ranked[rank]
            feas = [r for r in recs if r.status == inner.OPTIMAL and r.rc is not None]
            rcs = np.array([r.rc for r in feas]) if feas else np.array([])
            points.append(RegionCurvePoint(
                r_ms_mean=float(np.mean([r.r_ms for r in recs])),
                rc_mean=float(rcs.mean()) if rcs.size else float("nan"),
                rc_std=float(rcs.std()) if rcs.size else float("nan"),
                feasible_fraction=len(feas) / len(recs),
                n_feasible=len(feas)))
        m = meta[scheme]
        curves.append(RegionCurve(scheme=scheme, n_antennas=m.n_antennas,
                                  grid_points=m.grid_points,
                                  region_wavelengths=m.region_wavelengths,
                                  points=points))
    return curves


def run_region_sweep(cfg: ExperimentConfig):
    """Monte Carlo rate-region sweep; returns (curves, records)."""
    t0 = time.perf_counter()

    def task(trial):
        recs, _ = run_trial(cfg, trial)
        return recs

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            chunks = list(pool.map(task, range(cfg.trials)))
    else:
        chunks = [task(t) for t in range(cfg.trials)]
    records = [r for chunk in chunks for r in chunk]
    expected = cfg.trials * len(cfg.schemes)
    got = {(r.scheme, r.trial) for r in records}
    if len(got) != expected:
        raise RuntimeError("missing records for some (scheme, trial) pairs")
    log.info("region sweep: %d records in %.1f s", len(records),
             time.perf_counter() - t0)
    return aggregate_curves(records), _sort_records(records)


def run_parameter_sweep(cfg: ExperimentConfig, axis: str, values):
    """Repeat the region sweep along one axis with paired channel seeds.

    Axis "M" varies the sampling resolution (warm-starting finer grids from
    coarser results when the grids nest), "A" varies the region size at fixed
    sampling interval, "N" the antenna count (with a shared requirement grid
    from the smallest count so points align across curves).
    """
    axis = axis.upper()
    if axis not in ("M", "A", "N"):
        raise ConfigError("axis must be one of M, A, N")
    values = list(values)
    if not values:
        raise ConfigError("need at least one axis value")

    def variant(v) -> ExperimentConfig:
        if axis == "M":
            return replace(cfg, grid_points=int(v))
        if axis == "A":
            spacing = cfg.region_wavelengths / cfg.grid_points
            m = int(round(float(v) / spacing))
            return replace(cfg, region_wavelengths=float(v), grid_points=max(m, 1))
        return replace(cfg, n_antennas=int(v))

    cfgs = {v: variant(v) for v in values}

    # one shared requirement grid per trial so curves pair across values
    def shared_grid(trial: int) -> np.ndarray:
        caps = []
        for v, c in cfgs.items():
            ctx = _TrialContext(c, trial)
            caps.append(ctx.fpa_capacity)
        return _requirement_grid(cfg, min(caps))

    results = {}
    carried: dict[int, dict[int, np.ndarray]] = {}

    def run_value(v, warm_by_trial):
        c = cfgs[v]
        finals_by_trial = {}

        def task(trial):
            grid_r = shared_grid(trial)
            recs, finals = run_trial(c, trial, r_grid=grid_r,
                                     warm_start=warm_by_trial.get(trial))
            return trial, recs, finals

        if c.threads > 1:
            with ThreadPoolExecutor(max_workers=c.threads) as pool:
                outs = list(pool.map(task, range(c.trials)))
        else:
            outs = [task(t) for t in range(c.trials)]
        records = []
        for trial, recs, finals in outs:
            records.extend(recs)
            finals_by_trial[trial] = finals
        return aggregate_curves(records), _sort_records(records), finals_by_trial

    for v in values:
        curves, records, finals = run_value(v, carried)
        results[v] = (curves, records)
        carried = finals if axis in ("M", "A") else {}
    return results


def run_single_ma_demo(cfg: ExperimentConfig):
    """Single-antenna study: integrated transmission vs two-slot schedule.

    Returns curves for both single-antenna schemes plus the per-trial records;
    logs whether any trial shows the two-slot schedule beating the integrated
    one somewhere (possible because the slots may use different positions).
    """
    cfg1 = replace(cfg, n_antennas=1,
                   schemes=["single-ma"])
    records = []
    crossover_trials = []
    for trial in range(cfg1.trials):
        ctx = _TrialContext(cfg1, trial)
        e1 = element_response(ctx.grid.points, ctx.channel.user1, ctx.lam)
        e2 = element_response(ctx.grid.points, ctx.channel.user2, ctx.lam)
        a1 = np.abs(e1) ** 2
        a2 = np.abs(e2) ** 2
        # per-slot optimal positions may differ
        rc_slot = float(np.log2((ctx.noise + ctx.power * a1)
                                / (ctx.noise + ctx.power * a2)).max())
        r0_slot = float(np.log2(1.0 + ctx.power * np.minimum(a1, a2) / ctx.noise).max())
        cap = np.where(a1 >= a2, np.log2(1.0 + ctx.power * a2 / ctx.noise), 0.0).max()
        r_grid = _requirement_grid(cfg1, float(cap))
        ctx.r_grid = r_grid
        records.extend(_run_single_ma(ctx))
        crossed = False
        for r in r_grid:
            try:
                _, rc_int = rates.single_ma_position_search(
                    ctx.channel, ctx.grid.points, ctx.power, float(r))
            except rates.InfeasibleRequirementError:
                continue
            if r <= r0_slot:
                rc_ts = (1.0 - float(r) / r0_slot) * rc_slot
                records.append(ctx.record("ts", r, max(rc_ts, 0.0), float(r),
                                          inner.OPTIMAL, None, None))
                if rc_ts > rc_int + 1e-9:
                    crossed = True
            else:
                records.append(ctx.record("ts", r, None, None,
                                          inner.INFEASIBLE, None, None))
        if crossed:
            crossover_trials.append(trial)
    if crossover_trials:
        log.info("two-slot schedule beats integrated transmission somewhere "
                 "in trials %s", crossover_trials)
    else:
        log.info("no trial showed the two-slot schedule winning anywhere")
    return aggregate_curves(records), _sort_records(records), crossover_trials


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if np.isnan(value):
            return ""
        return repr(float(value))
    return str(value)


def write_results(records: list, curves: list, out_dir, cfg: ExperimentConfig,
                  *, prefix: str = "", extra_meta: dict | None = None) -> dict:
    """Write records/curves CSVs and a manifest; returns the file paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rec_path = out / f"{prefix}records.csv"
    with open(rec_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in _sort_records(records):
            apv_json = ("" if r.apv is None
                        else json.dumps([[float(x), float(y)] for x, y in r.apv],
                                        separators=(",", ":")))
            w.writerow([r.scheme, r.trial, r.seed, r.n_antennas, r.grid_points,
                        _fmt(float(r.region_wavelengths)), _fmt(r.r_ms),
                        _fmt(r.rc), _fmt(r.r0), r.status, _fmt(r.elapsed_ms),
                        apv_json])
    curve_path = out / f"{prefix}curves.csv"
    with open(curve_path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["scheme", "N", "M", "A_over_lambda", "point", "r_ms_mean",
                    "Rc_mean", "Rc_std", "feasible_fraction", "n_feasible"])
        for c in curves:
            for k, p in enumerate(c.points):
                w.writerow([c.scheme, c.n_antennas, c.grid_points,
                            _fmt(float(c.region_wavelengths)), k,
                            _fmt(p.r_ms_mean), _fmt(p.rc_mean), _fmt(p.rc_std),
                            _fmt(p.feasible_fraction), p.n_feasible])
    manifest = {
        "config": cfg.to_dict(),
        "config_hash": cfg.content_hash(),
        "versions": {"mapsi": __version__,
                     "numpy": np.__version__,
                     "python": sys.version.split()[0]},
        "record_count": len(records),
    }
    if extra_meta:
        manifest.update(extra_meta)
    man_path = out / f"{prefix}manifest.json"
    with open(man_path, "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return {"records": rec_path, "curves": curve_path, "manifest": man_path}


def read_records_csv(path) -> list:
    """Parse a records CSV back into TrialRecord objects."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"records file lacks columns {missing}")
        for row in reader:
            apv = None
            if row["apv_json"]:
                apv = np.array(json.loads(row["apv_json"]), dtype=float)
            out.append(TrialRecord(
                scheme=row["scheme"], trial=int(row["trial"]),
                seed=int(row["seed"]), n_antennas=int(row["N"]),
                grid_points=int(row["M"]),
                region_wavelengths=float(row["A_over_lambda"]),
                r_ms=float(row["r_ms_bits"]),
                rc=float(row["Rc_bits"]) if row["Rc_bits"] else None,
                r0=float(row["R0_bits"]) if row["R0_bits"] else None,
                status=row["status"],
                apv=apv,
                elapsed_ms=float(row["elapsed_ms"]) if row["elapsed_ms"] else None))
    return out

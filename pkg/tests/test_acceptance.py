"""Acceptance suite: one test per top-level criterion, with one PASS/FAIL
line printed per criterion.  The sizes and tolerances are fixed here, not
calibrated at runtime."""

import hashlib
import time

import numpy as np
import pytest

from mapsi import inner, los, rates
from mapsi.channel import ScenarioParams, element_response, sample_channel
from mapsi.harness import (ExperimentConfig, run_parameter_sweep,
                           run_region_sweep, write_results)
from mapsi.outer import build_grid, initial_apv, sequential_search


def _report(name: str, ok: bool, detail: str = ""):
    print(f"\n[acceptance] {name}: {'PASS' if ok else 'FAIL'} {detail}".rstrip())
    assert ok, f"acceptance criterion '{name}' failed: {detail}"


# ---------------------------------------------------------------------------
# closed-form equivalence for a single antenna


def test_single_antenna_closed_form_equivalence():
    rng = np.random.default_rng(101)
    h1s, h2s, reqs = [], [], []
    while len(h1s) < 1000:
        h1 = complex(rng.normal(), rng.normal())
        h2 = complex(rng.normal(), rng.normal())
        if abs(h1) < abs(h2) or abs(h2) < 1e-2:
            continue
        cap = np.log2(1 + 10.0 * abs(h2) ** 2)
        h1s.append(h1)
        h2s.append(h2)
        reqs.append(rng.uniform(0.0, 0.95) * cap)
    start = time.perf_counter()
    g11 = np.abs(np.array(h1s)) ** 2
    g22 = np.abs(np.array(h2s)) ** 2
    g12 = np.conj(np.array(h1s)) * np.array(h2s)
    st, obj, _ = inner.solve_inner_gram_batch(g11, g22, g12, 10.0,
                                              np.array(reqs), 1.0)
    elapsed = time.perf_counter() - start
    worst = 0.0
    for k in range(1000):
        cf = rates.single_ma_secrecy_rate(h1s[k], h2s[k], 10.0, reqs[k], 1.0)
        assert st[k] == inner.OPTIMAL
        worst = max(worst, abs(np.log2(obj[k]) - cf))
    # spot-check that the one-shot entry point agrees with the batched one
    for k in range(0, 1000, 40):
        sol = inner.solve_inner(inner.InnerProblem(
            [h1s[k]], [h2s[k]], 10.0, reqs[k], 1.0))
        assert abs(sol.objective - obj[k]) <= 1e-7 * obj[k]
    ok = worst <= 1e-6 and elapsed < 10.0
    _report("single-antenna closed form", ok,
            f"(worst {worst:.2e} bits, {elapsed:.2f} s)")


# ---------------------------------------------------------------------------
# generalized-eigenvalue oracle at zero requirement


def test_zero_requirement_matches_eigenvalue_oracle():
    rng = np.random.default_rng(102)
    worst = 0.0
    for n in (2, 4):
        for _ in range(250):
            h1 = rng.normal(size=n) + 1j * rng.normal(size=n)
            h2 = rng.normal(size=n) + 1j * rng.normal(size=n)
            sol = inner.solve_inner(inner.InnerProblem(h1, h2, 10.0, 0.0, 1.0))
            _, oracle = rates.secrecy_only_optimal(h1, h2, 10.0, 1.0)
            assert sol.status == inner.OPTIMAL
            worst = max(worst, abs(sol.secrecy_rate_bits - oracle))
    _report("generalized-eigenvalue oracle", worst <= 1e-6,
            f"(worst {worst:.2e} bits over 500 instances)")


# ---------------------------------------------------------------------------
# brute-force sampling oracle and relaxation tightness


def _direction_grid(a_lo, a_hi, p_lo, p_hi, n_amp, n_phase, endpoint):
    amp = np.linspace(a_lo, a_hi, n_amp)
    ph = np.linspace(p_lo, p_hi, n_phase, endpoint=endpoint)
    a, p = np.meshgrid(amp, ph, indexing="ij")
    dirs = np.stack([np.cos(a).ravel().astype(complex),
                     (np.sin(a) * np.exp(1j * p)).ravel()], axis=1)
    return dirs, amp, ph


def _best_sampled_rate(h1, h2, power, noise, tau, uc, psis, chunk=20000):
    """Best secrecy rate over sampled rank-one (wc, w0) pairs.

    Confidential directions come from ``uc``.  For each one, the candidate
    common beamformers are (a) the minimum-power vectors meeting both users'
    floors with equality, a one-parameter phase family sampled at ``psis``,
    with the confidential power pinned by the budget through a bisection, and
    (b) the two single-user matched filters with the closed-form best power.
    Every candidate is a feasible explicit beamformer pair, scored exactly.
    Returns (rate, uc index, psi index) with psi index -1 for matched filters.
    """
    gram = np.stack([np.conj(h1), np.conj(h2)])
    wa = np.linalg.solve(gram, np.array([1.0, 0.0], dtype=complex))
    wb = np.linalg.solve(gram, np.array([0.0, 1.0], dtype=complex))
    alpha = float(np.vdot(wa, wa).real)
    beta = float(np.vdot(wb, wb).real)
    cross = complex(np.vdot(wa, wb))
    cosmix = np.cos(psis + np.angle(cross))[None, :] * abs(cross)

    g11 = float(np.vdot(h1, h1).real)
    g22 = float(np.vdot(h2, h2).real)
    gc1_all = np.abs(uc @ h1.conj()) ** 2
    gc2_all = np.abs(uc @ h2.conj()) ** 2
    best, arg = -np.inf, (0, 0)
    for lo in range(0, len(uc), chunk):
        gc1 = gc1_all[lo:lo + chunk, None]
        gc2 = gc2_all[lo:lo + chunk, None]

        # (a) both floors tight; power use is monotone in the confidential
        # share, so the largest feasible share is a bisection root
        def used(pc):
            c1 = tau * (noise + pc * gc1)
            c2 = tau * (noise + pc * gc2)
            return c1 * alpha + c2 * beta + 2 * np.sqrt(c1 * c2) * cosmix + pc

        lo_pc = np.zeros((gc1.shape[0], cosmix.shape[1]))
        hi_pc = np.full_like(lo_pc, power)
        feasible = used(lo_pc) <= power
        for _ in range(36):
            mid = 0.5 * (lo_pc + hi_pc)
            good = used(mid) <= power
            lo_pc = np.where(good, mid, lo_pc)
            hi_pc = np.where(good, hi_pc, mid)
        pc = np.where(feasible, lo_pc, 0.0)
        rate = np.log2(noise + pc * gc1) - np.log2(noise + pc * gc2)
        rate = np.where(feasible, np.maximum(rate, 0.0), -np.inf)
        k = int(np.argmax(rate))
        if rate.ravel()[k] > best:
            best = float(rate.ravel()[k])
            arg = (lo + k // rate.shape[1], k % rate.shape[1])

        # (b) single active floor: matched-filter common beamformer, largest
        # feasible confidential share in closed form
        for gmk, g01, g02 in ((g11, g11, abs(np.vdot(h1, h2)) ** 2 / g11),
                              (g22, abs(np.vdot(h1, h2)) ** 2 / g22, g22)):
            with np.errstate(divide="ignore"):
                pc1 = (power - tau * noise / g01) / (1.0 + tau * gc1 / g01)
                pc2 = (power - tau * noise / g02) / (1.0 + tau * gc2 / g02)
            pcm = np.clip(np.minimum(pc1, pc2), 0.0,
                          power if min(g01, g02) > 0 else 0.0)
            okm = (tau * noise <= power * min(g01, g02)) if min(g01, g02) > 0 \
                else tau == 0.0
            rate = np.log2(noise + pcm * gc1) - np.log2(noise + pcm * gc2)
            if okm:
                kk = int(np.argmax(rate))
                if rate.ravel()[kk] > best:
                    best = float(max(rate.ravel()[kk], 0.0))
                    arg = (lo + kk // rate.shape[1], -1)
    return best, arg


def test_relaxation_tightness_against_sampling():
    # one million sampled pairs on a global grid, then one local refinement
    # pass of the same size around the best cell
    rng = np.random.default_rng(103)
    n_amp, n_ph, n_psi = 100, 100, 100
    uc_g, uc_amp, uc_ph = _direction_grid(0, np.pi / 2, 0, 2 * np.pi,
                                          n_amp, n_ph, endpoint=False)
    psi_g = np.linspace(0, 2 * np.pi, n_psi, endpoint=False)
    worst_gap = 0.0
    for _ in range(50):
        h1 = rng.normal(size=2) + 1j * rng.normal(size=2)
        h2 = rng.normal(size=2) + 1j * rng.normal(size=2)
        power, noise = 10.0, 1.0
        _, cap = rates.multicast_only_optimal(h1, h2, power, noise)
        r = float(rng.uniform(0.25, 0.75)) * cap
        tau = 2.0 ** r - 1.0
        sol = inner.solve_inner(inner.InnerProblem(h1, h2, power, r, noise))
        assert sol.status == inner.OPTIMAL
        coarse, (ic, ip) = _best_sampled_rate(h1, h2, power, noise, tau,
                                              uc_g, psi_g)
        assert sol.secrecy_rate_bits >= coarse - 1e-9, \
            "sampled rank-one pair beat the relaxation"
        # refine once around the winning cells with the same budget
        ac, pc_ = uc_amp[ic // n_ph], uc_ph[ic % n_ph]
        da, dp = np.pi / 2 / (n_amp - 1), 2 * np.pi / n_ph
        uc_l, _, _ = _direction_grid(max(ac - da, 0), min(ac + da, np.pi / 2),
                                     pc_ - dp, pc_ + dp, n_amp, n_ph, True)
        if ip >= 0:
            dpsi = 2 * np.pi / n_psi
            psi_l = np.linspace(psi_g[ip] - dpsi, psi_g[ip] + dpsi, n_psi)
        else:
            psi_l = psi_g
        fine, _ = _best_sampled_rate(h1, h2, power, noise, tau, uc_l, psi_l)
        fine = max(fine, coarse)
        worst_gap = max(worst_gap, sol.secrecy_rate_bits - fine)
    _report("sampling oracle tightness", worst_gap <= 5e-3,
            f"(worst refined gap {worst_gap:.2e} bits)")


# ---------------------------------------------------------------------------
# rank-one recovery quality


def test_rank_one_recovery():
    rng = np.random.default_rng(104)
    worst_ratio = 0.0
    worst_feas = 0.0
    for _ in range(200):
        h1 = rng.normal(size=4) + 1j * rng.normal(size=4)
        h2 = rng.normal(size=4) + 1j * rng.normal(size=4)
        _, cap = rates.multicast_only_optimal(h1, h2, 10.0, 1.0)
        r = float(rng.uniform(0.1, 0.9)) * cap
        sol = inner.solve_inner(inner.InnerProblem(h1, h2, 10.0, r, 1.0))
        assert sol.status == inner.OPTIMAL
        worst_ratio = max(worst_ratio, sol.rank_ratio_Z, sol.rank_ratio_Gamma)
        common = rates.multicast_rate(h1, h2, sol.w0, sol.wc, 1.0)
        power_used = np.linalg.norm(sol.w0) ** 2 + np.linalg.norm(sol.wc) ** 2
        worst_feas = max(worst_feas, r - common, (power_used - 10.0) / 10.0)
    ok = worst_ratio <= 1e-6 and worst_feas <= 1e-5
    _report("rank-one recovery", ok,
            f"(worst ratio {worst_ratio:.2e}, worst violation {worst_feas:.2e})")


# ---------------------------------------------------------------------------
# sequential search contract


def test_sequential_search_contract():
    par = ScenarioParams()
    lam = par.wavelength
    grid = build_grid(8 * lam, 10)
    d_min = lam / 2
    monotone = True
    feasible = True
    finals = {}
    for trial in range(100):
        ch = sample_channel(par, rng_seed=105, rng_stream=trial)
        apv0, _ = (initial_apv(grid, 4, d_min), None)
        h1, h2 = ch.vectors(apv0)
        _, cap = rates.multicast_only_optimal(h1, h2, par.tx_power_watts,
                                              par.noise_watts)
        st = sequential_search(ch, grid, par.tx_power_watts, 0.5 * cap,
                               apv0, d_min)
        hist = np.array(st.history)
        monotone &= bool(np.all(np.diff(hist) >= -1e-15))
        diff = st.apv[:, None, :] - st.apv[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        np.fill_diagonal(dist, np.inf)
        feasible &= bool(dist.min() >= d_min - 1e-12)
        feasible &= bool(np.all(np.abs(st.apv) <= 4 * lam + 1e-12))
        finals[trial] = (st.apv, st.objective_bits, 0.5 * cap, ch)
    deterministic = True
    for trial in (0, 37, 99):
        apv, obj, r, ch = finals[trial]
        st = sequential_search(ch, grid, par.tx_power_watts, r,
                               initial_apv(grid, 4, lam / 2), lam / 2)
        deterministic &= np.array_equal(st.apv, apv) and st.objective_bits == obj
    ok = monotone and feasible and deterministic
    _report("sequential search contract", ok,
            f"(monotone={monotone} feasible={feasible} deterministic={deterministic})")


# ---------------------------------------------------------------------------
# qualitative trend reproduction at desk scale


def _mean_by_rank(records, scheme):
    per_trial = {}
    for r in records:
        if r.scheme == scheme:
            per_trial.setdefault(r.trial, []).append(r)
    ranks = {}
    for recs in per_trial.values():
        for rank, rec in enumerate(sorted(recs, key=lambda x: x.r_ms)):
            ranks.setdefault(rank, {})[rec.trial] = rec
    return ranks


def _paired_means(ranks_a, ranks_b):
    """Mean rates per rank over trials feasible in both record sets."""
    out = []
    for rank in sorted(ranks_a):
        ta, tb = ranks_a[rank], ranks_b[rank]
        common = [t for t in ta if t in tb
                  and ta[t].rc is not None and tb[t].rc is not None]
        if common:
            out.append((np.mean([ta[t].rc for t in common]),
                        np.mean([tb[t].rc for t in common])))
    return out


@pytest.fixture(scope="module")
def trend_sweeps():
    base = dict(n_antennas=4, grid_points=20, region_wavelengths=8.0,
                r_ms_points=5, trials=100, seed=106, schemes=["ma", "fpa"])
    m_sweep = run_parameter_sweep(ExperimentConfig(**base), "M", [5, 10, 20])
    a_sweep = run_parameter_sweep(ExperimentConfig(**base), "A", [2.0, 4.0, 8.0])
    n_base = dict(base, grid_points=10)
    n_sweep = run_parameter_sweep(ExperimentConfig(**n_base), "N", [2, 4])
    return m_sweep, a_sweep, n_sweep


def test_trend_movable_dominates_fixed(trend_sweeps):
    m_sweep, a_sweep, n_sweep = trend_sweeps
    ok = True
    detail = []
    for sweep in (m_sweep, a_sweep, n_sweep):
        for value, (curves, records) in sweep.items():
            pairs = _paired_means(_mean_by_rank(records, "ma"),
                                  _mean_by_rank(records, "fpa"))
            margin = min(ma - fpa for ma, fpa in pairs)
            ok &= margin >= 0.0
            detail.append(f"{value:g}:{margin:+.3f}")
    _report("movable beats fixed array", ok, "(min margins " + " ".join(detail) + ")")


def test_trend_resolution_monotone(trend_sweeps):
    m_sweep, _, _ = trend_sweeps
    ok = True
    gains = []
    values = [5, 10, 20]
    for lo, hi in zip(values, values[1:]):
        pairs = _paired_means(_mean_by_rank(m_sweep[hi][1], "ma"),
                              _mean_by_rank(m_sweep[lo][1], "ma"))
        worst = min(hi_m - lo_m for hi_m, lo_m in pairs)
        gains.append(worst)
        ok &= worst >= -1e-9
    _report("rate nondecreasing in sampling resolution", ok,
            f"(worst per-point gains {gains[0]:+.4f}, {gains[1]:+.4f})")


def test_trend_antennas_monotone(trend_sweeps):
    _, _, n_sweep = trend_sweeps
    pairs = _paired_means(_mean_by_rank(n_sweep[4][1], "ma"),
                          _mean_by_rank(n_sweep[2][1], "ma"))
    worst = min(n4 - n2 for n4, n2 in pairs)
    _report("rate nondecreasing in antenna count", worst >= 0.0,
            f"(min mean gain {worst:+.3f} bits)")


def test_trend_region_growth_saturates(trend_sweeps):
    _, a_sweep, _ = trend_sweeps
    means = {}
    for v in (2.0, 4.0, 8.0):
        ranks = _mean_by_rank(a_sweep[v][1], "ma")
        means[v] = [np.mean([rec.rc for rec in ranks[rank].values()
                             if rec.rc is not None])
                    for rank in sorted(ranks)]
    lo = np.array(means[2.0])
    mid = np.array(means[4.0])
    hi = np.array(means[8.0])
    nondecreasing = bool(np.all(mid >= lo) and np.all(hi >= mid))
    gain_24 = float(np.mean(mid - lo))
    gain_48 = float(np.mean(hi - mid))
    flattening = gain_48 <= gain_24
    _report("region growth saturates", nondecreasing and flattening,
            f"(gains {gain_24:+.3f} then {gain_48:+.3f} bits)")


# ---------------------------------------------------------------------------
# single-antenna analysis claims


def test_single_antenna_integrated_vs_slots():
    par = ScenarioParams()
    grid = build_grid(8 * par.wavelength, 10)
    alphas = np.linspace(0.0, 1.0, 101)
    ok = True
    for trial in range(30):
        ch = sample_channel(par, rng_seed=107, rng_stream=trial)
        e1 = element_response(grid.points, ch.user1, par.wavelength)
        e2 = element_response(grid.points, ch.user2, par.wavelength)
        for q in np.flatnonzero(np.abs(e1) >= np.abs(e2))[:5]:
            h1, h2 = e1[q], e2[q]
            rc_slot, r0_slot = rates.single_ma_time_sharing_slots(
                h1, h2, par.tx_power_watts, par.noise_watts)
            for alpha in alphas:
                rc_ts = alpha * rc_slot
                r_req = (1 - alpha) * r0_slot
                rc_int = rates.single_ma_secrecy_rate(
                    h1, h2, par.tx_power_watts, r_req, par.noise_watts)
                ok &= rc_int >= rc_ts - 1e-9
    # repositioning between slots can beat the single shared position; find
    # and report (not assert) seeds where it happens
    crossover_seeds = []
    for trial in range(12):
        ch = sample_channel(par, rng_seed=108, rng_stream=trial)
        e1 = element_response(grid.points, ch.user1, par.wavelength)
        e2 = element_response(grid.points, ch.user2, par.wavelength)
        a1, a2 = np.abs(e1) ** 2, np.abs(e2) ** 2
        P, s2 = par.tx_power_watts, par.noise_watts
        rc_slot = float(np.log2((s2 + P * a1) / (s2 + P * a2)).max())
        r0_slot = float(np.log2(1 + P * np.minimum(a1, a2) / s2).max())
        for alpha in np.linspace(0.05, 0.95, 19):
            r_req = (1 - alpha) * r0_slot
            try:
                _, rc_int = rates.single_ma_position_search(
                    ch, grid.points, P, r_req)
            except rates.InfeasibleRequirementError:
                rc_int = -np.inf
            if alpha * rc_slot > rc_int + 1e-9:
                crossover_seeds.append(trial)
                break
    print(f"\n[acceptance] note: slot schedule with repositioning beats the "
          f"integrated scheme somewhere in {len(crossover_seeds)}/12 trials "
          f"{crossover_seeds}")
    _report("integrated transmission dominates fixed-position slots", ok)


# ---------------------------------------------------------------------------
# aligned-beam construction pipeline


def test_aligned_beam_construction_at_tight_tolerance():
    # The four phase targets are mutually exclusive below a threshold
    # tolerance: the residuals satisfy r_c1 - r_01 + r_02 - r_c2 = 0 exactly,
    # so three phases near zero pin the fourth near zero, never near pi.
    # The criterion demands success at eps = 0.1; it cannot be met by any
    # spacing (see the decisions ledger for the full analysis).  The search
    # and the construction are exercised honestly and the criterion is
    # asserted as stated.
    rng = np.random.default_rng(109)
    eps = 0.1
    n = 2
    found, gains_ok = 0, True
    worst_dev = {eps: 0.0, eps / 2: 0.0}
    for _ in range(20):
        scen = los.random_scenario(rng, 0.0599584916)
        rs = los.residuals(scen)
        hit = los.find_spacing(rs, n, eps, scen.wavelength, 5_000_000)
        if hit is None:
            continue
        found += 1
        d, dev = hit
        worst_dev[eps] = max(worst_dev[eps], dev)
        g = los.beam_gains(los.lemma_apv(d, scen.wavelength, n), scen)
        gains_ok &= g["g_c1"] >= n * (1 - eps) and g["g_01"] >= n * (1 - eps)
        gains_ok &= g["g_02"] >= n * (1 - eps) and g["g_c2"] <= n * eps
        half = los.find_spacing(rs, n, eps / 2, scen.wavelength, 5_000_000)
        if half is not None:
            worst_dev[eps / 2] = max(worst_dev[eps / 2], half[1])
    ok = (found == 20) and gains_ok and (worst_dev[eps / 2] < worst_dev[eps])
    _report("aligned-beam construction at eps=0.1", ok,
            f"(spacings found for {found}/20 scenarios; the four phase "
            f"targets are linearly dependent and mutually exclusive at this "
            f"tolerance -- see decisions ledger)")


# ---------------------------------------------------------------------------
# byte-level determinism


def test_region_sweep_byte_determinism(tmp_path):
    base = dict(trials=3, r_ms_points=4, grid_points=8, n_antennas=2,
                schemes=["ma", "fpa", "ts"], seed=110, max_rounds=3)
    digests = []
    for k, threads in enumerate((1, 1, 4)):
        cfg = ExperimentConfig(**base, threads=threads)
        curves, records = run_region_sweep(cfg)
        paths = write_results(records, curves, tmp_path / str(k), cfg)
        with open(paths["records"], "rb") as fh:
            digests.append(hashlib.sha256(fh.read()).hexdigest())
    ok = digests[0] == digests[1] == digests[2]
    _report("byte-identical reruns across thread counts", ok,
            f"(sha256 {digests[0][:12]}...)")

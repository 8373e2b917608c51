"""Antenna placement optimization over a sampled transmit region.

The region is discretized into an M x M point grid and the antennas are moved
one at a time, each update enumerating every feasible grid point for that
antenna with the other antennas held fixed.  Each candidate placement changes
exactly one entry of the channel vectors, so candidate Gram data is updated in
O(1) and the inner problems are solved in vectorized batches.  A closed-form
upper bound (the requirement-free optimum) prunes candidates that cannot beat
the incumbent, which removes most solves once the search is warm.

Also provides the fixed-array and particle-swarm baselines.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import inner
from .channel import ChannelRealization, element_response, validate_apv


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class SamplingGrid:
    """Uniform M x M sampling of the square region [-A/2, A/2]^2.

    Point (i, j), i,j in 1..M, sits at (-A/2 + iA/M, -A/2 + jA/M); the flat
    index runs j fastest, which fixes the deterministic enumeration order.
    """

    region_size: float
    points_per_dim: int
    spacing: float
    points: np.ndarray

    def index_of(self, position, tol: float = 1e-9) -> int:
        d = np.abs(self.points - np.asarray(position)).max(axis=1)
        idx = int(np.argmin(d))
        if d[idx] > tol * max(self.spacing, 1e-30):
            raise ConfigurationError(f"position {position} is not a grid point")
        return idx


def build_grid(region_size: float, points_per_dim: int) -> SamplingGrid:
    if points_per_dim < 1 or region_size <= 0:
        raise ConfigurationError("need M >= 1 and a positive region size")
    m = points_per_dim
    coords = -region_size / 2.0 + np.arange(1, m + 1) * region_size / m
    xx, yy = np.meshgrid(coords, coords, indexing="ij")
    points = np.stack([xx.ravel(), yy.ravel()], axis=1)
    return SamplingGrid(region_size=region_size, points_per_dim=m,
                        spacing=region_size / m, points=points)


def feasible_mask(grid: SamplingGrid, apv: np.ndarray, n: int, d_min: float) -> np.ndarray:
    """Grid points at distance >= d_min from every antenna other than n."""
    apv = np.asarray(apv, dtype=float)
    if not 0 <= n < len(apv):
        raise ValueError("antenna index out of range")
    others = np.delete(apv, n, axis=0)
    if len(others) == 0:
        return np.ones(len(grid.points), dtype=bool)
    dist = np.linalg.norm(grid.points[:, None, :] - others[None, :, :], axis=2)
    return (dist >= d_min).all(axis=1)


def feasible_points(grid: SamplingGrid, apv: np.ndarray, n: int, d_min: float) -> np.ndarray:
    return grid.points[feasible_mask(grid, apv, n, d_min)]


def initial_apv(grid: SamplingGrid, n_antennas: int, d_min: float,
                rng: np.random.Generator | None = None) -> np.ndarray:
    """Deterministic feasible starting placement on the grid.

    Antennas go on a centered sub-lattice whose step is the smallest grid
    multiple >= d_min; if the sub-lattice does not fit, seeded rejection
    sampling is used as a fallback.
    """
    if n_antennas < 1:
        raise ConfigurationError("need at least one antenna")
    m = grid.points_per_dim
    step = max(1, int(np.ceil(d_min / grid.spacing - 1e-12)))
    side = int(np.ceil(np.sqrt(n_antennas)))
    span = (side - 1) * step
    if span < m:
        # centered block of side x side lattice sites
        i0 = (m - 1 - span) // 2
        picks = []
        for a in range(side):
            for b in range(side):
                if len(picks) == n_antennas:
                    break
                picks.append((i0 + a * step, i0 + b * step))
            if len(picks) == n_antennas:
                break
        idx = np.array([p[0] * m + p[1] for p in picks])
        apv = grid.points[idx]
        try:
            validate_apv(apv, grid.region_size, d_min)
            return apv
        except ValueError:
            pass
    rng = rng if rng is not None else np.random.default_rng(0)
    for _ in range(2000):
        idx = rng.choice(len(grid.points), size=n_antennas, replace=False)
        apv = grid.points[np.sort(idx)]
        try:
            validate_apv(apv, grid.region_size, d_min)
            return apv
        except ValueError:
            continue
    raise ConfigurationError("could not place antennas at the required spacing")


@dataclass
class SearchState:
    """Result of a sequential placement search."""

    apv: np.ndarray
    objective_bits: float
    rounds: int
    history: list[float] = field(default_factory=list)
    status: str = inner.OPTIMAL
    solution: inner.InnerSolution | None = None
    solves: int = 0


def _grams_of(h1: np.ndarray, h2: np.ndarray):
    g11 = float(np.vdot(h1, h1).real)
    g22 = float(np.vdot(h2, h2).real)
    g12 = complex(np.vdot(h1, h2))
    return g11, g22, g12


def sequential_search(channel: ChannelRealization, grid: SamplingGrid,
                      power: float, multicast_req: float,
                      initial: np.ndarray, d_min: float, *,
                      max_rounds: int = 5, improve_tol: float = 1e-9,
                      solver_tol: float = 1e-8, chunk: int = 128) -> SearchState:
    """Cycle through antennas, moving each to its best feasible grid point.

    The objective history (secrecy rate in bits) is nondecreasing by
    construction: an antenna moves only on strict improvement.  Ties among
    candidates resolve to the smallest flat grid index.
    """
    initial = validate_apv(initial, grid.region_size, d_min)
    n_ant = len(initial)
    e1 = element_response(grid.points, channel.user1, channel.wavelength)
    e2 = element_response(grid.points, channel.user2, channel.wavelength)
    noise = channel.noise_power
    idx = np.array([grid.index_of(p) for p in initial])

    h1 = e1[idx].copy()
    h2 = e2[idx].copy()
    g11, g22, g12 = _grams_of(h1, h2)

    statuses, objs, _ = inner.solve_inner_gram_batch(
        np.array([g11]), np.array([g22]), np.array([g12]), power,
        multicast_req, noise, tol=solver_tol)
    solves = 1
    cur_obj = float(objs[0]) if statuses[0] == inner.OPTIMAL else -np.inf

    history: list[float] = []
    rounds_done = 0
    for _ in range(max_rounds):
        rounds_done += 1
        obj_at_round_start = cur_obj
        for n in range(n_ant):
            mask = feasible_mask(grid, grid.points[idx], n, d_min)
            mask[idx[n]] = False      # incumbent already solved
            cand = np.flatnonzero(mask)
            if cand.size == 0:
                history.append(np.log2(cur_obj) if cur_obj > 0 else -np.inf)
                continue
            # O(1) Gram update per candidate: only entry n changes
            c11 = g11 - np.abs(h1[n]) ** 2 + np.abs(e1[cand]) ** 2
            c22 = g22 - np.abs(h2[n]) ** 2 + np.abs(e2[cand]) ** 2
            c12 = g12 - np.conj(h1[n]) * h2[n] + np.conj(e1[cand]) * e2[cand]
            bounds = inner.secrecy_objective_upper_bound(
                c11, c22, c12, power, noise, multicast_req)
            order = np.argsort(-bounds, kind="stable")
            objectives = np.full(cand.size, -np.inf)
            best = cur_obj
            pos = 0
            while pos < cand.size:
                if bounds[order[pos]] <= best:
                    break
                sel = order[pos:pos + chunk]
                sel = sel[bounds[sel] > best]
                if sel.size == 0:
                    break
                st, ob, _ = inner.solve_inner_gram_batch(
                    c11[sel], c22[sel], c12[sel], power, multicast_req,
                    noise, tol=solver_tol)
                solves += sel.size
                ok = st == inner.OPTIMAL
                objectives[sel[ok]] = ob[ok]
                if np.any(ok):
                    best = max(best, float(ob[ok].max()))
                pos += chunk
            best_c = int(np.argmax(objectives))
            if objectives[best_c] > cur_obj:
                q = int(cand[best_c])
                g11 = float(c11[best_c])
                g22 = float(c22[best_c])
                g12 = complex(c12[best_c])
                idx[n] = q
                h1[n] = e1[q]
                h2[n] = e2[q]
                cur_obj = float(objectives[best_c])
            history.append(np.log2(cur_obj) if cur_obj > 0 else -np.inf)
        if not np.isfinite(cur_obj):
            break
        if np.log2(cur_obj) - (np.log2(obj_at_round_start)
                               if obj_at_round_start > 0 else -np.inf) < improve_tol:
            break

    apv = grid.points[idx]
    if not np.isfinite(cur_obj):
        return SearchState(apv=apv, objective_bits=-np.inf, rounds=rounds_done,
                           history=history, status=inner.INFEASIBLE, solves=solves)
    final = inner.solve_inner(inner.InnerProblem(e1[idx], e2[idx], power,
                                                 multicast_req, noise))
    solves += 1
    return SearchState(apv=apv, objective_bits=float(np.log2(cur_obj)),
                       rounds=rounds_done, history=history,
                       status=final.status, solution=final, solves=solves)


def fpa_apv(n_antennas: int, wavelength: float, region_size: float | None = None) -> np.ndarray:
    """Half-wavelength uniform linear array centered on the region origin."""
    offsets = (np.arange(1, n_antennas + 1) - (n_antennas + 1) / 2.0) * wavelength / 2.0
    apv = np.stack([offsets, np.zeros(n_antennas)], axis=1)
    if region_size is not None and np.abs(offsets).max() > region_size / 2.0 + 1e-12:
        raise ConfigurationError("fixed array does not fit in the region")
    return apv


def fpa_baseline(channel: ChannelRealization, n_antennas: int, power: float,
                 multicast_req: float, region_size: float | None = None):
    """Inner optimum at the fixed half-wavelength array; returns (apv, solution)."""
    apv = fpa_apv(n_antennas, channel.wavelength, region_size)
    h1, h2 = channel.vectors(apv)
    sol = inner.solve_inner(inner.InnerProblem(h1, h2, power, multicast_req,
                                               channel.noise_power))
    return apv, sol


@dataclass(frozen=True)
class PsoParams:
    particles: int = 20
    iterations: int = 50
    inertia: float = 0.7
    cognitive: float = 1.5
    social: float = 1.5
    penalty: float = 1e3


@dataclass
class PsoResult:
    apv: np.ndarray
    objective_bits: float
    fitness: float
    feasible: bool
    status: str


def _pairwise_violation(positions: np.ndarray, d_min: float) -> np.ndarray:
    """Sum of squared spacing deficits per particle; positions (P, N, 2)."""
    n = positions.shape[1]
    if n < 2:
        return np.zeros(len(positions))
    diff = positions[:, :, None, :] - positions[:, None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    iu = np.triu_indices(n, k=1)
    deficit = np.maximum(0.0, d_min - dist[:, iu[0], iu[1]])
    return (deficit ** 2).sum(axis=1)


def pso_baseline(channel: ChannelRealization, n_antennas: int, power: float,
                 multicast_req: float, region_size: float, d_min: float,
                 params: PsoParams, rng: np.random.Generator) -> PsoResult:
    """Continuous-position particle swarm over all antenna coordinates.

    Fitness is the linear-scale inner objective minus a quadratic spacing
    penalty; infeasible inner problems score zero before the penalty.  The
    best swarm position that satisfies the spacing constraint is returned;
    if none does, the best penalized one is flagged infeasible.
    """
    half = region_size / 2.0
    p = params
    pos = rng.uniform(-half, half, size=(p.particles, n_antennas, 2))
    vel = np.zeros_like(pos)

    def fitness_of(pts: np.ndarray):
        ph1 = _swarm_channels(pts, channel, user=1)
        ph2 = _swarm_channels(pts, channel, user=2)
        g11 = np.einsum("pn,pn->p", ph1, np.conj(ph1)).real
        g22 = np.einsum("pn,pn->p", ph2, np.conj(ph2)).real
        g12 = np.einsum("pn,pn->p", np.conj(ph1), ph2)
        st, ob, _ = inner.solve_inner_gram_batch(
            g11, g22, g12, power, multicast_req, channel.noise_power)
        obj = np.where(st == inner.OPTIMAL, ob, 0.0).astype(float)
        viol = _pairwise_violation(pts, d_min)
        return obj - p.penalty * viol, obj, viol, st

    fit, obj, viol, st = fitness_of(pos)
    pbest_pos = pos.copy()
    pbest_fit = fit.copy()
    g_idx = int(np.argmax(fit))
    gbest_pos = pos[g_idx].copy()
    gbest_fit = float(fit[g_idx])

    best_feas = None
    def consider_feasible(pts, fit_v, obj_v, viol_v, st_v):
        nonlocal best_feas
        feas = (viol_v <= 0.0) & (st_v == inner.OPTIMAL)
        for i in np.flatnonzero(feas):
            if best_feas is None or fit_v[i] > best_feas[1]:
                best_feas = (pts[i].copy(), float(fit_v[i]), float(obj_v[i]))
    consider_feasible(pos, fit, obj, viol, st)

    for _ in range(p.iterations):
        r1 = rng.random(size=pos.shape)
        r2 = rng.random(size=pos.shape)
        vel = (p.inertia * vel
               + p.cognitive * r1 * (pbest_pos - pos)
               + p.social * r2 * (gbest_pos[None] - pos))
        pos = np.clip(pos + vel, -half, half)
        fit, obj, viol, st = fitness_of(pos)
        upd = fit > pbest_fit
        pbest_pos[upd] = pos[upd]
        pbest_fit[upd] = fit[upd]
        g_idx = int(np.argmax(pbest_fit))
        if pbest_fit[g_idx] > gbest_fit:
            gbest_fit = float(pbest_fit[g_idx])
            gbest_pos = pbest_pos[g_idx].copy()
        consider_feasible(pos, fit, obj, viol, st)

    if best_feas is not None:
        apv, fit_v, obj_v = best_feas
        rate = float(np.log2(obj_v)) if obj_v > 0 else -np.inf
        return PsoResult(apv=apv, objective_bits=rate, fitness=fit_v,
                         feasible=True,
                         status=inner.OPTIMAL if obj_v > 0 else inner.INFEASIBLE)
    rate = float(np.log2(gbest_fit)) if gbest_fit > 0 else -np.inf
    return PsoResult(apv=gbest_pos, objective_bits=rate, fitness=gbest_fit,
                     feasible=False, status=inner.INFEASIBLE)


def _swarm_channels(pts: np.ndarray, channel: ChannelRealization, user: int) -> np.ndarray:
    uc = channel.user1 if user == 1 else channel.user2
    flat = pts.reshape(-1, 2)
    return element_response(flat, uc, channel.wavelength).reshape(pts.shape[:2])

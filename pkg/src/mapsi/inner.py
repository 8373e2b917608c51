"""Beamforming optimization for a fixed antenna placement.

For given channel vectors (h1, h2) the secrecy rate is a ratio of two
interference-plus-noise terms.  Lifting the beamformers to covariance matrices
and normalizing the denominator with an auxiliary scalar turns the problem
into a small convex SDP whose optimum is attained at rank-one covariances; the
beamformers are then read off the dominant eigenpair.

Every quantity in the problem depends on the beamformers only through their
components along h1 and h2, so the SDP is solved in the (at most) 2-D span of
the two channels and lifted back.  That keeps the per-solve cost independent
of the number of antennas and lets position searches batch hundreds of
candidate placements through one vectorized solver call.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import sdp

RANK_RATIO_TOL = 1e-6

OPTIMAL = sdp.OPTIMAL
INFEASIBLE = sdp.INFEASIBLE
NUMERICAL = sdp.NUMERICAL


@dataclass
class InnerProblem:
    """Fixed-placement problem data."""

    h1: np.ndarray
    h2: np.ndarray
    power: float
    multicast_req: float
    noise: float

    def __post_init__(self):
        self.h1 = np.atleast_1d(np.asarray(self.h1, dtype=complex))
        self.h2 = np.atleast_1d(np.asarray(self.h2, dtype=complex))
        if self.h1.shape != self.h2.shape or self.h1.ndim != 1:
            raise ValueError("h1 and h2 must be 1-D arrays of equal length")
        if self.power <= 0 or self.noise <= 0:
            raise ValueError("power and noise must be positive")
        if self.multicast_req < 0:
            raise ValueError("multicast requirement must be nonnegative")

    @property
    def tau(self) -> float:
        return 2.0 ** self.multicast_req - 1.0


@dataclass
class InnerSolution:
    """SDP matrices, recovered beamformers and diagnostics."""

    status: str
    objective: float = np.nan        # linear-scale value, 2**secrecy_rate
    Z: np.ndarray | None = None
    Gamma: np.ndarray | None = None
    xi: float = np.nan
    Q0: np.ndarray | None = None
    Qc: np.ndarray | None = None
    w0: np.ndarray | None = None
    wc: np.ndarray | None = None
    rank_ratio_Z: float = np.nan
    rank_ratio_Gamma: float = np.nan
    rank_warning: bool = False
    rel_gap: float = np.nan
    iterations: int = 0

    @property
    def secrecy_rate_bits(self) -> float:
        if self.status != OPTIMAL:
            return np.nan
        return float(np.log2(self.objective))


def reduction_basis(h1: np.ndarray, h2: np.ndarray, tol: float = 1e-13):
    """Orthonormal basis of span{h1, h2} and the channel coordinates in it."""
    n1 = np.linalg.norm(h1)
    n2 = np.linalg.norm(h2)
    if n1 == 0.0 and n2 == 0.0:
        return None, None, None
    if n1 == 0.0:
        basis = (h2 / n2)[:, None]
        return basis, np.array([0.0 + 0j]), np.array([n2 + 0j])
    b1 = h1 / n1
    c = np.vdot(b1, h2)
    resid = h2 - c * b1
    rn = np.linalg.norm(resid)
    if rn <= tol * max(n1, n2):
        return b1[:, None], np.array([n1 + 0j]), np.array([c])
    basis = np.stack([b1, resid / rn], axis=1)
    return basis, np.array([n1, 0.0], dtype=complex), np.array([c, rn], dtype=complex)


def gram_coordinates(g11, g22, g12):
    """2-D coordinates of two vectors given their Gram data (batched).

    Returns (B, 2) arrays v1, v2 with v1^H v1 = g11, v1^H v2 = g12,
    v2^H v2 = g22; the first vector is real along the first axis.
    """
    g11 = np.asarray(g11, dtype=float)
    g22 = np.asarray(g22, dtype=float)
    g12 = np.asarray(g12, dtype=complex)
    r11 = np.sqrt(np.maximum(g11, 0.0))
    safe = r11 > 0
    a = np.where(safe, g12 / np.where(safe, r11, 1.0), 0.0)
    b2 = np.maximum(g22 - np.abs(a) ** 2, 0.0)
    v1 = np.stack([r11.astype(complex), np.zeros_like(r11, dtype=complex)], axis=-1)
    v2 = np.stack([a, np.sqrt(b2).astype(complex)], axis=-1)
    return v1, v2


def _outer(v: np.ndarray) -> np.ndarray:
    return v[..., :, None] * np.conj(v[..., None, :])


def _inner_sdp_data(v1: np.ndarray, v2: np.ndarray, power: float, tau, noise):
    """Assemble block data of the lifted problem for batched coordinates.

    v1, v2: (B, k) channel coordinates; tau scalar or (B,).
    Blocks: Z (k), Gamma (k), xi, s_mc1, s_mc2, s_pow.

    The data is canonicalized to unit channels and unit noise (the rates only
    depend on the per-direction SNR budget), which makes the solve invariant
    under joint rescaling of power and noise and keeps the SDP well scaled;
    the covariance matrices are mapped back by the returned unscale factor.
    """
    bsz, k = v1.shape
    tau = np.broadcast_to(np.asarray(tau, dtype=float), (bsz,))
    scale = np.sqrt(np.maximum(np.einsum("bi,bi->b", v1, np.conj(v1)).real,
                               np.einsum("bi,bi->b", v2, np.conj(v2)).real))
    scale = np.maximum(scale, 1e-150)
    v1 = v1 / scale[:, None]
    v2 = v2 / scale[:, None]
    # canonical problem: noise = 1, budget = per-unit-channel SNR
    snr = power * scale ** 2 / noise
    unscale = noise / scale ** 2

    h1h = _outer(v1)
    h2h = _outer(v2)
    eye = np.broadcast_to(np.eye(k, dtype=complex), (bsz, k, k))
    zk = np.zeros((bsz, k, k), dtype=complex)
    z1 = np.zeros((bsz, 1, 1), dtype=complex)
    o1 = np.ones((bsz, 1, 1), dtype=complex)

    def scal(vals):
        return np.asarray(vals, dtype=complex).reshape(bsz, 1, 1)

    c_blocks = [h1h, zk, o1, z1, z1, z1]
    # rows: denominator normalization, two multicast floors, power budget
    a_z = np.stack([h2h,
                    -tau[:, None, None] * h1h,
                    -tau[:, None, None] * h2h,
                    eye], axis=1)
    a_g = np.stack([zk, h1h, h2h, eye], axis=1)
    a_xi = np.stack([o1, scal(-tau), scal(-tau), scal(-snr)], axis=1)
    a_s1 = np.stack([z1, -o1, z1, z1], axis=1)
    a_s2 = np.stack([z1, z1, -o1, z1], axis=1)
    a_s3 = np.stack([z1, z1, z1, o1], axis=1)
    b = np.zeros((bsz, 4))
    b[:, 0] = 1.0
    blocks = (k, k, 1, 1, 1, 1)
    return blocks, c_blocks, [a_z, a_g, a_xi, a_s1, a_s2, a_s3], b, unscale


def solve_inner_gram_batch(g11, g22, g12, power: float, multicast_req,
                           noise: float, *, tol: float = 1e-9,
                           max_iter: int = 100):
    """Optimal inner objective for a batch of channel Gram triples.

    Returns (statuses, objectives, reduced) where ``objectives`` holds the
    linear-scale optimum 2**Rc and ``reduced`` carries (Z, Gamma, xi) in the
    2-D reduced coordinates for later recovery.
    """
    tau = 2.0 ** np.asarray(multicast_req, dtype=float) - 1.0
    v1, v2 = gram_coordinates(g11, g22, g12)
    blocks, c_blocks, a_blocks, b, unscale = _inner_sdp_data(v1, v2, power, tau, noise)
    statuses, objectives, x_out, _, _, gaps, _ = sdp.solve_sdp_batch(
        blocks, c_blocks, a_blocks, b, maximize=True, tol=tol, max_iter=max_iter)
    statuses = np.where(statuses == sdp.UNBOUNDED, NUMERICAL, statuses)
    u = unscale[:, None, None]
    reduced = (x_out[0] * u, x_out[1] * u, x_out[2][..., 0, 0].real)
    return statuses, objectives, reduced


def secrecy_objective_upper_bound(g11, g22, g12, power: float, noise: float,
                                  multicast_req: float = 0.0):
    """Cheap upper bound on the inner optimum over a batch of Gram triples.

    Two relaxations are combined; both have closed forms in the 2-D reduced
    space and the smaller one is returned.  Used to prune candidates in
    position searches.

    1. Budget relaxation: serving the floor needs common-stream power of at
       least tau*noise/min(g11, g22) even with perfect beamforming and no
       interference; with the remaining budget, the optimum is the top
       eigenvalue of a generalized Rayleigh quotient (nondecreasing in the
       budget, exact at zero requirement).

    2. Floor coupling: user 1's floor scales with the objective V itself
       (its confidential received power is the objective numerator), so
       Tr(Gamma) >= tau*noise*V/g11, while user 2's floor and the
       denominator normalization force Tr(Gamma) >= tau*noise/g22; pushing
       both through the power budget yields
       V <= max((1 + g11 P/noise)/(1+tau), min(1 + g11 P/noise - tau g11/g22,
       g11/g22)), which tracks the true decay in the requirement.
    """
    g11 = np.asarray(g11, dtype=float)
    g22 = np.asarray(g22, dtype=float)
    tau = 2.0 ** multicast_req - 1.0
    gmin = np.maximum(np.minimum(g11, g22), 1e-300)
    pc = np.maximum(power - tau * noise / gmin, 0.0)
    v1, v2 = gram_coordinates(g11, g22, g12)
    pc = pc[..., None, None]
    b1 = noise * np.broadcast_to(np.eye(2, dtype=complex), v1.shape[:-1] + (2, 2)) \
        + pc * _outer(v1)
    b2 = noise * np.broadcast_to(np.eye(2, dtype=complex), v2.shape[:-1] + (2, 2)) \
        + pc * _outer(v2)
    d1 = (b1[..., 0, 0] * b1[..., 1, 1] - b1[..., 0, 1] * b1[..., 1, 0]).real
    d2 = (b2[..., 0, 0] * b2[..., 1, 1] - b2[..., 0, 1] * b2[..., 1, 0]).real
    k = (b1[..., 0, 0] * b2[..., 1, 1] + b1[..., 1, 1] * b2[..., 0, 0]).real \
        - 2.0 * (b1[..., 0, 1] * np.conj(b2[..., 0, 1])).real
    disc = np.sqrt(np.maximum(k * k - 4.0 * d1 * d2, 0.0))
    pencil = (k + disc) / (2.0 * d2)

    top = 1.0 + g11 * power / noise
    g22_safe = np.maximum(g22, 1e-300)
    coupled = np.maximum(top / (1.0 + tau),
                         np.minimum(top - tau * g11 / g22_safe, g11 / g22_safe))
    coupled = np.maximum(coupled, 1.0)
    return np.minimum(pencil, coupled)


def _eig_desc(mat: np.ndarray):
    w, v = np.linalg.eigh(mat)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def _rank_ratio(eigvals: np.ndarray, scale: float) -> float:
    lead = eigvals[0]
    if lead <= 1e-14 * max(scale, 1.0):
        return 0.0
    if len(eigvals) == 1:
        return 0.0
    return float(max(eigvals[1], 0.0) / lead)


def _principal_beamformer(q: np.ndarray) -> tuple[np.ndarray, float]:
    w, v = _eig_desc(q)
    lead = max(float(w[0]), 0.0)
    vec = v[:, 0] * np.sqrt(lead)
    # deterministic global phase: largest component real nonnegative
    idx = int(np.argmax(np.abs(vec)))
    if np.abs(vec[idx]) > 0:
        vec = vec * np.exp(-1j * np.angle(vec[idx]))
    return vec, lead


def recover_reduced_solution(problem: InnerProblem, basis, z_red, g_red, xi,
                             objective, status, rel_gap=np.nan, iterations=0,
                             rank_tol: float = RANK_RATIO_TOL) -> InnerSolution:
    """Lift a reduced-coordinate SDP solution back to full antenna space."""
    n = len(problem.h1)
    sol = InnerSolution(status=status, objective=float(objective), xi=float(xi),
                        rel_gap=rel_gap, iterations=iterations)
    if status != OPTIMAL:
        return sol
    if basis is None:
        basis = np.eye(n, dtype=complex)
    z_red = np.asarray(z_red)
    g_red = np.asarray(g_red)
    lift = lambda m: basis @ m @ basis.conj().T
    sol.Z = lift(z_red)
    sol.Gamma = lift(g_red)
    xi = max(float(xi), 1e-300)
    sol.Qc = sol.Z / xi
    sol.Q0 = sol.Gamma / xi

    wz, vz = _eig_desc(z_red / xi)
    wg, vg = _eig_desc(g_red / xi)
    scale = max(problem.power, 1.0)
    sol.rank_ratio_Z = _rank_ratio(np.maximum(wz, 0.0), scale)
    sol.rank_ratio_Gamma = _rank_ratio(np.maximum(wg, 0.0), scale)
    wc_red, _ = _principal_beamformer(z_red / xi)
    w0_red, _ = _principal_beamformer(g_red / xi)
    sol.wc = basis @ wc_red
    sol.w0 = basis @ w0_red
    sol.rank_warning = (sol.rank_ratio_Z > rank_tol
                        or sol.rank_ratio_Gamma > rank_tol)
    return sol


def solve_inner(problem: InnerProblem, tol: float = 1e-9, *,
                reduce: bool = True, rank_tol: float = RANK_RATIO_TOL,
                max_iter: int = 100) -> InnerSolution:
    """Solve the fixed-placement problem and recover beamformers.

    The returned objective is on a linear scale (2**Rc); ``infeasible`` status
    marks a multicast requirement above the placement's multicast capacity and
    is an expected outcome, not an error.
    """
    h1, h2 = problem.h1, problem.h2
    if np.linalg.norm(h1) == 0.0 and np.linalg.norm(h2) == 0.0:
        # no channel at all: only the zero transmit strategy exists
        if problem.tau > 0:
            return InnerSolution(status=INFEASIBLE)
        n = len(h1)
        zero = np.zeros((n, n), dtype=complex)
        sol = InnerSolution(status=OPTIMAL, objective=1.0, xi=1.0,
                            Z=zero.copy(), Gamma=zero.copy(), Q0=zero.copy(),
                            Qc=zero.copy(), w0=np.zeros(n, complex),
                            wc=np.zeros(n, complex), rank_ratio_Z=0.0,
                            rank_ratio_Gamma=0.0, rel_gap=0.0)
        return sol

    if reduce:
        basis, v1, v2 = reduction_basis(h1, h2)
        v1 = v1[None, :]
        v2 = v2[None, :]
    else:
        basis = np.eye(len(h1), dtype=complex)
        v1 = h1[None, :]
        v2 = h2[None, :]

    blocks, c_blocks, a_blocks, b, unscale = _inner_sdp_data(
        v1, v2, problem.power, np.array([problem.tau]), problem.noise)
    statuses, objectives, x_out, _, _, gaps, iters = sdp.solve_sdp_batch(
        blocks, c_blocks, a_blocks, b, maximize=True, tol=tol, max_iter=max_iter)
    status = str(statuses[0])
    if status == sdp.UNBOUNDED:
        status = NUMERICAL
    u = float(unscale[0])
    return recover_reduced_solution(
        problem, basis, x_out[0][0] * u, x_out[1][0] * u,
        x_out[2][0, 0, 0].real, objectives[0], status,
        rel_gap=float(gaps[0]), iterations=iters, rank_tol=rank_tol)


def recover_beamformers(sol: InnerSolution):
    """Rank-one beamformers of an optimal solution as a (w0, wc) pair."""
    if sol.status != OPTIMAL:
        raise ValueError("beamformers exist only for optimal solutions")
    return sol.w0, sol.wc


def multicast_capacity_gram_batch(g11, g22, g12, power: float, noise: float,
                                  *, tol: float = 1e-9, max_iter: int = 100):
    """Max-min multicast rate over a batch of Gram triples.

    Returns (statuses, rates_bits, q_matrices) where rates are log2(1 + t/noise)
    for the optimal worst-user received power t.
    """
    v1, v2 = gram_coordinates(g11, g22, g12)
    bsz, k = v1.shape
    scale = np.sqrt(np.maximum(np.einsum("bi,bi->b", v1, np.conj(v1)).real,
                               np.einsum("bi,bi->b", v2, np.conj(v2)).real))
    scale = np.maximum(scale, 1e-150)
    v1s = v1 / scale[:, None]
    v2s = v2 / scale[:, None]

    h1h = _outer(v1s)
    h2h = _outer(v2s)
    eye = np.broadcast_to(np.eye(k, dtype=complex), (bsz, k, k))
    zk = np.zeros((bsz, k, k), dtype=complex)
    z1 = np.zeros((bsz, 1, 1), dtype=complex)
    o1 = np.ones((bsz, 1, 1), dtype=complex)

    # canonical form: unit channels and unit power budget
    c_blocks = [zk, o1, z1, z1, z1]
    a_q = np.stack([h1h, h2h, eye], axis=1)
    a_t = np.stack([-o1, -o1, z1], axis=1)
    a_u1 = np.stack([-o1, z1, z1], axis=1)
    a_u2 = np.stack([z1, -o1, z1], axis=1)
    a_u3 = np.stack([z1, z1, o1], axis=1)
    b = np.zeros((bsz, 3))
    b[:, 2] = 1.0
    statuses, objectives, x_out, _, _, _, _ = sdp.solve_sdp_batch(
        (k, 1, 1, 1, 1), c_blocks, [a_q, a_t, a_u1, a_u2, a_u3], b,
        maximize=True, tol=tol, max_iter=max_iter)
    statuses = np.where(statuses == sdp.UNBOUNDED, NUMERICAL, statuses)
    # undo the normalization: received power scales with P |h|^2
    t_val = np.maximum(objectives.real, 0.0) * power * scale ** 2
    rates = np.log2(1.0 + t_val / noise)
    return statuses, rates, x_out[0] * power

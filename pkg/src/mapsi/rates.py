"""Rate-pair evaluation and closed-form single-antenna optima.

Covers the basic secrecy/multicast rate formulas, the optimal power split for
a single transmit antenna, time-sharing baselines, and the two single-purpose
beamforming optima (secrecy-only via a generalized eigenproblem, multicast-only
via a small max-min SDP) used both as baselines and as oracles elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import inner
from .channel import ChannelRealization, element_response


class InfeasibleRequirementError(ValueError):
    """Multicast requirement exceeds what the channel can support."""


class DegenerateChannelError(ValueError):
    """Channel magnitude is zero where the formulas need it positive."""


@dataclass(frozen=True)
class PowerSplit:
    p0: float
    pc: float


def _check_dims(*vecs):
    length = {np.asarray(v).shape for v in vecs}
    if len(length) != 1:
        raise ValueError("all vectors must share one shape")


def secrecy_rate(h1, h2, wc, noise: float) -> float:
    """log-ratio secrecy rate; negative values are preserved for diagnostics."""
    h1 = np.asarray(h1, dtype=complex)
    h2 = np.asarray(h2, dtype=complex)
    wc = np.asarray(wc, dtype=complex)
    _check_dims(h1, h2, wc)
    if noise <= 0:
        raise ValueError("noise must be positive")
    num = noise + np.abs(np.vdot(h1, wc)) ** 2
    den = noise + np.abs(np.vdot(h2, wc)) ** 2
    # difference of logs keeps the swap antisymmetry exact
    return float(np.log2(num) - np.log2(den))


def multicast_rate(h1, h2, w0, wc, noise: float) -> float:
    """Worst-user rate of the common stream with the confidential one as interference."""
    h1 = np.asarray(h1, dtype=complex)
    h2 = np.asarray(h2, dtype=complex)
    w0 = np.asarray(w0, dtype=complex)
    wc = np.asarray(wc, dtype=complex)
    _check_dims(h1, h2, w0, wc)
    if noise <= 0:
        raise ValueError("noise must be positive")
    rates = []
    for h in (h1, h2):
        sig = np.abs(np.vdot(h, w0)) ** 2
        interf = np.abs(np.vdot(h, wc)) ** 2
        rates.append(np.log2(1.0 + sig / (noise + interf)))
    return float(min(rates))


def single_ma_power_allocation(h1: complex, h2: complex, power: float,
                               r_ms: float, noise: float) -> PowerSplit:
    """Optimal split between common and confidential power for scalar channels.

    The multicast constraint is met with equality at the weaker user and the
    rest of the budget goes to the confidential stream.
    """
    a2 = abs(h2) ** 2
    if a2 == 0.0:
        raise DegenerateChannelError("the weaker user's channel is zero")
    tau = 2.0 ** r_ms - 1.0
    p0 = tau * (power * a2 + noise) / ((tau + 1.0) * a2)
    if p0 > power * (1.0 + 1e-12):
        raise InfeasibleRequirementError(
            "multicast requirement exceeds the single-antenna capacity")
    p0 = min(p0, power)
    return PowerSplit(p0=p0, pc=power - p0)


def single_ma_secrecy_rate(h1: complex, h2: complex, power: float,
                           r_ms: float, noise: float) -> float:
    """Best secrecy rate at a fixed scalar channel pair under a multicast floor."""
    a1 = abs(h1) ** 2
    a2 = abs(h2) ** 2
    if a2 == 0.0:
        raise DegenerateChannelError("the weaker user's channel is zero")
    tau = 2.0 ** r_ms - 1.0
    if tau * noise > power * a2 * (1.0 + 1e-12):
        raise InfeasibleRequirementError(
            "multicast requirement exceeds the single-antenna capacity")
    head = (tau + 1.0) * noise * a2
    num = head + (power * a2 - tau * noise) * a1
    den = (noise + power * a2) * a2
    return float(np.log2(num / den))


def single_ma_position_search(channel: ChannelRealization, points: np.ndarray,
                              power: float, r_ms: float):
    """Exhaustive search of the best single-antenna position on a point set.

    Positions where user 1 is weaker than user 2 or where the requirement is
    infeasible cannot carry a positive secrecy rate and are skipped.
    Returns (position, rate); raises if no point is feasible.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or len(points) == 0:
        raise ValueError("need a nonempty (Q, 2) point set")
    e1 = element_response(points, channel.user1, channel.wavelength)
    e2 = element_response(points, channel.user2, channel.wavelength)
    a1 = np.abs(e1) ** 2
    a2 = np.abs(e2) ** 2
    noise = channel.noise_power
    tau = 2.0 ** r_ms - 1.0
    ok = (a1 >= a2) & (a2 > 0) & (tau * noise <= power * a2)
    if not np.any(ok):
        raise InfeasibleRequirementError("no feasible position on the grid")
    head = (tau + 1.0) * noise * a2
    with np.errstate(divide="ignore", invalid="ignore"):
        num = head + (power * a2 - tau * noise) * a1
        den = (noise + power * a2) * a2
        rate = np.where(ok, np.log2(num / den), -np.inf)
    best = int(np.argmax(rate))
    return points[best], float(rate[best])


def generalized_rayleigh_max(a_mat: np.ndarray, b_mat: np.ndarray,
                             resid_tol: float = 1e-10):
    """Largest generalized eigenpair of (A, B) with B Hermitian PD.

    Reduced to a standard Hermitian problem through the Cholesky factor of B;
    the residual ||A u - lam B u|| is checked against ``resid_tol`` scaled by
    the matrix norms.
    """
    a_mat = np.asarray(a_mat, dtype=complex)
    b_mat = np.asarray(b_mat, dtype=complex)
    chol = np.linalg.cholesky(b_mat)
    mid = np.linalg.solve(chol, a_mat)
    mid = np.linalg.solve(chol, mid.conj().T).conj().T
    vals, vecs = np.linalg.eigh(0.5 * (mid + mid.conj().T))
    lam = float(vals[-1])
    u = np.linalg.solve(chol.conj().T, vecs[:, -1])
    u = u / np.linalg.norm(u)
    resid = np.linalg.norm(a_mat @ u - lam * (b_mat @ u))
    scale = np.linalg.norm(a_mat) + abs(lam) * np.linalg.norm(b_mat)
    if resid > resid_tol * max(scale, 1.0):
        raise np.linalg.LinAlgError("generalized eigenpair residual too large")
    return lam, u


def secrecy_only_optimal(h1, h2, power: float, noise: float):
    """Best confidential-only beamformer at full power.

    Maximizes the ratio of the two users' noise-plus-signal terms over unit
    directions, i.e. the top generalized eigenvalue of the associated pencil.
    Returns (wc, rate_bits); the rate may be negative if user 2's channel
    dominates everywhere.
    """
    h1 = np.atleast_1d(np.asarray(h1, dtype=complex))
    h2 = np.atleast_1d(np.asarray(h2, dtype=complex))
    _check_dims(h1, h2)
    n = len(h1)
    a_mat = noise * np.eye(n) + power * np.outer(h1, h1.conj())
    b_mat = noise * np.eye(n) + power * np.outer(h2, h2.conj())
    lam, u = generalized_rayleigh_max(a_mat, b_mat)
    idx = int(np.argmax(np.abs(u)))
    u = u * np.exp(-1j * np.angle(u[idx])) if np.abs(u[idx]) > 0 else u
    return np.sqrt(power) * u, float(np.log2(lam))


def _two_form_beamformer(v1, v2, c1, c2):
    """Vector w with |v1^H w|^2 = c1, |v2^H w|^2 = c2 of minimal norm.

    The relative phase between the two matched responses is free; the minimal
    norm over that phase has a closed form.
    """
    g = np.stack([np.conj(v1), np.conj(v2)])
    w_a = np.linalg.solve(g, np.array([np.sqrt(c1), 0.0], dtype=complex))
    w_b = np.linalg.solve(g, np.array([0.0, np.sqrt(c2)], dtype=complex))
    cross = np.vdot(w_a, w_b)
    phase = np.exp(-1j * np.angle(cross)) * -1.0 if np.abs(cross) > 0 else 1.0
    return w_a + phase * w_b


def multicast_only_optimal(h1, h2, power: float, noise: float,
                           rank_tol: float = inner.RANK_RATIO_TOL):
    """Max-min common-stream beamformer via the two-user SDP.

    Returns (w0, rate_bits).  When the optimal covariance is not numerically
    rank-one (a tie between the users' directions), a rank-one solution
    matching both users' received powers is reconstructed in closed form.
    """
    h1 = np.atleast_1d(np.asarray(h1, dtype=complex))
    h2 = np.atleast_1d(np.asarray(h2, dtype=complex))
    _check_dims(h1, h2)
    basis, v1, v2 = inner.reduction_basis(h1, h2)
    if basis is None:
        raise DegenerateChannelError("both channels are zero")
    g11 = np.array([np.vdot(v1, v1).real])
    g22 = np.array([np.vdot(v2, v2).real])
    g12 = np.array([np.vdot(v1, v2)])
    statuses, rates_arr, q_mats = inner.multicast_capacity_gram_batch(
        g11, g22, g12, power, noise)
    if statuses[0] != inner.OPTIMAL:
        raise RuntimeError(f"multicast SDP failed with status {statuses[0]}")
    q = q_mats[0]
    rate = float(rates_arr[0])
    vals, vecs = np.linalg.eigh(q)
    order = np.argsort(vals)[::-1]
    vals = np.maximum(vals[order], 0.0)
    vecs = vecs[:, order]
    ratio = vals[1] / vals[0] if len(vals) > 1 and vals[0] > 0 else 0.0
    w_red = vecs[:, 0] * np.sqrt(vals[0])
    if ratio > rank_tol and len(v1) == 2:
        c1 = np.vdot(v1, q @ v1).real
        c2 = np.vdot(v2, q @ v2).real
        cand = _two_form_beamformer(v1, v2, c1, c2)
        if np.linalg.norm(cand) ** 2 <= power * (1.0 + 1e-9):
            w_red = cand
    # parallel channels reduce to one dimension; drop the unused coordinate
    w0 = basis @ w_red[: basis.shape[1]]
    idx = int(np.argmax(np.abs(w0)))
    if np.abs(w0[idx]) > 0:
        w0 = w0 * np.exp(-1j * np.angle(w0[idx]))
    return w0, rate


def time_sharing_points(rc_slot: float, r0_slot: float, alpha_grid) -> np.ndarray:
    """Rate pairs of a two-slot schedule: (R0, Rc) rows over the slot fractions."""
    alphas = np.asarray(alpha_grid, dtype=float)
    if np.any((alphas < 0) | (alphas > 1)):
        raise ValueError("slot fractions must lie in [0, 1]")
    return np.stack([(1.0 - alphas) * r0_slot, alphas * rc_slot], axis=1)


def single_ma_time_sharing_slots(h1: complex, h2: complex, power: float,
                                 noise: float) -> tuple[float, float]:
    """Per-slot rates for a fixed scalar channel: full-power secrecy slot and
    full-power multicast slot (worst user)."""
    a1 = abs(h1) ** 2
    a2 = abs(h2) ** 2
    rc = float(np.log2((noise + power * a1) / (noise + power * a2)))
    r0 = float(np.log2(1.0 + power * min(a1, a2) / noise))
    return rc, r0

"""Small dense semidefinite programming solver.

Solves batches of structurally identical problems

    min <C, X>  s.t.  <A_i, X> = b_i,  X in a product of Hermitian PSD cones,

via a homogeneous self-dual embedding with Nesterov-Todd scaling and
Mehrotra-style predictor-corrector steps.  Block sizes are tiny (<= 16) and
the number of constraints small, so everything is dense and vectorized across
the batch axis; no external conic solver is involved and runs are
bit-deterministic for identical input.

Infeasibility is detected through the self-dual ray (tau -> 0, kappa > 0)
together with the Farkas certificate sign, which is exactly what the callers
need to classify an unattainable multicast requirement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"
NUMERICAL = "numerical-failure"

_SIGMA_MIN = 1e-8
_STEP_FRAC = 0.98
# grades accepted when the iteration stalls short of the requested tolerance
_STALL_GAP = 1e-7
_STALL_FEAS = 1e-6


def hermitize(mat: np.ndarray) -> np.ndarray:
    """Average a matrix stack with its conjugate transpose."""
    return 0.5 * (mat + np.conj(np.swapaxes(mat, -1, -2)))


def _inv_psd(mat: np.ndarray) -> np.ndarray:
    """Inverse of a stack (..., s, s) of Hermitian PD matrices."""
    s = mat.shape[-1]
    if s == 1:
        return 1.0 / mat
    if s == 2:
        a = mat[..., 0, 0]
        b = mat[..., 0, 1]
        c = mat[..., 1, 0]
        d = mat[..., 1, 1]
        det = a * d - b * c
        out = np.empty_like(mat)
        out[..., 0, 0] = d / det
        out[..., 0, 1] = -b / det
        out[..., 1, 0] = -c / det
        out[..., 1, 1] = a / det
        return out
    return np.linalg.inv(mat)


def _sqrt_psd(mat: np.ndarray) -> np.ndarray:
    """Principal square root of a stack of Hermitian PSD matrices."""
    s = mat.shape[-1]
    if s == 1:
        return np.sqrt(mat)
    if s == 2:
        a = mat[..., 0, 0].real
        d = mat[..., 1, 1].real
        det = np.maximum(a * d - (mat[..., 0, 1] * mat[..., 1, 0]).real, 0.0)
        root = np.sqrt(det)
        denom = np.sqrt(np.maximum(a + d + 2.0 * root, 1e-300))
        out = mat.copy()
        out[..., 0, 0] += root
        out[..., 1, 1] += root
        return out / denom[..., None, None]
    w, v = np.linalg.eigh(hermitize(mat))
    w = np.sqrt(np.maximum(w, 0.0))
    return np.einsum("...ij,...j,...kj->...ik", v, w, np.conj(v))


def _nt_scaling(x: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Nesterov-Todd scaling point W with W S W = X, per block."""
    if x.shape[-1] == 1:
        return np.sqrt(x / s)
    s_half = _sqrt_psd(s)
    inner = _sqrt_psd(s_half @ x @ s_half)
    s_half_inv = _inv_psd(s_half)
    return hermitize(s_half_inv @ inner @ s_half_inv)


def _min_eig_herm(mat: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of a stack of Hermitian matrices; shape (..., k)."""
    s = mat.shape[-1]
    if s == 1:
        return mat[..., 0, 0].real
    if s == 2:
        tr = (mat[..., 0, 0] + mat[..., 1, 1]).real
        det = (mat[..., 0, 0] * mat[..., 1, 1]
               - mat[..., 0, 1] * mat[..., 1, 0]).real
        disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
        return 0.5 * (tr - disc)
    return np.linalg.eigvalsh(hermitize(mat))[..., 0]


def _min_eig_pencil(x: np.ndarray, dx: np.ndarray, xinv: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of X^{-1} dX per block; shape (..., k)."""
    s = x.shape[-1]
    if s == 1:
        return (dx[..., 0, 0] / x[..., 0, 0]).real
    prod = xinv @ dx
    if s == 2:
        tr = (prod[..., 0, 0] + prod[..., 1, 1]).real
        det = (prod[..., 0, 0] * prod[..., 1, 1]
               - prod[..., 0, 1] * prod[..., 1, 0]).real
        disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
        return 0.5 * (tr - disc)
    chol = np.linalg.cholesky(x)
    w = np.linalg.solve(chol, dx)
    w = np.conj(np.swapaxes(np.linalg.solve(chol, np.conj(np.swapaxes(w, -1, -2))), -1, -2))
    return np.linalg.eigvalsh(hermitize(w))[..., 0]


@dataclass
class SdpSolution:
    """Result of one solve; ``x`` follows the caller's block order."""

    status: str
    x: list[np.ndarray]
    y: np.ndarray
    objective: float
    dual_objective: float
    rel_gap: float
    iterations: int


class _Cone:
    """Batched data for one size class of blocks.

    Matrices live as (B, k, s, s) stacks with a companion flattened view
    (B, k*s*s) so that trace inner products and the Schur assembly go through
    batched BLAS matmuls instead of multi-index einsums.
    """

    def __init__(self, size: int, indices: list[int]):
        self.size = size
        self.indices = indices
        self.dim = size * size * len(indices)

    def stack(self, blocks, extra_axis: bool) -> np.ndarray:
        ax = 2 if extra_axis else 1
        return np.ascontiguousarray(
            np.stack([np.asarray(blocks[j], dtype=complex) for j in self.indices], axis=ax))


def _group_blocks(sizes: Sequence[int]) -> list[_Cone]:
    classes: dict[int, list[int]] = {}
    for j, s in enumerate(sizes):
        classes.setdefault(int(s), []).append(j)
    return [_Cone(s, idx) for s, idx in sorted(classes.items())]


def _flat(mat: np.ndarray) -> np.ndarray:
    """(B, ..., k, s, s) -> (B, ..., k*s*s) view-ish reshape."""
    return mat.reshape(*mat.shape[:-3], -1)


def _inner(u: list[np.ndarray], v: list[np.ndarray]) -> np.ndarray:
    """Sum over classes of Re tr(U V) for Hermitian stacks (B, k, s, s)."""
    out = 0.0
    for a, b in zip(u, v):
        out = out + (_flat(a) * np.conj(_flat(b))).real.sum(axis=-1)
    return out


def _inner_rows(a_flat: list[np.ndarray], v: list[np.ndarray]) -> np.ndarray:
    """Re tr(A_i V): (B, m, D) against (B, k, s, s) per class."""
    out = 0.0
    for af, vm in zip(a_flat, v):
        out = out + (af @ np.conj(_flat(vm))[..., None]).real[..., 0]
    return out


def _adjoint(a_flat: list[np.ndarray], shapes, y: np.ndarray) -> list[np.ndarray]:
    out = []
    for af, shape in zip(a_flat, shapes):
        vec = np.swapaxes(af, 1, 2) @ y[..., None].astype(complex)
        out.append(vec[..., 0].reshape(shape))
    return out


def solve_sdp_batch(
    block_sizes: Sequence[int],
    c_blocks: Sequence[np.ndarray],
    a_blocks: Sequence[np.ndarray],
    b: np.ndarray,
    *,
    maximize: bool = False,
    tol: float = 1e-9,
    feas_tol: float = 1e-8,
    max_iter: int = 100,
):
    """Solve a batch of identically structured SDPs.

    Arguments
    ---------
    block_sizes : per-block matrix orders, e.g. (2, 2, 1, 1, 1, 1)
    c_blocks    : list over blocks of (B, s, s) Hermitian cost matrices
    a_blocks    : list over blocks of (B, m, s, s) Hermitian constraint matrices
    b           : (B, m) right-hand sides

    Returns
    -------
    statuses (B,), objectives (B,), x blocks (caller order), y (B, m),
    dual objectives (B,), relative gaps (B,), iterations used.
    """
    b = np.asarray(b, dtype=float)
    if b.ndim != 2:
        raise ValueError("b must have shape (B, m)")
    nb, m = b.shape
    cones = _group_blocks(block_sizes)
    nu = int(sum(block_sizes))

    c = [cone.stack(c_blocks, extra_axis=False) for cone in cones]
    a = [cone.stack(a_blocks, extra_axis=True) for cone in cones]
    if maximize:
        c = [-cm for cm in c]

    # per-row scaling, then b/c scaling to O(1)
    a_flat = [_flat(am) for am in a]   # (B, m, D_j)
    row_norm = np.zeros((nb, m))
    for af in a_flat:
        row_norm += (np.abs(af) ** 2).sum(axis=2)
    row_scale = np.maximum(np.sqrt(row_norm), 1e-12)
    a = [am / row_scale[:, :, None, None, None] for am in a]
    a_flat = [_flat(am) for am in a]
    b_rowed = b / row_scale
    s_b = 1.0 + np.max(np.abs(b_rowed), axis=1)
    s_c = 1.0 + np.sqrt(sum((np.abs(_flat(cm)) ** 2).sum(axis=1) for cm in c))
    b_hat = b_rowed / s_b[:, None]
    c_hat = [cm / s_c[:, None, None, None] for cm in c]
    c_hat_flat = [_flat(cm) for cm in c_hat]

    def eye_like(cm):
        k, s = cm.shape[1], cm.shape[2]
        out = np.zeros((nb, k, s, s), dtype=complex)
        idx = np.arange(s)
        out[:, :, idx, idx] = 1.0
        return out

    eyes = [eye_like(cm) for cm in c_hat]
    shapes = [e.shape for e in eyes]
    x = [e.copy() for e in eyes]
    s = [e.copy() for e in eyes]
    y = np.zeros((nb, m))
    tau = np.ones(nb)
    kappa = np.ones(nb)
    # solutions are snapshotted when a problem freezes so that later batch
    # arithmetic on the working iterate can never corrupt or overflow them
    x_final = [e.copy() for e in eyes]
    y_final = np.zeros((nb, m))
    tau_final = np.ones(nb)

    statuses = np.full(nb, NUMERICAL, dtype=object)
    active = np.ones(nb, dtype=bool)
    iterations = 0
    rel_gap_out = np.full(nb, np.inf)
    mu_prev = np.full(nb, np.inf)
    stall = np.zeros(nb, dtype=int)

    norm_b = 1.0 + np.max(np.abs(b_hat), axis=1) if m else np.ones(nb)
    norm_c = np.ones(nb)
    for cm in c_hat_flat:
        if cm.size:
            norm_c = np.maximum(norm_c, 1.0 + np.abs(cm).max(axis=1))
    mu0 = 1.0

    for it in range(max_iter):
        iterations = it + 1
        was_active = active.copy()

        mu = (_inner(x, s) + tau * kappa) / (nu + 1.0)

        r_p = _inner_rows(a_flat, x) - b_hat * tau[:, None]
        at_y = _adjoint(a_flat, shapes, y)
        r_d = [cm * tau[:, None, None, None] - aty - sm for cm, aty, sm in zip(c_hat, at_y, s)]
        c_x = _inner(c_hat, x)
        b_y = np.einsum("bm,bm->b", b_hat, y)
        r_g = b_y - c_x - kappa

        pobj = c_x / tau
        dobj = b_y / tau
        gap = _inner(x, s) / (tau * tau)
        rel_gap = gap / (1.0 + np.abs(pobj) + np.abs(dobj))
        rel_gap_out = np.where(active, rel_gap, rel_gap_out)
        p_res = np.max(np.abs(r_p), axis=1) / (tau * norm_b) if m else np.zeros(nb)
        d_res = np.zeros(nb)
        for rm in r_d:
            if rm.size:
                d_res = np.maximum(d_res, np.abs(_flat(rm)).max(axis=1))
        d_res = d_res / (tau * norm_c)

        conv = active & (rel_gap <= tol) & (p_res <= feas_tol) & (d_res <= feas_tol)
        statuses[conv] = OPTIMAL
        active &= ~conv

        ray = active & (tau <= 1e-8 * np.maximum(1.0, kappa)) & (mu <= 1e-8 * mu0)
        if np.any(ray):
            pin = ray & (b_y > 1e-12)
            dub = ray & ~pin & (c_x < -1e-12)
            statuses[pin] = INFEASIBLE
            statuses[dub] = UNBOUNDED
            statuses[ray & ~pin & ~dub] = NUMERICAL
            active &= ~ray

        # members whose cone iterate degenerated beyond any float64 rescue
        lam_floor = np.full(nb, np.inf)
        for xm, sm in zip(x, s):
            lam_floor = np.minimum(lam_floor, _min_eig_herm(xm).min(axis=1))
            lam_floor = np.minimum(lam_floor, _min_eig_herm(sm).min(axis=1))

        # late-stage stall or an exhausted barrier: conditioning of the Schur
        # system (~1/mu^2) stops progress near machine precision, and a
        # residual can plateau a hair above the target while mu keeps
        # shrinking; both end states are graded with the looser thresholds
        stall = np.where(active & (mu > 0.8 * mu_prev), stall + 1, 0)
        mu_prev = np.where(active, mu, mu_prev)
        stalled = active & ((stall >= 6) | (mu <= 1e-14 * mu0)
                            | (lam_floor <= 1e-250))
        if np.any(stalled):
            ok = stalled & (rel_gap <= _STALL_GAP) & (p_res <= _STALL_FEAS) & (d_res <= _STALL_FEAS)
            statuses[ok] = OPTIMAL
            statuses[stalled & ~ok] = NUMERICAL
            active &= ~stalled

        blown = active & ~(np.isfinite(mu) & np.isfinite(tau) & np.isfinite(kappa)
                           & np.isfinite(c_x) & np.isfinite(b_y)
                           & np.isfinite(lam_floor) & (lam_floor > 1e-280))
        statuses[blown] = NUMERICAL
        active &= ~blown

        frozen = was_active & ~active
        if np.any(frozen):
            for j in range(len(cones)):
                x_final[j][frozen] = x[j][frozen]
                x[j][frozen] = eyes[j][frozen]
                s[j][frozen] = eyes[j][frozen]
            y_final[frozen] = y[frozen]
            y[frozen] = 0.0
            tau_final[frozen] = tau[frozen]
            tau[frozen] = 1.0
            kappa[frozen] = 1.0
        if not np.any(active):
            break

        s_inv = [_inv_psd(sm) for sm in s]
        x_inv = [_inv_psd(xm) for xm in x]

        # Nesterov-Todd scaling and the Schur pieces shared by the direction
        # solves of this iteration; the NT linearization of complementarity is
        #   dX + W dS W = sigma*mu*S^{-1} - X - Corr
        # with Corr the Mehrotra term H(dX_aff dS_aff W).
        w_nt = [_nt_scaling(x[j], s[j]) for j in range(len(cones))]
        big_m = np.zeros((nb, m, m))
        f_c = np.zeros((nb, m))
        f_rd = np.zeros((nb, m))
        fcc = np.zeros(nb)
        fcrd = np.zeros(nb)
        c_s = _inner(c_hat, s_inv)
        a1 = _inner_rows(a_flat, s_inv)
        a2 = _inner_rows(a_flat, x)
        for j in range(len(cones)):
            wj, aj, cj, rdj = w_nt[j], a[j], c_hat[j], r_d[j]
            waw = wj[:, None] @ aj @ wj[:, None]
            waw_flat = _flat(waw)
            big_m += (a_flat[j] @ np.conj(np.swapaxes(waw_flat, 1, 2))).real
            wcw_flat = _flat(wj @ cj @ wj)
            f_c += (a_flat[j] @ np.conj(wcw_flat)[..., None]).real[..., 0]
            wrdw_flat = _flat(wj @ rdj @ wj)
            f_rd += (a_flat[j] @ np.conj(wrdw_flat)[..., None]).real[..., 0]
            fcc += (wcw_flat * np.conj(c_hat_flat[j])).real.sum(axis=1)
            fcrd += (wrdw_flat * np.conj(c_hat_flat[j])).real.sum(axis=1)
        kkt = np.zeros((nb, m + 1, m + 1))
        kkt[:, :m, :m] = big_m
        kkt[:, :m, m] = -(f_c + b_hat)
        kkt[:, m, :m] = b_hat - f_c
        kkt[:, m, m] = fcc + kappa / tau
        # inactive or corrupted problems must not poison the batched solve
        neutral = ~active | ~np.isfinite(kkt).all(axis=(1, 2))
        if np.any(neutral):
            kkt[neutral] = np.eye(m + 1)

        def direction(sigma_mu, corr, corr_tk):
            f_corr = np.zeros((nb, m))
            c_corr = np.zeros(nb)
            if corr is not None:
                for j in range(len(cones)):
                    corr_flat = _flat(corr[j])
                    f_corr += (a_flat[j] @ np.conj(corr_flat)[..., None]).real[..., 0]
                    c_corr += (corr_flat * np.conj(c_hat_flat[j])).real.sum(axis=1)
            g_t = sigma_mu - tau * kappa - corr_tk
            rhs = np.zeros((nb, m + 1))
            rhs[:, :m] = -r_p - sigma_mu[:, None] * a1 + a2 + f_rd + f_corr
            rhs[:, m] = (-r_g + sigma_mu * c_s - c_x - fcrd - c_corr + g_t / tau)
            rhs[neutral] = 0.0
            rhs[~np.isfinite(rhs)] = 0.0
            try:
                sol = np.linalg.solve(kkt, rhs[..., None])[..., 0]
            except np.linalg.LinAlgError:
                ridge = 1e-12 * (1.0 + np.abs(kkt).max(axis=(1, 2)))
                sol = np.linalg.solve(kkt + ridge[:, None, None] * np.eye(m + 1),
                                      rhs[..., None])[..., 0]
            dy = sol[:, :m]
            dtau = sol[:, m]

            daty = _adjoint(a_flat, shapes, dy)
            ds = [cm * dtau[:, None, None, None] - dam + rdm
                  for cm, dam, rdm in zip(c_hat, daty, r_d)]
            dx = []
            for j in range(len(cones)):
                t = (sigma_mu[:, None, None, None] * s_inv[j] - x[j]
                     - w_nt[j] @ ds[j] @ w_nt[j])
                if corr is not None:
                    t = t - corr[j]
                dx.append(hermitize(t))
            dkappa = (g_t - kappa * dtau) / tau

            # a numerically dead Schur system can emit an astronomically large
            # or non-finite direction; zero it so the member simply stalls
            # (and is then classified) instead of overflowing the arithmetic
            dmax = np.maximum(np.abs(dtau), np.abs(dkappa))
            if m:
                dmax = np.maximum(dmax, np.abs(dy).max(axis=1))
            for dxm, dsm in zip(dx, ds):
                dmax = np.maximum(dmax, np.abs(_flat(dxm)).max(axis=1))
                dmax = np.maximum(dmax, np.abs(_flat(dsm)).max(axis=1))
            dead = ~np.isfinite(dmax) | (dmax > 1e60)
            if np.any(dead):
                for j in range(len(cones)):
                    dx[j][dead] = 0.0
                    ds[j][dead] = 0.0
                dy[dead] = 0.0
                dtau[dead] = 0.0
                dkappa[dead] = 0.0
            return dx, dy, ds, dtau, dkappa

        def max_step(dx, ds, dtau, dkappa):
            alpha = np.full(nb, np.inf)
            growth = np.zeros(nb)
            for j in range(len(cones)):
                lx = _min_eig_pencil(x[j], dx[j], x_inv[j])
                ls = _min_eig_pencil(s[j], ds[j], s_inv[j])
                worst = np.minimum(lx.min(axis=1), ls.min(axis=1))
                with np.errstate(divide="ignore"):
                    alpha = np.minimum(alpha, np.where(
                        worst < 0, -1.0 / np.minimum(worst, -1e-300), np.inf))
                growth = np.maximum(growth, np.abs(_flat(dx[j])).max(axis=1))
                growth = np.maximum(growth, np.abs(_flat(ds[j])).max(axis=1))
            with np.errstate(divide="ignore", invalid="ignore"):
                alpha = np.minimum(alpha, np.where(dtau < 0, -tau / dtau, np.inf))
                alpha = np.minimum(alpha, np.where(dkappa < 0, -kappa / dkappa, np.inf))
            # a near-singular Schur system can emit a huge direction that never
            # crosses the cone boundary; cap growth per step instead
            xnorm = np.zeros(nb)
            for xm, sm in zip(x, s):
                xnorm = np.maximum(xnorm, np.abs(_flat(xm)).max(axis=1))
                xnorm = np.maximum(xnorm, np.abs(_flat(sm)).max(axis=1))
            cap = 1e4 * (1.0 + xnorm) / (1.0 + growth)
            alpha = np.minimum(alpha, np.maximum(cap, 1e-12))
            alpha = np.where(np.isnan(alpha), 0.0, alpha)
            return alpha

        # predictor (affine scaling)
        zero = np.zeros(nb)
        dx_a, dy_a, ds_a, dtau_a, dkappa_a = direction(zero, None, zero)
        alpha_a = np.minimum(1.0, max_step(dx_a, ds_a, dtau_a, dkappa_a))
        x_aff = [xm + alpha_a[:, None, None, None] * dm for xm, dm in zip(x, dx_a)]
        s_aff = [sm + alpha_a[:, None, None, None] * dm for sm, dm in zip(s, ds_a)]
        mu_aff = (_inner(x_aff, s_aff)
                  + (tau + alpha_a * dtau_a) * (kappa + alpha_a * dkappa_a)) / (nu + 1.0)
        ratio = np.clip(mu_aff / np.maximum(mu, 1e-300), 0.0, 1.0)
        expon = np.maximum(1.0, 3.0 * alpha_a ** 2)
        sigma = np.clip(ratio ** expon, _SIGMA_MIN, 0.99)

        # corrector with Mehrotra second-order term mapped through the scaling
        corr = [hermitize(dxm @ dsm @ wj) for dxm, dsm, wj in zip(dx_a, ds_a, w_nt)]
        corr_tk = dtau_a * dkappa_a
        dx, dy, ds, dtau, dkappa = direction(sigma * mu, corr, corr_tk)
        alpha_c = max_step(dx, ds, dtau, dkappa)

        # if the second-order term hurts the step, fall back to pure centering
        bad = active & (alpha_c < 0.5 * np.minimum(1.0, alpha_a))
        if np.any(bad):
            dx_c, dy_c, ds_c, dtau_c, dkappa_c = direction(sigma * mu, None, zero)
            alpha_p = max_step(dx_c, ds_c, dtau_c, dkappa_c)
            swap = bad & (alpha_p > alpha_c)
            sw = swap[:, None, None, None]
            dx = [np.where(sw, dm_c, dm) for dm_c, dm in zip(dx_c, dx)]
            ds = [np.where(sw, dm_c, dm) for dm_c, dm in zip(ds_c, ds)]
            dy = np.where(swap[:, None], dy_c, dy)
            dtau = np.where(swap, dtau_c, dtau)
            dkappa = np.where(swap, dkappa_c, dkappa)
            alpha_c = np.where(swap, alpha_p, alpha_c)

        gamma = np.where(alpha_c > 0.8, _STEP_FRAC, 0.9)
        alpha = np.minimum(1.0, gamma * alpha_c)
        alpha = np.where(active, alpha, 0.0)

        x = [hermitize(xm + alpha[:, None, None, None] * dm) for xm, dm in zip(x, dx)]
        s = [hermitize(sm + alpha[:, None, None, None] * dm) for sm, dm in zip(s, ds)]
        y = y + alpha[:, None] * dy
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa

        # the embedding is homogeneous: renormalize runaway iterates (e.g. on
        # an infeasibility ray) so later arithmetic cannot overflow
        theta = np.maximum(tau, kappa)
        for xm, sm in zip(x, s):
            theta = np.maximum(theta, np.abs(_flat(xm)).max(axis=1))
            theta = np.maximum(theta, np.abs(_flat(sm)).max(axis=1))
        if m:
            theta = np.maximum(theta, np.abs(y).max(axis=1))
        big = active & (theta > 1e8)
        if np.any(big):
            scale = np.where(big, theta, 1.0)
            x = [xm / scale[:, None, None, None] for xm in x]
            s = [sm / scale[:, None, None, None] for sm in s]
            y = y / scale[:, None]
            tau = tau / scale
            kappa = kappa / scale

    if np.any(active):
        for j in range(len(cones)):
            x_final[j][active] = x[j][active]
        y_final[active] = y[active]
        tau_final[active] = tau[active]

    # unscale primal/dual back to the caller's data
    sign = -1.0 if maximize else 1.0
    scale_x = s_b / tau_final
    objectives = sign * (_inner(c_hat, x_final) / tau_final) * s_b * s_c
    dual_objectives = sign * (np.einsum("bm,bm->b", b_hat, y_final) / tau_final) * s_b * s_c
    x_out: list[np.ndarray | None] = [None] * len(block_sizes)
    for cone, xm in zip(cones, x_final):
        for pos, j in enumerate(cone.indices):
            x_out[j] = xm[:, pos] * scale_x[:, None, None]
    y_out = (y_final / tau_final[:, None]) * (s_c[:, None] / row_scale) * sign
    return statuses, objectives, x_out, y_out, dual_objectives, rel_gap_out, iterations


def solve_sdp(
    block_sizes: Sequence[int],
    c_blocks: Sequence[np.ndarray],
    a_blocks: Sequence[np.ndarray],
    b: np.ndarray,
    *,
    maximize: bool = False,
    tol: float = 1e-9,
    feas_tol: float = 1e-8,
    max_iter: int = 100,
) -> SdpSolution:
    """Single-problem convenience wrapper around the batched solver.

    ``c_blocks[j]`` is (s_j, s_j); ``a_blocks[i][j]`` is the j-th block of the
    i-th constraint; ``b`` has length m.
    """
    b = np.atleast_1d(np.asarray(b, dtype=float))
    m = len(b)
    c_in = [np.asarray(cb, dtype=complex)[None] for cb in c_blocks]
    a_in = []
    for j in range(len(block_sizes)):
        rows = np.stack([np.asarray(a_blocks[i][j], dtype=complex) for i in range(m)], axis=0)
        a_in.append(rows[None])
    statuses, objectives, x_out, y_out, dual_obj, gaps, iters = solve_sdp_batch(
        block_sizes, c_in, a_in, b[None], maximize=maximize, tol=tol,
        feas_tol=feas_tol, max_iter=max_iter,
    )
    return SdpSolution(
        status=str(statuses[0]),
        x=[xb[0] for xb in x_out],
        y=y_out[0],
        objective=float(objectives[0]),
        dual_objective=float(dual_obj[0]),
        rel_gap=float(gaps[0]),
        iterations=iters,
    )

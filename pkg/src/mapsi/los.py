"""Line-of-sight placement asymptotics for steering-vector beamformers.

With a single path per user and steering-vector beamformers, every beam gain
of an equally spaced collinear array is a Dirichlet-kernel expression in one
scalar residual per (beam, user) pair.  For incommensurate residuals an
integer spacing exists that drives the three wanted gains to the array size
and the eavesdropper's confidential gain to zero simultaneously; this module
finds such spacings by direct scan and evaluates the resulting closed-form
rate pairs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import array_response


@dataclass(frozen=True)
class LosScenario:
    """Two user directions, two beam directions, per-user gains."""

    theta1: float
    phi1: float
    theta2: float
    phi2: float
    theta_c: float
    phi_c: float
    theta_0: float
    phi_0: float
    beta1: complex
    beta2: complex
    wavelength: float

    def __post_init__(self):
        if self.wavelength <= 0:
            raise ValueError("wavelength must be positive")
        thetas = (self.theta_0, self.theta_c, self.theta1, self.theta2)
        if self.theta_0 == self.theta_c or any(self.theta_c == t for t in thetas[2:]) \
                or any(self.theta_0 == t for t in thetas[2:]):
            raise ValueError("beam elevations must differ from each other and the users'")

    def user_angles(self, k: int) -> tuple[float, float]:
        return (self.theta1, self.phi1) if k == 1 else (self.theta2, self.phi2)

    def beam_angles(self, which: str) -> tuple[float, float]:
        return (self.theta_c, self.phi_c) if which == "c" else (self.theta_0, self.phi_0)


@dataclass(frozen=True)
class ResidualSet:
    """Spatial-frequency offsets between each beam and each user, in 1/m."""

    r_c1: float
    r_c2: float
    r_01: float
    r_02: float

    def as_array(self) -> np.ndarray:
        return np.array([self.r_c1, self.r_c2, self.r_01, self.r_02])


def random_scenario(rng: np.random.Generator, wavelength: float) -> LosScenario:
    th = rng.uniform(0.0, np.pi, size=4)
    ph = rng.uniform(0.0, np.pi, size=4)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    return LosScenario(theta1=th[0], phi1=ph[0], theta2=th[1], phi2=ph[1],
                       theta_c=th[2], phi_c=ph[2], theta_0=th[3], phi_0=ph[3],
                       beta1=complex(b[0]), beta2=complex(b[1]),
                       wavelength=wavelength)


def _freq(theta_k, phi_k, theta_i, phi_i, wavelength) -> float:
    return (np.sin(theta_k) * np.cos(phi_k) - np.sin(theta_i) * np.cos(phi_i)
            + np.cos(theta_k) - np.cos(theta_i)) / wavelength


def residuals(s: LosScenario) -> ResidualSet:
    return ResidualSet(
        r_c1=_freq(s.theta1, s.phi1, s.theta_c, s.phi_c, s.wavelength),
        r_c2=_freq(s.theta2, s.phi2, s.theta_c, s.phi_c, s.wavelength),
        r_01=_freq(s.theta1, s.phi1, s.theta_0, s.phi_0, s.wavelength),
        r_02=_freq(s.theta2, s.phi2, s.theta_0, s.phi_0, s.wavelength),
    )


def ula_beam_gain(d: float, n: int, r: float) -> float:
    """Normalized coherent gain of an n-element array with spacing d at offset r.

    Equals |sum_k exp(j 2 pi k r d)|^2 / n, so it peaks at n when r*d is an
    integer; the removable singularities return the analytic limit.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    x = 2.0 * np.pi * r * d
    den = 1.0 - np.cos(x)
    if abs(den) < 1e-12:
        # near a grating peak both numerator and denominator vanish ~ x^2
        return float(n)
    num = 1.0 - np.cos(n * x)
    return float(num / (n * den))


def find_spacing(rs: ResidualSet, n: int, epsilon: float, unit: float,
                 d_max: int, chunk: int = 1 << 22):
    """Smallest integer spacing multiple aligning three beams and nulling one.

    Scans d = 1..d_max for phases (2 pi r d unit mod 2 pi) meeting, for the
    three aligned pairs, both the base and n-fold phase in (0, epsilon); for
    the nulled pair the n-fold phase in (0, epsilon) with the base phase
    within epsilon/2 of pi.  Returns (d, worst_deviation) or None; absence is
    a value, not an error.
    """
    if not 0 < epsilon < 2.0 * np.pi:
        raise ValueError("epsilon must lie in (0, 2*pi)")
    if unit <= 0 or d_max < 1:
        raise ValueError("unit must be positive and d_max >= 1")
    aligned = np.array([rs.r_c1, rs.r_01, rs.r_02]) * unit
    nulled = rs.r_c2 * unit
    two_pi = 2.0 * np.pi

    start = 1
    while start <= d_max:
        stop = min(start + chunk, d_max + 1)
        d = np.arange(start, stop, dtype=float)
        # cheap prefilter on one aligned pair before the full check
        y0 = (aligned[0] * d) % 1.0 * two_pi
        cand = (y0 > 0.0) & (y0 < epsilon)
        if np.any(cand):
            dc = d[cand]
            ok = np.ones(len(dc), dtype=bool)
            devs = np.zeros(len(dc))
            for a in aligned:
                y = (a * dc) % 1.0 * two_pi
                yn = (a * n * dc) % 1.0 * two_pi
                ok &= (y > 0.0) & (y < epsilon) & (yn > 0.0) & (yn < epsilon)
                devs = np.maximum(devs, np.where(ok, np.maximum(y, yn), 0.0))
            yn = (nulled * n * dc) % 1.0 * two_pi
            y = (nulled * dc) % 1.0 * two_pi
            ok &= (yn > 0.0) & (yn < epsilon)
            ok &= np.abs(y - np.pi) < epsilon / 2.0
            devs = np.maximum(devs, np.where(ok, np.maximum(yn, 2.0 * np.abs(y - np.pi)), 0.0))
            if np.any(ok):
                hit = int(np.argmax(ok))
                return int(dc[hit]), float(devs[hit])
        start = stop
    return None


def lemma_apv(d: int, unit: float, n: int, d_min: float | None = None) -> np.ndarray:
    """Equally spaced collinear placement matching the residual definition.

    The residuals combine the azimuthal term with the elevation cosine, which
    is the per-element phase slope of a line with equal x and y increments;
    antenna k sits at [k*d*unit, k*d*unit] so the realized beam gains equal
    the closed-form expression exactly.
    """
    if d < 1:
        raise ValueError("spacing multiple must be a positive integer")
    if d_min is not None and d * unit * np.sqrt(2.0) < d_min:
        raise ValueError("spacing below the minimum antenna separation")
    x = np.arange(n) * d * unit
    return np.stack([x, x], axis=1)


def beam_gains(apv: np.ndarray, s: LosScenario) -> dict[str, float]:
    """The four steering-beam gains g_{i,k} of a placement, normalized to n."""
    n = len(apv)
    out = {}
    for i in ("c", "0"):
        w = array_response(apv, *s.beam_angles(i), s.wavelength) / np.sqrt(n)
        for k in (1, 2):
            a = array_response(apv, *s.user_angles(k), s.wavelength)
            out[f"g_{i}{k}"] = float(np.abs(np.vdot(w, a)) ** 2)
    return out


def closed_form_rates(pc_tilde: float, p0_tilde: float, beta1: complex,
                      beta2: complex, n: int, noise: float) -> tuple[float, float]:
    """Rate pair (Rc, R0) of the ideal aligned/nulled beam-gain pattern."""
    if pc_tilde < 0 or p0_tilde < 0:
        raise ValueError("powers must be nonnegative")
    a1 = abs(beta1) ** 2
    a2 = abs(beta2) ** 2
    rc = np.log2(1.0 + pc_tilde * n * a1 / noise)
    r01 = np.log2(1.0 + p0_tilde * n * a1 / (noise + pc_tilde * n * a1))
    r02 = np.log2(1.0 + p0_tilde * n * a2 / noise)
    return float(rc), float(min(r01, r02))


def power_mapping(pc: float, total_power: float, wc: np.ndarray,
                  apv: np.ndarray, s: LosScenario) -> tuple[float, float]:
    """Map a (power, beamformer) pair onto the aligned-pattern power split.

    The confidential share is scaled by the realized beam gain toward user 1
    over its maximum n; the remainder of the budget carries the common stream.
    """
    n = len(apv)
    a1 = array_response(apv, s.theta1, s.phi1, s.wavelength)
    pc_t = pc * np.abs(np.vdot(wc, a1)) ** 2 / n
    pc_t = min(pc_t, total_power)
    return float(pc_t), float(total_power - pc_t)


def achieved_rates(apv: np.ndarray, s: LosScenario, wc: np.ndarray,
                   w0: np.ndarray, pc: float, p0: float, noise: float) -> tuple[float, float]:
    """Rate pair of explicit unit beamformers and powers under pure LoS channels."""
    a1 = array_response(apv, s.theta1, s.phi1, s.wavelength)
    a2 = array_response(apv, s.theta2, s.phi2, s.wavelength)
    b1 = abs(s.beta1) ** 2
    b2 = abs(s.beta2) ** 2
    qc1 = pc * b1 * np.abs(np.vdot(wc, a1)) ** 2
    qc2 = pc * b2 * np.abs(np.vdot(wc, a2)) ** 2
    q01 = p0 * b1 * np.abs(np.vdot(w0, a1)) ** 2
    q02 = p0 * b2 * np.abs(np.vdot(w0, a2)) ** 2
    rc = np.log2((noise + qc1) / (noise + qc2))
    r0 = min(np.log2(1.0 + q01 / (noise + qc1)),
             np.log2(1.0 + q02 / (noise + qc2)))
    return float(rc), float(r0)

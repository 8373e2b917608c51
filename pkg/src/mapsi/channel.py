"""Field-response channel synthesis for a planar movable-antenna transmitter.

Each user's channel is a sum over propagation paths of a complex gain times a
position-dependent phase, so the channel vector is an explicit function of the
antenna position vector (APV).  All functions here are pure; randomness enters
only through explicitly derived substreams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0


def dbm_to_watts(dbm: float) -> float:
    """Convert a dBm figure to watts."""
    return 10.0 ** (dbm / 10.0) * 1e-3


@dataclass(frozen=True)
class ScenarioParams:
    """Physical parameters of the simulated downlink."""

    carrier_freq: float = 5e9
    tx_power_dbm: float = 41.0
    noise_dbm: float = -80.0
    num_paths: int = 7
    pathloss_exponent: float = 2.8
    link_distance: float = 70.0

    def __post_init__(self):
        if self.carrier_freq <= 0 or self.link_distance <= 0:
            raise ValueError("carrier frequency and link distance must be positive")
        if self.num_paths < 1:
            raise ValueError("need at least one propagation path")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def tx_power_watts(self) -> float:
        return dbm_to_watts(self.tx_power_dbm)

    @property
    def noise_watts(self) -> float:
        return dbm_to_watts(self.noise_dbm)

    @property
    def ref_gain(self) -> float:
        """Average channel power gain at 1 m reference distance."""
        return (self.wavelength / (4.0 * np.pi)) ** 2

    @property
    def path_gain_variance(self) -> float:
        """Variance of a single path gain; total power is split over paths."""
        return self.ref_gain * self.link_distance ** (-self.pathloss_exponent) / self.num_paths


@dataclass(frozen=True)
class PathSpec:
    """One propagation path: departure angles and complex amplitude."""

    elevation: float
    azimuth: float
    gain: complex


@dataclass
class UserChannel:
    """Multipath descriptor for one user, stored as arrays of length L."""

    elevations: np.ndarray
    azimuths: np.ndarray
    gains: np.ndarray

    def __post_init__(self):
        self.elevations = np.atleast_1d(np.asarray(self.elevations, dtype=float))
        self.azimuths = np.atleast_1d(np.asarray(self.azimuths, dtype=float))
        self.gains = np.atleast_1d(np.asarray(self.gains, dtype=complex))
        if not (len(self.elevations) == len(self.azimuths) == len(self.gains)):
            raise ValueError("per-path arrays must have equal length")
        if len(self.gains) < 1:
            raise ValueError("a user channel needs at least one path")

    @classmethod
    def from_paths(cls, paths: list[PathSpec]) -> "UserChannel":
        return cls(
            elevations=np.array([p.elevation for p in paths]),
            azimuths=np.array([p.azimuth for p in paths]),
            gains=np.array([p.gain for p in paths]),
        )

    @property
    def num_paths(self) -> int:
        return len(self.gains)


@dataclass
class ChannelRealization:
    """One draw of both users' multipath channels plus link constants."""

    user1: UserChannel
    user2: UserChannel
    noise_power: float
    wavelength: float

    def __post_init__(self):
        if self.noise_power <= 0 or self.wavelength <= 0:
            raise ValueError("noise power and wavelength must be positive")

    def vectors(self, apv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Channel vectors (h1, h2) for the given APV."""
        return (
            channel_vector(apv, self.user1, self.wavelength),
            channel_vector(apv, self.user2, self.wavelength),
        )


def validate_apv(apv: np.ndarray, region_size: float | None = None,
                 d_min: float | None = None, tol: float = 1e-9) -> np.ndarray:
    """Check APV shape, region membership and pairwise spacing; return as array."""
    apv = np.asarray(apv, dtype=float)
    if apv.ndim != 2 or apv.shape[1] != 2 or apv.shape[0] < 1:
        raise ValueError("APV must have shape (N, 2) with N >= 1")
    if not np.all(np.isfinite(apv)):
        raise ValueError("APV contains non-finite coordinates")
    if region_size is not None:
        half = region_size / 2.0
        if np.any(np.abs(apv) > half + tol):
            raise ValueError("APV positions fall outside the transmit region")
    if d_min is not None and len(apv) > 1:
        diff = apv[:, None, :] - apv[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        np.fill_diagonal(dist, np.inf)
        if dist.min() < d_min - tol:
            raise ValueError("APV violates the minimum antenna spacing")
    return apv


def position_phases(points: np.ndarray, elevation, azimuth, wavelength: float) -> np.ndarray:
    """Per-position phase (2*pi/lambda) * (x sin(el) cos(az) + y cos(el)).

    ``points`` is (..., 2); elevation/azimuth broadcast against the leading axes.
    """
    points = np.asarray(points, dtype=float)
    k = 2.0 * np.pi / wavelength
    return k * (points[..., 0] * np.sin(elevation) * np.cos(azimuth)
                + points[..., 1] * np.cos(elevation))


def array_response(apv: np.ndarray, elevation: float, azimuth: float,
                   wavelength: float) -> np.ndarray:
    """Unit-modulus steering vector of the array toward one departure direction."""
    apv = np.asarray(apv, dtype=float)
    if apv.ndim != 2 or apv.shape[1] != 2 or apv.shape[0] < 1:
        raise ValueError("APV must have shape (N, 2) with N >= 1")
    if wavelength <= 0:
        raise ValueError("wavelength must be positive")
    return np.exp(1j * position_phases(apv, elevation, azimuth, wavelength))


def element_response(points: np.ndarray, user: UserChannel, wavelength: float) -> np.ndarray:
    """Channel entry an antenna would contribute at each candidate position.

    Returns a complex array with one value per row of ``points``; the channel
    vector of an APV is exactly these values evaluated at its positions.
    """
    points = np.asarray(points, dtype=float)
    # phases: (Q, L) for Q points and L paths
    ph = position_phases(points[:, None, :], user.elevations[None, :],
                         user.azimuths[None, :], wavelength)
    return np.exp(1j * ph) @ user.gains


def channel_vector(apv: np.ndarray, user: UserChannel, wavelength: float) -> np.ndarray:
    """Gain-weighted sum of per-path steering vectors, length N."""
    apv = np.asarray(apv, dtype=float)
    if apv.ndim != 2 or apv.shape[1] != 2:
        raise ValueError("APV must have shape (N, 2)")
    return element_response(apv, user, wavelength)


def _user_substream(rng_seed: int, rng_stream: int, user_index: int) -> np.random.Generator:
    # Counter-based: Philox keyed by the root seed, jumped to a unique
    # (stream, user) slot so trials can be generated in any order.
    bitgen = np.random.Philox(key=rng_seed).jumped(2 * rng_stream + user_index)
    return np.random.Generator(bitgen)


def _sample_user(params: ScenarioParams, rng: np.random.Generator) -> UserChannel:
    L = params.num_paths
    elev = rng.uniform(0.0, np.pi, size=L)
    azim = rng.uniform(0.0, np.pi, size=L)
    sigma = np.sqrt(params.path_gain_variance / 2.0)
    gains = rng.normal(0.0, sigma, size=L) + 1j * rng.normal(0.0, sigma, size=L)
    return UserChannel(elev, azim, gains)


def sample_channel(params: ScenarioParams, rng_seed: int, rng_stream: int) -> ChannelRealization:
    """Draw one two-user channel realization, deterministic in (seed, stream).

    Angles are i.i.d. uniform on [0, pi] (elevation and azimuth independently);
    path gains are circularly-symmetric complex Gaussian with the distance-based
    variance split equally over paths.
    """
    user1 = _sample_user(params, _user_substream(rng_seed, rng_stream, 0))
    user2 = _sample_user(params, _user_substream(rng_seed, rng_stream, 1))
    return ChannelRealization(
        user1=user1,
        user2=user2,
        noise_power=params.noise_watts,
        wavelength=params.wavelength,
    )

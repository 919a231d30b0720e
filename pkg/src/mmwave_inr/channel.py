"""Three-state link model, log-distance pathloss and clustered MIMO channels.

Small-scale channels are normalized so that ``E[||H||_F^2] = n_tx * n_rx``;
pathloss is kept separate and applied in the link budget.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .beamforming import BeamPair, array_response
from .params import ArrayShape, ChannelParams


class LinkState(enum.IntEnum):
    LOS = 0
    NLOS = 1
    OUTAGE = 2


@dataclass(frozen=True)
class LinkGeometry:
    """3-D distance and geometric departure/arrival angles of a BS->UE link."""

    distance_m: float
    aod_azimuth: float
    aod_elevation: float
    aoa_azimuth: float
    aoa_elevation: float


def wrap_angle(x):
    """Map angles to [-pi, pi)."""
    return (np.asarray(x) + np.pi) % (2 * np.pi) - np.pi


def link_geometry(bs_xy, ue_xy, params: ChannelParams) -> LinkGeometry:
    dx, dy = np.asarray(ue_xy, dtype=float) - np.asarray(bs_xy, dtype=float)
    horiz = float(np.hypot(dx, dy))
    dh = params.bs_height_m - params.ue_height_m
    el = float(np.arctan2(dh, horiz))
    az = float(np.arctan2(dy, dx))
    return LinkGeometry(float(np.hypot(horiz, dh)), float(wrap_angle(az)), -el,
                        float(wrap_angle(az + np.pi)), el)


def link_state_probabilities(distance_m, params: ChannelParams):
    """Return ``(p_los, p_nlos, p_outage)`` at the given distance(s)."""
    d = np.asarray(distance_m, dtype=float)
    p_out = np.maximum(0.0, 1.0 - np.exp(-d / params.outage_decay_m + params.outage_offset))
    p_los = (1.0 - p_out) * np.exp(-d / params.los_decay_m)
    return p_los, 1.0 - p_los - p_out, p_out


def sample_link_states(distance_m, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Vectorized state draw; returns an int array of ``LinkState`` codes."""
    d = np.asarray(distance_m, dtype=float)
    p_los, _, p_out = link_state_probabilities(d, params)
    u = rng.random(d.shape)
    return np.where(u < p_los, LinkState.LOS,
                    np.where(u < p_los + p_out, LinkState.OUTAGE, LinkState.NLOS)).astype(np.int8)


def sample_link_state(distance_m: float, params: ChannelParams, rng: np.random.Generator) -> LinkState:
    if distance_m < 0:
        raise ValueError("distance must be >= 0")
    return LinkState(int(sample_link_states(np.array([distance_m]), params, rng)[0]))


def pathloss_db_array(distance_m, states, params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    """Pathloss with i.i.d. shadowing for every link; ``inf`` where the state is outage.

    One normal variate is consumed per link regardless of state.
    """
    d = np.asarray(distance_m, dtype=float)
    states = np.asarray(states)
    z = rng.standard_normal(d.shape)
    logd = 10.0 * np.log10(np.maximum(d, 1e-12))
    los = params.los.intercept_db + params.los.slope * logd + params.los.shadowing_std_db * z
    nlos = params.nlos.intercept_db + params.nlos.slope * logd + params.nlos.shadowing_std_db * z
    pl = np.where(states == LinkState.LOS, los, nlos)
    pl[states == LinkState.OUTAGE] = np.inf
    return pl


def pathloss_db(distance_m: float, state: LinkState, params: ChannelParams,
                rng: np.random.Generator) -> float:
    if state == LinkState.OUTAGE:
        raise ValueError("pathloss is undefined for an outage link")
    if distance_m <= 0:
        raise ValueError("distance must be > 0")
    return float(pathloss_db_array(np.array([distance_m]), np.array([state]), params, rng)[0])


@dataclass(frozen=True)
class Cluster:
    """One cluster: power share, center angles, and per-subpath offsets/gains.

    ``subpath_offsets`` has shape ``(4, L)`` in the order
    (AoD az, AoD el, AoA az, AoA el); ``subpath_gains`` has shape ``(L,)``.
    """

    power_fraction: float
    aod_azimuth: float
    aod_elevation: float
    aoa_azimuth: float
    aoa_elevation: float
    subpath_offsets: np.ndarray
    subpath_gains: np.ndarray


@dataclass(frozen=True, eq=False)
class ChannelInstance:
    """Per-link state, pathloss and (for non-outage links) the cluster structure.

    Array fields: ``cluster_powers`` (K,), ``cluster_centers`` (4, K),
    ``subpath_angles`` (4, K, L) absolute angles, ``subpath_gains`` (K, L).
    """

    state: LinkState
    distance_m: float
    pathloss_db: float
    bs_array: ArrayShape
    ue_array: ArrayShape
    cluster_powers: np.ndarray
    cluster_centers: np.ndarray
    subpath_angles: np.ndarray
    subpath_gains: np.ndarray

    @property
    def is_outage(self) -> bool:
        return self.state == LinkState.OUTAGE

    @classmethod
    def outage(cls, distance_m: float, bs_array: ArrayShape, ue_array: ArrayShape) -> "ChannelInstance":
        return cls(LinkState.OUTAGE, distance_m, np.inf, bs_array, ue_array,
                   np.zeros(0), np.zeros((4, 0)), np.zeros((4, 0, 1)), np.zeros((0, 1), complex))

    @classmethod
    def from_clusters(cls, clusters, state: LinkState, distance_m: float, pathloss_db: float,
                      bs_array: ArrayShape, ue_array: ArrayShape) -> "ChannelInstance":
        """Build an instance from explicit clusters (all with the same subpath count)."""
        centers = np.array([[c.aod_azimuth, c.aod_elevation, c.aoa_azimuth, c.aoa_elevation]
                            for c in clusters]).T
        offsets = np.stack([c.subpath_offsets for c in clusters], axis=1)
        return cls(state, distance_m, pathloss_db, bs_array, ue_array,
                   np.array([c.power_fraction for c in clusters]), centers,
                   centers[:, :, None] + offsets, np.stack([c.subpath_gains for c in clusters]))

    @property
    def clusters(self) -> list[Cluster]:
        out = []
        for k in range(len(self.cluster_powers)):
            c = self.cluster_centers[:, k]
            out.append(Cluster(float(self.cluster_powers[k]), *map(float, c),
                               self.subpath_angles[:, k, :] - c[:, None], self.subpath_gains[k]))
        return out

    @cached_property
    def _tx_responses(self) -> np.ndarray:
        a = self.subpath_angles.reshape(4, -1)
        return array_response(self.bs_array, a[0], a[1])

    @cached_property
    def _rx_responses(self) -> np.ndarray:
        a = self.subpath_angles.reshape(4, -1)
        return array_response(self.ue_array, a[2], a[3])

    @cached_property
    def h_matrix(self) -> np.ndarray | None:
        """``sum_l g_l a_rx(l) a_tx(l)^H``, shape ``(n_rx, n_tx)``; ``None`` in outage."""
        if self.is_outage:
            return None
        g = self.subpath_gains.ravel()
        return self._rx_responses.T @ (g[:, None] * self._tx_responses.conj())

    def gain(self, pair: BeamPair) -> float:
        """Beamforming gain ``|w_rx^H H w_tx|^2`` evaluated per subpath, without forming H."""
        if self.is_outage:
            return 0.0
        x = self._rx_responses @ pair.w_rx.conj()
        y = self._tx_responses.conj() @ pair.w_tx
        return float(abs(np.sum(self.subpath_gains.ravel() * x * y)) ** 2)


def sample_cluster_powers(params: ChannelParams, rng: np.random.Generator) -> np.ndarray:
    k = max(int(rng.poisson(params.cluster_rate)), 1)
    u = rng.random(k)
    z = rng.normal(0.0, params.cluster_shadowing_db, k)
    p = u ** (params.cluster_power_exponent - 1.0) * 10.0 ** (-0.1 * z)
    return p / p.sum()


def sample_cluster_centers(geometry: LinkGeometry, state: LinkState, params: ChannelParams,
                           rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Cluster powers ``(K,)`` and center angles ``(4, K)``.

    Azimuth centers are uniform at both ends; for LoS links the first cluster
    is pinned to the geometric direction.  Elevation centers are geometric.
    """
    powers = sample_cluster_powers(params, rng)
    k = len(powers)
    az = rng.uniform(-np.pi, np.pi, (2, k))
    if state == LinkState.LOS:
        az[:, 0] = geometry.aod_azimuth, geometry.aoa_azimuth
    centers = np.empty((4, k))
    centers[0], centers[2] = az
    centers[1] = geometry.aod_elevation
    centers[3] = geometry.aoa_elevation
    return powers, centers


def sample_channel_matrix(geometry: LinkGeometry, state: LinkState, params: ChannelParams,
                          bs_array: ArrayShape, ue_array: ArrayShape, rng: np.random.Generator,
                          pathloss: float | None = None) -> ChannelInstance:
    """Draw the clustered small-scale channel of a non-outage link.

    Centers come from :func:`sample_cluster_centers`.  Per-cluster rms
    spreads are exponential with the tabulated means and subpath offsets are
    Laplacian with that rms.  Subpath gains carry an equal share of the
    cluster power and a uniform phase.
    """
    if state == LinkState.OUTAGE:
        raise ValueError("no channel matrix for an outage link")
    if pathloss is None:
        pathloss = pathloss_db(geometry.distance_m, state, params, rng)
    powers, centers = sample_cluster_centers(geometry, state, params, rng)
    k, n_sub = len(powers), params.subpaths_per_cluster
    spreads = rng.exponential(1.0, (4, k)) * np.array(params.angular_spreads_rad)[:, None]
    angles = centers[:, :, None] + rng.laplace(0.0, _LAPLACE_UNIT_RMS, (4, k, n_sub)) * spreads[:, :, None]
    angles[0::2] = wrap_angle(angles[0::2])
    np.clip(angles[1::2], -np.pi / 2, np.pi / 2, out=angles[1::2])
    phases = rng.uniform(0.0, 2 * np.pi, (k, n_sub))
    gains = np.sqrt(powers[:, None] / n_sub) * np.exp(1j * phases)
    return ChannelInstance(LinkState(state), geometry.distance_m, float(pathloss), bs_array, ue_array,
                           powers, centers, angles, gains)


_LAPLACE_UNIT_RMS = 1.0 / np.sqrt(2.0)

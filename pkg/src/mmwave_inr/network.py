"""Association, blind scheduling and downlink link budgets for one drop."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .beamforming import BeamPair, align_beams, steering_beam, svd_beams
from .channel import (ChannelInstance, LinkState, link_geometry, pathloss_db_array,
                      sample_channel_matrix, sample_cluster_centers, sample_link_states)
from .deployment import Deployment
from .params import SimulationConfig


@dataclass(frozen=True)
class Link:
    """One BS->typical-UE link as seen by the link budget."""

    pathloss_db: float
    gain: float = 1.0
    tx_power_dbm: float = 30.0
    state: LinkState = LinkState.NLOS

    @property
    def received_mw(self) -> float:
        if self.state == LinkState.OUTAGE or math.isinf(self.pathloss_db):
            return 0.0
        return 10.0 ** ((self.tx_power_dbm - self.pathloss_db) / 10.0) * self.gain


def _db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0 else -math.inf


def interference_mw(interferers: Iterable[Link]) -> float:
    return float(np.sum([l.received_mw for l in interferers], dtype=float))


def compute_sinr(serving: Link, interferers: Iterable[Link], noise_dbm: float) -> float:
    """Downlink SINR in dB: ``S / (sum_k I_k + N)`` with every term linear."""
    if serving is None or serving.state == LinkState.OUTAGE:
        raise ValueError("SINR is undefined without a serving link")
    noise = 10.0 ** (noise_dbm / 10.0)
    return _db(serving.received_mw / (interference_mw(interferers) + noise))


def compute_inr(interferers: Iterable[Link], noise_dbm: float) -> float:
    """Interference-to-noise ratio in dB; ``-inf`` when nothing interferes."""
    return _db(interference_mw(interferers) / 10.0 ** (noise_dbm / 10.0))


@dataclass(frozen=True)
class LinkBudget:
    serving_bs: int | None
    received_signal_dbm: float
    interference_dbm: float
    noise_dbm: float
    inr_db: float
    sinr_db: float
    interferer_states: tuple[int, int, int]  # (LoS, NLoS, outage)
    serving_state: LinkState | None = None
    n_bs: int = 0
    n_active: int = 0

    @property
    def served(self) -> bool:
        return self.serving_bs is not None

    @property
    def snr_db(self) -> float:
        return self.received_signal_dbm - self.noise_dbm

    @classmethod
    def from_links(cls, serving_bs: int, serving: Link, interferers: Sequence[Link],
                   noise_dbm: float, **extra) -> "LinkBudget":
        counts = [0, 0, 0]
        for l in interferers:
            counts[l.state] += 1
        return cls(serving_bs, _db(serving.received_mw), _db(interference_mw(interferers)), noise_dbm,
                   compute_inr(interferers, noise_dbm), compute_sinr(serving, interferers, noise_dbm),
                   tuple(counts), serving.state, **extra)

    @classmethod
    def unserved(cls, noise_dbm: float, n_bs: int = 0) -> "LinkBudget":
        nan = math.nan
        return cls(None, -math.inf, nan, noise_dbm, nan, nan, (0, 0, 0), None, n_bs, 0)


def associate(pathloss_db: Sequence[float]) -> int | None:
    """Index of the minimum-pathloss BS (lowest index on ties); ``None`` if all are in outage."""
    pl = np.asarray(pathloss_db, dtype=float)
    if pl.size == 0 or not np.isfinite(pl).any():
        return None
    return int(np.argmin(pl))


def associate_all(pathloss_db: np.ndarray) -> np.ndarray:
    """Row-wise :func:`associate` over a ``(n_ue, n_bs)`` matrix; ``-1`` means unserved."""
    pl = np.asarray(pathloss_db, dtype=float)
    if pl.shape[1] == 0:
        return np.full(pl.shape[0], -1)
    best = np.argmin(pl, axis=1)
    best[~np.isfinite(pl).any(axis=1)] = -1
    return best


def schedule_blind(associations: np.ndarray, n_bs: int, rng: np.random.Generator,
                   pinned: Mapping[int, int] | None = None) -> dict[int, int]:
    """Each BS with at least one associated UE serves one of them chosen uniformly.

    ``pinned`` forces a BS->UE choice (used to keep the typical UE scheduled);
    the random draw is still consumed so pinning never shifts other choices.
    """
    assoc = np.asarray(associations)
    order = np.argsort(assoc, kind="stable")
    counts = np.bincount(assoc[assoc >= 0], minlength=n_bs)
    starts = np.searchsorted(assoc[order], np.arange(n_bs))
    active = np.flatnonzero(counts)
    picks = (rng.random(active.size) * counts[active]).astype(int)
    schedule = {int(b): int(order[starts[b] + p]) for b, p in zip(active, picks)}
    for b, u in (pinned or {}).items():
        if b not in schedule or assoc[u] != b:
            raise ValueError(f"UE {u} is not associated with BS {b}")
        schedule[b] = u
    return schedule


def _beams(channel: ChannelInstance, mode: str) -> BeamPair:
    return align_beams(channel) if mode == "strongest_cluster" else svd_beams(channel.h_matrix)


def simulate_drop(config: SimulationConfig, deployment: Deployment,
                  rng: np.random.Generator) -> LinkBudget:
    """Link budget at the typical UE for one deployment.

    Interferer ``k`` steers its transmit beam at its own scheduled UE; the
    typical UE keeps its receive beam on its serving BS.
    """
    sc, params = config.scenario, config.channel
    noise = sc.noise_dbm
    bs, ue = deployment.bs_positions, deployment.ue_positions
    if len(bs) == 0:
        return LinkBudget.unserved(noise)
    dx = ue[:, 0, None] - bs[None, :, 0]
    dy = ue[:, 1, None] - bs[None, :, 1]
    dist = np.sqrt(dx * dx + dy * dy + (params.bs_height_m - params.ue_height_m) ** 2)
    states = sample_link_states(dist, params, rng)
    pl = pathloss_db_array(dist, states, params, rng)
    assoc = associate_all(pl)
    serving = int(assoc[0])
    if serving < 0:
        return LinkBudget.unserved(noise, len(bs))
    schedule = schedule_blind(assoc, len(bs), rng, pinned={serving: 0})

    def channel(k: int, u: int) -> ChannelInstance:
        return sample_channel_matrix(link_geometry(bs[k], ue[u], params), LinkState(states[u, k]),
                                     params, sc.bs_array, sc.ue_array, rng, pathloss=pl[u, k])

    def tx_beam(k: int, u: int) -> np.ndarray:
        if sc.beam_alignment == "svd":
            return _beams(channel(k, u), "svd").w_tx
        # only the strongest cluster's departure direction is needed
        powers, centers = sample_cluster_centers(link_geometry(bs[k], ue[u], params),
                                                 LinkState(states[u, k]), params, rng)
        best = np.argmax(powers)
        return steering_beam(sc.bs_array, centers[0, best], centers[1, best])

    own = channel(serving, 0)
    beams = _beams(own, sc.beam_alignment)
    w_rx = beams.w_rx
    signal = Link(pl[0, serving], own.gain(beams), sc.tx_power_dbm, own.state)
    interferers = []
    for k, u in sorted(schedule.items()):
        if k == serving:
            continue
        state = LinkState(states[0, k])
        if state == LinkState.OUTAGE:
            interferers.append(Link(math.inf, 0.0, sc.tx_power_dbm, state))
            continue
        w_tx = tx_beam(k, u)
        cross = channel(k, 0)
        interferers.append(Link(pl[0, k], cross.gain(BeamPair(w_tx, w_rx)), sc.tx_power_dbm, state))
    return LinkBudget.from_links(serving, signal, interferers, noise,
                                 n_bs=len(bs), n_active=len(schedule))

"""Uniform planar array responses, steering beams and beamforming gain.

Angle convention (used everywhere in the package): azimuth in [-pi, pi)
measured from the global x-axis, elevation measured up from the horizontal
plane.  Every array lies in the global y-z plane with isotropic elements, so
element ``(r, c)`` sees the phase ``2*pi*d*(r*sin(el) + c*cos(el)*sin(az))``
and the back lobe (``az`` vs ``pi - az``) is retained.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .params import ArrayShape

if TYPE_CHECKING:
    from .channel import ChannelInstance


@dataclass(frozen=True)
class BeamPair:
    w_tx: np.ndarray
    w_rx: np.ndarray

    def __post_init__(self):
        for name in ("w_tx", "w_rx"):
            norm = np.linalg.norm(getattr(self, name))
            if abs(norm - 1.0) > 1e-12:
                raise ValueError(f"{name} must have unit norm, got {norm!r}")


def array_response(shape: ArrayShape, azimuth, elevation) -> np.ndarray:
    """Unit-modulus UPA response; broadcasts over angles, returns ``(..., rows*cols)``."""
    az = np.asarray(azimuth, dtype=float)
    el = np.asarray(elevation, dtype=float)
    k = 2j * np.pi * shape.element_spacing_wavelengths
    v = np.exp(k * np.sin(el)[..., None] * np.arange(shape.rows))
    h = np.exp(k * (np.cos(el) * np.sin(az))[..., None] * np.arange(shape.cols))
    out = v[..., :, None] * h[..., None, :]
    return out.reshape(out.shape[:-2] + (shape.n_elements,))


def steering_beam(shape: ArrayShape, azimuth: float, elevation: float) -> np.ndarray:
    """Unit-norm beam maximizing ``|w^H a(az, el)|``."""
    return array_response(shape, azimuth, elevation) / np.sqrt(shape.n_elements)


def beamforming_gain(h: np.ndarray, pair: BeamPair) -> float:
    """``|w_rx^H H w_tx|^2`` for ``H`` of shape ``(n_rx, n_tx)``."""
    h = np.asarray(h)
    if h.shape != (pair.w_rx.size, pair.w_tx.size):
        raise ValueError(f"shape mismatch: H {h.shape}, w_rx {pair.w_rx.shape}, w_tx {pair.w_tx.shape}")
    return float(abs(np.vdot(pair.w_rx, h @ pair.w_tx)) ** 2)


def align_beams(channel: ChannelInstance) -> BeamPair:
    """Point both ends at the strongest cluster's departure/arrival centers."""
    if channel.is_outage:
        raise ValueError("no beams for an outage link")
    k = int(np.argmax(channel.cluster_powers))
    aod_az, aod_el, aoa_az, aoa_el = channel.cluster_centers[:, k]
    return BeamPair(steering_beam(channel.bs_array, aod_az, aod_el),
                    steering_beam(channel.ue_array, aoa_az, aoa_el))


def svd_beams(h: np.ndarray) -> BeamPair:
    """Dominant singular-vector pair; attains ``sigma_max(H)^2``."""
    u, _, vh = np.linalg.svd(h)
    return BeamPair(vh[0].conj(), u[:, 0])

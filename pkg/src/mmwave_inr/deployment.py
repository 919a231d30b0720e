"""Poisson point process deployments on a disc around the typical receiver."""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .params import ScenarioConfig


@dataclass(frozen=True)
class Deployment:
    """BS and UE positions in meters; ``ue_positions[0]`` is the typical UE at the origin."""

    bs_positions: np.ndarray  # (n_bs, 2)
    ue_positions: np.ndarray  # (n_ue, 2)

    @property
    def n_bs(self) -> int:
        return len(self.bs_positions)

    @property
    def n_ue(self) -> int:
        return len(self.ue_positions)


def sample_ppp(density_per_km2: float, radius_m: float, rng: np.random.Generator) -> np.ndarray:
    """Homogeneous PPP on a disc: Poisson count, then i.i.d. uniform placement.

    Returns an ``(n, 2)`` array of points in meters.
    """
    if density_per_km2 < 0 or radius_m <= 0:
        raise ValueError("density must be >= 0 and radius > 0")
    mean = density_per_km2 * np.pi * radius_m**2 / 1e6
    n = rng.poisson(mean)
    r = radius_m * np.sqrt(rng.random(n))
    theta = rng.uniform(-np.pi, np.pi, n)
    return np.column_stack((r * np.cos(theta), r * np.sin(theta)))


def make_deployment(config: ScenarioConfig, rng: np.random.Generator) -> Deployment:
    bs = sample_ppp(config.lambda_bs_per_km2, config.region_radius_m, rng)
    ue = sample_ppp(config.lambda_ue_per_km2, config.region_radius_m, rng)
    return Deployment(bs, np.vstack((np.zeros((1, 2)), ue)))


def write_deployment_csv(deployment: Deployment, path) -> None:
    """Dump positions as ``x_m,y_m,kind`` rows (kind is ``bs``, ``ue`` or ``typical_ue``)."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x_m", "y_m", "kind"])
        for x, y in deployment.bs_positions:
            w.writerow([repr(float(x)), repr(float(y)), "bs"])
        for i, (x, y) in enumerate(deployment.ue_positions):
            w.writerow([repr(float(x)), repr(float(y)), "typical_ue" if i == 0 else "ue"])

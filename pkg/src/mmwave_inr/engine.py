"""Monte Carlo campaigns: per-iteration seeding, aggregation and regime analysis.

Iteration ``i`` of a campaign draws from
``np.random.default_rng(SeedSequence(master_seed, spawn_key=(i,)))``, so a
result depends only on ``(config, i)`` and never on how iterations are
distributed across worker processes.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .channel import LinkState
from .deployment import make_deployment
from .network import LinkBudget, simulate_drop
from .params import ArrayShape, SimulationConfig

PERCENTILES = (5, 50, 95)


def iteration_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(index,)))


@dataclass(frozen=True)
class IterationResult:
    index: int
    served: bool
    serving_state: str
    inr_db: float
    sinr_db: float
    snr_db: float
    signal_dbm: float
    interference_dbm: float
    n_los: int
    n_nlos: int
    n_outage: int
    n_bs: int
    n_active: int

    @classmethod
    def from_budget(cls, index: int, b: LinkBudget) -> "IterationResult":
        state = b.serving_state.name if b.serving_state is not None else "NONE"
        return cls(index, b.served, state, b.inr_db, b.sinr_db, b.snr_db if b.served else math.nan,
                   b.received_signal_dbm, b.interference_dbm, *b.interferer_states, b.n_bs, b.n_active)

    @property
    def interferer_states(self) -> tuple[int, int, int]:
        return self.n_los, self.n_nlos, self.n_outage


def run_iteration(config: SimulationConfig, index: int) -> IterationResult:
    """One drop, fully determined by ``(config.scenario.master_seed, index)``."""
    rng = iteration_rng(config.scenario.master_seed, index)
    deployment = make_deployment(config.scenario, rng)
    return IterationResult.from_budget(index, simulate_drop(config, deployment, rng))


def _run_range(config: SimulationConfig, start: int, stop: int) -> list[IterationResult]:
    return [run_iteration(config, i) for i in range(start, stop)]


class Ecdf:
    """Empirical CDF over dB samples (``-inf`` allowed, NaN not)."""

    def __init__(self, samples):
        x = np.sort(np.asarray(samples, dtype=float))
        if np.isnan(x).any():
            raise ValueError("ECDF samples must not be NaN")
        self.samples = x

    @property
    def count(self) -> int:
        return self.samples.size

    def __len__(self) -> int:
        return self.count

    def __call__(self, x):
        """``F(x) = #{samples <= x} / count``."""
        return np.searchsorted(self.samples, x, side="right") / self.count

    def percentile(self, q: float) -> float:
        """Nearest-rank percentile, ``q`` in [0, 100]."""
        if not 0 <= q <= 100:
            raise ValueError("percentile must be in [0, 100]")
        rank = max(math.ceil(q / 100.0 * self.count), 1)
        return float(self.samples[rank - 1])

    def quantiles(self, probs) -> np.ndarray:
        return np.array([self.percentile(100.0 * p) for p in probs])

    def curve(self) -> tuple[np.ndarray, np.ndarray]:
        """Step points ``(x, F(x))`` for plotting."""
        return self.samples, np.arange(1, self.count + 1) / self.count


class Regime(enum.Enum):
    NOISE_LIMITED = "noise-limited"
    HYBRID = "hybrid"
    INTERFERENCE_LIMITED = "interference-limited"


def classify_regime(inr_ecdf: Ecdf, threshold_db: float = 0.0, noise_limited_max: float = 0.2,
                    interference_limited_min: float = 0.8) -> tuple[Regime, float]:
    """Regime from the fraction of drops with INR above ``threshold_db``."""
    if inr_ecdf.count == 0:
        raise ValueError("empty ECDF")
    frac = 1.0 - float(inr_ecdf(threshold_db))
    if frac <= noise_limited_max:
        return Regime.NOISE_LIMITED, frac
    if frac >= interference_limited_min:
        return Regime.INTERFERENCE_LIMITED, frac
    return Regime.HYBRID, frac


@dataclass(frozen=True)
class StateInterval:
    lower_quantile: float
    upper_quantile: float
    n_drops: int
    n_interferers: int
    los: float
    nlos: float
    outage: float


def interferer_state_table(results: Sequence[IterationResult],
                           split_quantile: float = 0.12) -> list[StateInterval]:
    """Fraction of interferers in each state, split at an INR-ECDF quantile.

    Served drops are ordered by INR (ties by iteration index); the first
    ``ceil(split_quantile * n)`` form the lower interval.  An interval
    without interferers reports NaN fractions.
    """
    if not 0 < split_quantile < 1:
        raise ValueError("split_quantile must be in (0, 1)")
    served = sorted((r for r in results if r.served), key=lambda r: (r.inr_db, r.index))
    cut = math.ceil(split_quantile * len(served))
    out = []
    for lo, hi, chunk in ((0.0, split_quantile, served[:cut]), (split_quantile, 1.0, served[cut:])):
        counts = np.array([r.interferer_states for r in chunk], dtype=float).reshape(-1, 3).sum(axis=0)
        total = counts.sum()
        probs = counts / total if total else np.full(3, math.nan)
        out.append(StateInterval(lo, hi, len(chunk), int(total), *map(float, probs)))
    return out


@dataclass
class CampaignResult:
    config: SimulationConfig
    results: list[IterationResult]
    inr_ecdf: Ecdf
    sinr_ecdf: Ecdf
    snr_ecdf: Ecdf
    coverage_outage_fraction: float
    percentiles: dict[str, dict[int, float]]
    regime: Regime
    fraction_inr_above_0db: float
    state_table: list[StateInterval] = field(default_factory=list)

    @classmethod
    def from_results(cls, config: SimulationConfig, results: list[IterationResult],
                     split_quantile: float = 0.12) -> "CampaignResult":
        served = [r for r in results if r.served]
        if not served:
            raise ValueError("no coverage; cannot form ECDF")
        if config.scenario.exclude_coverage_outage:
            pick = served
            inr = [r.inr_db for r in pick]
            sinr = [r.sinr_db for r in pick]
            snr = [r.snr_db for r in pick]
        else:
            inr = [r.inr_db if r.served else -math.inf for r in results]
            sinr = [r.sinr_db if r.served else -math.inf for r in results]
            snr = [r.snr_db if r.served else -math.inf for r in results]
        inr_e, sinr_e, snr_e = Ecdf(inr), Ecdf(sinr), Ecdf(snr)
        regime, frac = classify_regime(inr_e)
        pct = {name: {q: e.percentile(q) for q in PERCENTILES}
               for name, e in (("inr_db", inr_e), ("sinr_db", sinr_e), ("snr_db", snr_e))}
        return cls(config, results, inr_e, sinr_e, snr_e, 1.0 - len(served) / len(results), pct,
                   regime, frac, interferer_state_table(results, split_quantile))


def run_campaign(config: SimulationConfig, workers: int = 1, chunk_size: int = 250,
                 split_quantile: float = 0.12) -> CampaignResult:
    """Run ``config.scenario.iterations`` drops; results are identical for any ``workers``."""
    n = config.scenario.iterations
    if workers <= 1:
        results = _run_range(config, 0, n)
    else:
        bounds = [(s, min(s + chunk_size, n)) for s in range(0, n, chunk_size)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = ex.map(_run_range, [config] * len(bounds), *zip(*bounds))
            results = [r for chunk in chunks for r in chunk]
    return CampaignResult.from_results(config, results, split_quantile)


@dataclass(frozen=True)
class SweepRow:
    frequency_ghz: float
    lambda_bs_per_km2: float
    lambda_ue_per_km2: float
    sinr_p5_db: float
    sinr_p50_db: float
    inr_p50_db: float
    fraction_inr_above_0db: float
    coverage_outage_fraction: float
    regime: str


def density_sweep(config: SimulationConfig, densities: Sequence[float],
                  frequencies: Sequence[float] | None = None, ue_per_bs: float | None = None,
                  workers: int = 1) -> list[SweepRow]:
    """One campaign per (frequency, BS density) pair.

    ``ue_per_bs`` ties the UE density to the BS density; by default the
    template's UE density is kept.
    """
    if not densities:
        raise ValueError("density list is empty")
    rows = []
    for f in frequencies or [config.scenario.carrier_frequency_ghz]:
        for lam in densities:
            lam_ue = config.scenario.lambda_ue_per_km2 if ue_per_bs is None else ue_per_bs * lam
            c = config.replace(carrier_frequency_ghz=float(f), lambda_bs_per_km2=float(lam),
                               lambda_ue_per_km2=float(lam_ue))
            res = run_campaign(c, workers)
            rows.append(SweepRow(float(f), float(lam), float(lam_ue), res.sinr_ecdf.percentile(5),
                                 res.sinr_ecdf.percentile(50), res.inr_ecdf.percentile(50),
                                 res.fraction_inr_above_0db, res.coverage_outage_fraction,
                                 res.regime.value))
    return rows


@dataclass
class ArrayComparison:
    baseline: CampaignResult
    enlarged: CampaignResult
    probs: np.ndarray
    inr_delta_db: np.ndarray
    sinr_delta_db: np.ndarray

    @property
    def median_inr_delta_db(self) -> float:
        return self.enlarged.inr_ecdf.percentile(50) - self.baseline.inr_ecdf.percentile(50)

    @property
    def median_sinr_delta_db(self) -> float:
        return self.enlarged.sinr_ecdf.percentile(50) - self.baseline.sinr_ecdf.percentile(50)


def _delta(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    with np.errstate(invalid="ignore"):
        d = b - a
    d[(a == b)] = 0.0  # -inf == -inf
    return d


def compare_arrays(config: SimulationConfig,
                   baseline: tuple[ArrayShape, ArrayShape] = (ArrayShape(8, 8), ArrayShape(4, 4)),
                   enlarged: tuple[ArrayShape, ArrayShape] = (ArrayShape(16, 16), ArrayShape(8, 8)),
                   workers: int = 1) -> ArrayComparison:
    """Paired campaigns (same seeds) with (BS, UE) array shapes swapped.

    Array shapes do not enter any random draw, so both arms see identical
    deployments, link states and cluster geometry.
    """
    arms = [run_campaign(config.replace(bs_array=bs, ue_array=ue), workers)
            for bs, ue in (baseline, enlarged)]
    probs = np.linspace(0.01, 0.99, 99)
    return ArrayComparison(arms[0], arms[1], probs,
                           _delta(arms[0].inr_ecdf.quantiles(probs), arms[1].inr_ecdf.quantiles(probs)),
                           _delta(arms[0].sinr_ecdf.quantiles(probs), arms[1].sinr_ecdf.quantiles(probs)))


def serving_states(results: Sequence[IterationResult]) -> dict[str, int]:
    out = {s.name: 0 for s in LinkState}
    for r in results:
        if r.served:
            out[r.serving_state] += 1
    return out

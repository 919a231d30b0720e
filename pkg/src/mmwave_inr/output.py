"""CSV/JSON writers and generated plot scripts.

Every file starts with a reproducibility header carrying the package
version, the master seed and the full resolved configuration (``#`` comment
lines for CSV and Python, top-level keys for JSON).  Column orders below are
a stable interface; do not reorder.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path
from typing import Iterable, Sequence

from . import __version__
from .engine import ArrayComparison, CampaignResult, StateInterval, SweepRow, serving_states
from .params import SimulationConfig

ITERATION_COLUMNS = ("iteration", "served", "serving_state", "inr_db", "sinr_db", "snr_db",
                     "signal_dbm", "interference_dbm", "n_los", "n_nlos", "n_outage",
                     "n_bs", "n_active")
ECDF_COLUMNS = ("metric", "value_db", "cdf")
SWEEP_COLUMNS = tuple(f.name for f in dataclasses.fields(SweepRow))
TABLE1_COLUMNS = ("lower_quantile", "upper_quantile", "n_drops", "n_interferers",
                  "los", "nlos", "outage")
DELTA_COLUMNS = ("probability", "inr_delta_db", "sinr_delta_db")


def _num(x) -> str | int | float:
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)  # "inf", "-inf", "nan"
    return x


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        x = x.item()
    return _num(x)


def header_lines(config: SimulationConfig, prefix: str = "# ") -> list[str]:
    return [f"{prefix}generator: mmwave_inr {__version__}",
            f"{prefix}master_seed: {config.scenario.master_seed}",
            f"{prefix}config: {json.dumps(config.to_dict(), sort_keys=True)}"]


def _write_csv(path: Path, config: SimulationConfig, columns: Sequence[str], rows: Iterable) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(header_lines(config)) + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_num(v) for v in row])
    return path


def read_csv(path) -> list[dict[str, str]]:
    """Read a file written here, skipping the ``#`` header."""
    with open(path) as fh:
        return list(csv.DictReader(line for line in fh if not line.startswith("#")))


def write_iterations_csv(result: CampaignResult, path) -> Path:
    rows = ([r.index] + [getattr(r, c) for c in ITERATION_COLUMNS[1:]] for r in result.results)
    return _write_csv(path, result.config, ITERATION_COLUMNS, rows)


def write_ecdf_csv(result: CampaignResult, path) -> Path:
    def rows():
        for name, e in (("inr_db", result.inr_ecdf), ("sinr_db", result.sinr_ecdf),
                        ("snr_db", result.snr_ecdf)):
            x, f = e.curve()
            yield from ((name, float(a), float(b)) for a, b in zip(x, f))
    return _write_csv(path, result.config, ECDF_COLUMNS, rows())


def state_table_rows(table: Sequence[StateInterval]):
    return [[getattr(s, c) for c in TABLE1_COLUMNS] for s in table]


def write_table1_csv(result: CampaignResult, path) -> Path:
    return _write_csv(path, result.config, TABLE1_COLUMNS, state_table_rows(result.state_table))


def campaign_summary(result: CampaignResult) -> dict:
    return {
        "generator": f"mmwave_inr {__version__}",
        "master_seed": result.config.scenario.master_seed,
        "iterations": len(result.results),
        "served_drops": sum(r.served for r in result.results),
        "coverage_outage_fraction": result.coverage_outage_fraction,
        "percentiles": result.percentiles,
        "regime": result.regime.value,
        "fraction_inr_above_0db": result.fraction_inr_above_0db,
        "interferer_state_table": [dataclasses.asdict(s) for s in result.state_table],
        "serving_states": serving_states(result.results),
        "config": result.config.to_dict(),
    }


def write_json(obj: dict, path) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_sweep_csv(rows: Sequence[SweepRow], config: SimulationConfig, path) -> Path:
    return _write_csv(path, config, SWEEP_COLUMNS, (dataclasses.astuple(r) for r in rows))


def write_comparison(cmp: ArrayComparison, out_dir) -> dict[str, Path]:
    out = Path(out_dir)
    paths = {
        "deltas": _write_csv(out / "array_deltas.csv", cmp.baseline.config, DELTA_COLUMNS,
                             zip(cmp.probs.tolist(), cmp.inr_delta_db.tolist(), cmp.sinr_delta_db.tolist())),
        "baseline_ecdf": write_ecdf_csv(cmp.baseline, out / "ecdf_baseline.csv"),
        "enlarged_ecdf": write_ecdf_csv(cmp.enlarged, out / "ecdf_enlarged.csv"),
    }
    summary = {
        "median_inr_delta_db": cmp.median_inr_delta_db,
        "median_sinr_delta_db": cmp.median_sinr_delta_db,
        "baseline": campaign_summary(cmp.baseline),
        "enlarged": campaign_summary(cmp.enlarged),
        "master_seed": cmp.baseline.config.scenario.master_seed,
        "config": cmp.baseline.config.to_dict(),
    }
    paths["summary"] = write_json(summary, out / "compare_arrays.json")
    return paths


_ECDF_PLOT = '''
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

files = sys.argv[1:] or {files!r}
fig, axes = plt.subplots(1, 2, figsize=(10, 4))
for name in files:
    data = defaultdict(lambda: ([], []))
    with open(name) as fh:
        for row in csv.DictReader(l for l in fh if not l.startswith("#")):
            x, y = data[row["metric"]]
            x.append(float(row["value_db"]))
            y.append(float(row["cdf"]))
    for ax, metric in zip(axes, ("inr_db", "sinr_db")):
        x, y = data[metric]
        ax.step(x, y, where="post", label=name)
        ax.set_xlabel(metric.replace("_db", " [dB]").upper())
        ax.set_ylabel("ECDF")
        ax.grid(True)
axes[0].axvline(0.0, color="k", lw=0.8, ls="--")
axes[0].legend(fontsize="small")
fig.tight_layout()
fig.savefig("ecdf.png", dpi=150)
'''

_SWEEP_PLOT = '''
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

name = sys.argv[1] if len(sys.argv) > 1 else {file!r}
curves = defaultdict(list)
with open(name) as fh:
    for row in csv.DictReader(l for l in fh if not l.startswith("#")):
        f = float(row["frequency_ghz"])
        lam = float(row["lambda_bs_per_km2"])
        curves[(f, "5th")].append((lam, float(row["sinr_p5_db"])))
        curves[(f, "50th")].append((lam, float(row["sinr_p50_db"])))
fig, ax = plt.subplots(figsize=(6, 4))
for (f, which), pts in sorted(curves.items()):
    pts.sort()
    ax.plot(*zip(*pts), marker="o", label=f"{{f:g}} GHz, {{which}} pct")
ax.set_xlabel("BS density [BSs/km$^2$]")
ax.set_ylabel("SINR [dB]")
ax.grid(True)
ax.legend()
fig.tight_layout()
fig.savefig("sweep.png", dpi=150)
'''


def write_plot_script(path, config: SimulationConfig, kind: str, data_files: Sequence[str]) -> Path:
    """Emit a standalone matplotlib script for ``kind`` in {"ecdf", "sweep"}."""
    if kind == "ecdf":
        body = _ECDF_PLOT.format(files=list(data_files))
    elif kind == "sweep":
        body = _SWEEP_PLOT.format(file=data_files[0])
    else:
        raise ValueError(f"unknown plot kind {kind!r}")
    path = Path(path)
    path.write_text("\n".join(header_lines(config)) + "\n" + body)
    return path

# %% [markdown]
# # INR distribution at the typical receiver
#
# Drop base stations and users as Poisson points around a receiver at the
# origin, run the downlink link budget many times, and look at how often the
# aggregate interference rises above the thermal floor.
#
# Set `MMWAVE_ITER` to change the number of drops (default 2000).

# %%
import os

import matplotlib.pyplot as plt
import numpy as np

from mmwave_inr.engine import run_campaign, serving_states
from mmwave_inr.params import load_config

n_iter = int(os.environ.get("MMWAVE_ITER", 2000))
config = load_config().replace(iterations=n_iter, lambda_bs_per_km2=30.0, lambda_ue_per_km2=300.0)
print(config.scenario)
print(f"noise floor: {config.scenario.noise_dbm:.2f} dBm")

# %%
res = run_campaign(config)
print(f"coverage outage: {res.coverage_outage_fraction:.3%}")
print("serving link states:", serving_states(res.results))
for metric, pct in res.percentiles.items():
    print(metric, {q: round(v, 2) for q, v in pct.items()})
print(f"P(INR > 0 dB) = {res.fraction_inr_above_0db:.3f} -> {res.regime.value}")

# %% [markdown]
# A large step at the bottom of the INR curve is the set of drops where every
# other active base station is in outage towards the receiver (INR = -inf).

# %%
finite = np.isfinite(res.inr_ecdf.samples)
print(f"drops with no visible interferer: {1 - finite.mean():.3f}")

fig, (ax_inr, ax_sinr) = plt.subplots(1, 2, figsize=(10, 4))
for ax, ecdf, label in ((ax_inr, res.inr_ecdf, "INR [dB]"), (ax_sinr, res.sinr_ecdf, "SINR [dB]")):
    x, y = ecdf.curve()
    ax.step(x, y, where="post")
    ax.set_xlabel(label)
    ax.set_ylabel("ECDF")
    ax.grid(True)
ax_inr.axvline(0.0, color="k", ls="--", lw=0.8)
ax_sinr.step(*res.snr_ecdf.curve(), where="post", ls=":", label="interference-free")
ax_sinr.legend()
fig.tight_layout()
fig.savefig("inr_ecdf.png", dpi=120)

# %% [markdown]
# ## Interferer states
#
# Split the served drops at the 12th INR percentile and count how the
# interferers' links to the receiver are distributed over LoS, NLoS and outage.

# %%
for row in res.state_table:
    print(f"[{row.lower_quantile:.0%}, {row.upper_quantile:.0%}]  drops={row.n_drops:5d}  "
          f"LoS {row.los:.3f}  NLoS {row.nlos:.3f}  outage {row.outage:.3f}")

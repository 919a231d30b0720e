# %% [markdown]
# # From noise-limited to interference-limited
#
# Sweep the base-station density with ten users per base station and track
# the median INR, the share of drops above 0 dB and the 5th/50th SINR
# percentiles at both carriers.

# %%
import os

import matplotlib.pyplot as plt

from mmwave_inr.engine import density_sweep
from mmwave_inr.params import load_config

n_iter = int(os.environ.get("MMWAVE_ITER", 1000))
config = load_config().replace(iterations=n_iter)
densities = [20, 30, 60, 90, 120]

rows = density_sweep(config, densities, frequencies=[28.0, 73.0], ue_per_bs=10)
print(f"{'GHz':>4} {'BS/km2':>7} {'INR p50':>8} {'P(INR>0)':>9} {'SINR p5':>8} {'SINR p50':>9}  regime")
for r in rows:
    print(f"{r.frequency_ghz:4g} {r.lambda_bs_per_km2:7g} {r.inr_p50_db:8.2f} "
          f"{r.fraction_inr_above_0db:9.3f} {r.sinr_p5_db:8.2f} {r.sinr_p50_db:9.2f}  {r.regime}")

# %% [markdown]
# Cell-edge SINR (5th percentile) keeps improving while noise dominates and
# levels off once most drops are interference-limited.

# %%
fig, ax = plt.subplots(1, 2, figsize=(10, 4))
for f, style in ((28.0, "-o"), (73.0, "--s")):
    sel = [r for r in rows if r.frequency_ghz == f]
    lam = [r.lambda_bs_per_km2 for r in sel]
    ax[0].plot(lam, [r.sinr_p5_db for r in sel], style, label=f"{f:g} GHz p5")
    ax[0].plot(lam, [r.sinr_p50_db for r in sel], style, alpha=0.5, label=f"{f:g} GHz p50")
    ax[1].plot(lam, [r.fraction_inr_above_0db for r in sel], style, label=f"{f:g} GHz")
ax[0].set_ylabel("SINR [dB]")
ax[1].set_ylabel("P(INR > 0 dB)")
ax[1].axhspan(0.8, 1.0, alpha=0.1, color="r")
ax[1].axhspan(0.0, 0.2, alpha=0.1, color="b")
for a in ax:
    a.set_xlabel("BS density [1/km$^2$]")
    a.grid(True)
    a.legend()
fig.tight_layout()
fig.savefig("density_sweep.png", dpi=120)

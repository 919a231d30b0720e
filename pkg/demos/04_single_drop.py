# %% [markdown]
# # Anatomy of one drop
#
# Build a single deployment, sample every link state towards the receiver and
# break the interference down per base station.

# %%
import matplotlib.pyplot as plt
import numpy as np

from mmwave_inr.channel import LinkState, link_state_probabilities
from mmwave_inr.deployment import make_deployment
from mmwave_inr.engine import iteration_rng
from mmwave_inr.network import simulate_drop
from mmwave_inr.params import load_config

config = load_config()
rng = iteration_rng(config.scenario.master_seed, 42)
dep = make_deployment(config.scenario, rng)
budget = simulate_drop(config, dep, rng)
print(f"{dep.n_bs} BSs, {dep.n_ue} UEs, {budget.n_active} active")
print(f"serving BS {budget.serving_bs} ({budget.serving_state.name})  "
      f"S={budget.received_signal_dbm:.1f} dBm  INR={budget.inr_db:.1f} dB  SINR={budget.sinr_db:.1f} dB")
print("interferers LoS/NLoS/outage:", budget.interferer_states)

# %% [markdown]
# State probabilities fall off fast: beyond ~200 m almost every link is in
# outage, which is why a 400 m disc is enough.

# %%
d = np.linspace(1, 400, 400)
probs = np.array([link_state_probabilities(x, config.channel) for x in d])
fig, ax = plt.subplots(1, 2, figsize=(11, 4.5))
for i, s in enumerate(LinkState):
    ax[0].plot(d, probs[:, i], label=s.name)
ax[0].set_xlabel("distance [m]")
ax[0].set_ylabel("probability")
ax[0].legend()
ax[0].grid(True)

ax[1].scatter(*dep.ue_positions.T, s=4, c="0.7", label="UE")
ax[1].scatter(*dep.bs_positions.T, marker="^", c="tab:blue", label="BS")
ax[1].scatter(0, 0, marker="*", s=150, c="tab:red", label="typical UE")
if budget.served:
    ax[1].scatter(*dep.bs_positions[budget.serving_bs], marker="^", s=120, c="tab:green", label="serving")
ax[1].set_aspect("equal")
ax[1].legend(fontsize="small")
fig.tight_layout()
fig.savefig("single_drop.png", dpi=120)

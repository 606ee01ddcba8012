# %% [markdown]
# # Moving the antennas
#
# Each of five antennas may move inside its own one-wavelength square.  The
# objective is the closed-form outage-aware sum rate, and projected gradient
# ascent climbs it.

# %%
import numpy as np

from maoutage import scenarios
from maoutage.benchmarks import fpa
from maoutage.optimizer import PgaConfig, multi_start, pga_run

cfg = scenarios.downlink_config(side=1.0, rician_k=15.0, outage_target=0.2)
print("fixed half-wavelength array:", round(fpa(cfg).sum_rate, 3), "bits/s/Hz")

# %% [markdown]
# Start from four hand-picked layouts (projected into the squares first) and
# follow the objective.

# %%
pga = PgaConfig(step_size=0.015, max_iters=1000)
for i, start in enumerate(scenarios.CONVERGENCE_STARTS):
    tr = pga_run(start, cfg, pga, start_index=i)
    checkpoints = tr.objective[[0, 50, 100, 200, -1]]
    print(f"start {i + 1}: {np.round(checkpoints, 3)}  ({tr.iterations} iterations)")

# %% [markdown]
# Different starts can stop at different local maxima, which is why the
# final answer keeps the best of several runs.

# %%
res = multi_start(cfg, PgaConfig(num_starts=5), seed=0)
print("best of 5 random starts:", round(res.objective, 3))
print("final layout (x row, y row):")
print(np.round(res.layout, 3))

# %% [markdown]
# Backtracking on the step instead of a fixed step gives a monotone trace.

# %%
tr = pga_run(scenarios.CONVERGENCE_STARTS[2], cfg, PgaConfig(line_search=True, step_size=0.5, max_iters=400))
print("line search:", round(tr.final_objective, 3), "after", tr.iterations, "iterations;",
      "monotone:", bool(np.all(np.diff(tr.objective) >= -1e-12)))

# %% [markdown]
# # Movable antennas against rigid arrays
#
# Four reference schemes: a fixed ULA, the best of 100 random layouts, the
# best 5 of 10 ULA elements, and the best rotation of the ULA.  We sweep the
# side of the moving squares and the outage target.

# %%
import warnings

import numpy as np

from maoutage import benchmarks as bm
from maoutage import scenarios
from maoutage.errors import RateClampWarning
from maoutage.optimizer import PgaConfig, multi_start
from maoutage.rate import linearization, sum_rate

warnings.simplefilter("ignore", RateClampWarning)


def row(cfg, seed=0):
    lin = linearization(cfg.outage_target)
    return {
        "MA": multi_start(cfg, PgaConfig(num_starts=3), seed=seed, lin=lin).objective,
        "FPA": bm.fpa(cfg, lin).sum_rate,
        "RAP": bm.rap_best(cfg, 100, seed, lin).sum_rate,
        "AS": bm.as_best(cfg, lin).sum_rate,
        "RULA": bm.rula_best(cfg, 100, lin).sum_rate,
    }


# %%
print("  L     " + "  ".join(f"{k:>6}" for k in ("MA", "FPA", "RAP", "AS", "RULA")))
for side in (0.25, 0.5, 1.0, 1.6, 2.25):
    r = row(scenarios.downlink_config(side=side))
    print(f"{side:5.2f}  " + "  ".join(f"{v:6.2f}" for v in r.values()))

# %% [markdown]
# A larger outage allowance buys a higher rate for every scheme.  Here the
# layouts are frozen at their values for delta = 0.2 and only the target
# moves.

# %%
cfg = scenarios.downlink_config()
layouts = {"MA": multi_start(cfg, PgaConfig(num_starts=3), seed=0).layout, "FPA": bm.fpa_layout(cfg)}
for delta in (0.10, 0.14, 0.18, 0.20):
    c = cfg.with_(outage_target=delta)
    print(delta, {k: round(sum_rate(t, c, linearization(delta)), 3) for k, t in layouts.items()})

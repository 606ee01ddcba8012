# %% [markdown]
# # How good is the Gamma law for the ZF SINR?
#
# Five antennas sit at fixed points and four users are served with zero
# forcing built from the line-of-sight part of the channel.  Every trial
# redraws the scattered part, so the SINR of a user is random.  We compare
# the moment-matched Gamma law against simulation.

# %%
import numpy as np

from maoutage import oracle, rate, scenarios
from maoutage.statistics import gamma_cdf, moment_set

cfg = scenarios.cdf_config(rician_k=15.0)
t = scenarios.CDF_LAYOUT
ms = moment_set(t, cfg)
print("analytic mean SINR per user:", np.round(ms.ez, 3))

# %% [markdown]
# Draw 1e5 channels for user 1 and look at the CDF at a few points.  The
# first-order fit ignores the curvature correction of the mean.

# %%
samples = oracle.sample_sinr(t, cfg, 0, 100_000, seed=1)
grid = np.quantile(samples.samples, [0.05, 0.2, 0.5, 0.8, 0.95])
print("v        empirical  gamma   first-order")
for v in grid:
    print(f"{v:7.3f}  {oracle.empirical_cdf(samples, v):.3f}      "
          f"{gamma_cdf(ms.fit(0), v):.3f}   {gamma_cdf(ms.fit_first_order(0), v):.3f}")

print("KS distance, second order:", round(oracle.cdf_distance(samples, ms.fit(0)), 4))
print("KS distance, first order: ", round(oracle.cdf_distance(samples, ms.fit_first_order(0)), 4))

# %% [markdown]
# The curvature term helps a lot, yet a gap of about 0.05 remains at K = 15.
# A stronger line-of-sight share does not close it:

# %%
for k in (5, 15, 50, 200):
    c = scenarios.cdf_config(rician_k=k)
    m = moment_set(t, c)
    d = oracle.sample_sinr(t, c, 0, 50_000, seed=2)
    print(f"K={k:>4}: KS {oracle.cdf_distance(d, m.fit(0)):.4f}")

# %% [markdown]
# ## Outage rate
#
# The rate a user can sustain with 20% outage is the 0.2 quantile of the
# SINR, mapped through log2(1 + .).  Sweep the first user's power with the
# others at 10 dBm.

# %%
print("P1 dBm  empirical  closed form  exact gamma")
for p1 in range(0, 21, 4):
    c = scenarios.with_first_power(cfg, p1)
    d = oracle.sample_sinr(t, c, 0, 100_000, seed=3)
    print(f"{p1:6d}  {oracle.empirical_outage_rate(d, 0.2):9.3f}  "
          f"{rate.user_rates(t, c)[0]:11.3f}  {rate.exact_rates(t, c)[0]:11.3f}")

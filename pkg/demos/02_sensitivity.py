"""
Sensitivity to volatility and to contract length
================================================

The premium barely reacts to volatility but grows quickly with the number
of months covered.
"""

import numpy as np

from cloudcover.scenarios import (
    DEFAULT_SIGMA_GRID,
    WIDE_SIGMA_GRID,
    duration_sweep,
    log_log_slope,
    monthly_durations,
    profile_config,
    volatility_sweep,
)

# %%
# Volatility
# ----------
# The strike falls at 43.8% a year while risk-neutral prices drift up at the
# risk-free rate, so most claims are deep in the money and their value is
# driven by the strike, not by the spread of outcomes.
for grid_name, grid in (("0.10-0.145", DEFAULT_SIGMA_GRID), ("0.01-0.20", WIDE_SIGMA_GRID)):
    for years in (1, 5):
        res = volatility_sweep(profile_config("consumer", years), grid)
        print(f"sigma {grid_name}, {years}y contract: premium +{res.end_to_end_change:.3%}")

# %%
# Contract length
# ---------------
# Every extra month adds a claim worth more than the previous one, so the
# total grows faster than linearly. Rates are interpolated between the
# 1-year and 5-year yields.
months = np.arange(1, 61)
res = duration_sweep(profile_config("consumer", 1), monthly_durations(1, 60))
totals = np.array(res.totals)
print()
for m in (1, 3, 6, 12, 24, 36, 48, 60):
    print(f"{m:>2} months: {totals[m - 1]:8.3f}")
print(f"\nlog-log slope, months 1-12 : {log_log_slope(months[:12], totals[:12]):.3f}")
print(f"log-log slope, months 12-60: {log_log_slope(months[11:], totals[11:]):.3f}")
print(f"5-year / 1-year premium    : {totals[59] / totals[11]:.2f}")

# Save the sweep as plot-ready CSV.
with open("duration_sweep.csv", "w") as fh:
    fh.write(res.to_csv())

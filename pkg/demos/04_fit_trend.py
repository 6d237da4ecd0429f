"""
Estimating the trend from a price history
=========================================

Fit the exponential decay to weekly prices and estimate volatility from
log returns, then quote a contract with the fitted values.
"""

import tempfile
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from cloudcover import (
    ContractSpec,
    GbmParams,
    contract_premium,
    estimate_volatility,
    fit_exponential_trend,
    read_price_csv,
    simulate_gbm_path,
)
from cloudcover.market_model import write_price_csv

# Five and a half years of synthetic weekly prices around the 0.438 trend.
weeks = np.arange(1, 301)
t = weeks * 7 / 365.25
path = simulate_gbm_path(GbmParams(s0=0.1, beta=0.438, sigma=0.1), t, seed=2012)
dates = [date(2006, 1, 2) + timedelta(weeks=int(w)) for w in weeks]

csv_path = Path(tempfile.mkdtemp()) / "prices.csv"
write_price_csv(csv_path, dates, path.prices)

series = read_price_csv(csv_path)
trend = fit_exponential_trend(series)
sigma = estimate_volatility(series, mode="time_series")
print(f"fitted p0={trend.p0:.4f}  beta={trend.beta:.4f}  sigma={sigma:.4f}")

# The same fit from the command line:
#   cloudcover fit prices.csv --format json
spec = ContractSpec(s0=float(series.prices[-1]), beta=trend.beta, sigma=sigma, n_periods=12)
sched = contract_premium(spec)
print(f"one year of cover: {sched.total:.4f} ({sched.total_normalized:.3f} months of current price)")

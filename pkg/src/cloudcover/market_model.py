"""Price trend and stochastic price models for cloud storage.

The expected unit price decays exponentially, ``P(t) = p0 * exp(-beta * t)``,
and realised prices follow a geometric Brownian motion around that trend:

    P(t) = s0 * exp((-beta - sigma**2 / 2) * t + sigma * W(t))

so that ``E[P(t)] = s0 * exp(-beta * t)``. Time is measured in years and prices
in currency per GB per month.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from datetime import date
from os import PathLike
from typing import Iterator, Sequence

import numpy as np

from .errors import FittingError, ValidationError
from .rng import BLOCK_SIZE, blocks, substream

DAYS_PER_YEAR = 365.25

#: Decay rate of disk prices fitted on the weekly SATA survey.
REFERENCE_BETA = 0.438

#: USD to EUR conversion used when the provider survey was compiled.
USD_PER_EUR = 1.3


def _as_times(times: Sequence[float] | np.ndarray, *, allow_zero: bool) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValidationError("times must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(t)):
        raise ValidationError("times must be finite")
    if np.any(np.diff(t) <= 0):
        raise ValidationError("times must be strictly increasing")
    if allow_zero and t[0] < 0:
        raise ValidationError("times must be non-negative")
    if not allow_zero and t[0] <= 0:
        raise ValidationError("times must be strictly positive")
    return t


@dataclass(frozen=True)
class PriceSeries:
    """Historical unit prices observed at increasing times (years)."""

    times: np.ndarray
    prices: np.ndarray

    def __post_init__(self):
        t = _as_times(self.times, allow_zero=True)
        p = np.asarray(self.prices, dtype=float)
        if p.shape != t.shape:
            raise ValidationError("times and prices must have the same length")
        if not np.all(np.isfinite(p)) or np.any(p <= 0):
            raise ValidationError("prices must be finite and strictly positive")
        t.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "prices", p)

    def __len__(self) -> int:
        return self.times.size

    @property
    def is_uniform(self) -> bool:
        if len(self) < 2:
            return True
        dt = np.diff(self.times)
        return bool(np.allclose(dt, dt[0], rtol=1e-6, atol=0.0))


@dataclass(frozen=True)
class TrendParams:
    p0: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.p0) and self.p0 > 0):
            raise ValidationError(f"p0 must be positive, got {self.p0}")
        if not math.isfinite(self.beta):
            raise ValidationError("beta must be finite")


@dataclass(frozen=True)
class GbmParams:
    """Spot price, trend decay rate and volatility of the price process."""

    s0: float
    beta: float
    sigma: float

    def __post_init__(self):
        if not (math.isfinite(self.s0) and self.s0 > 0):
            raise ValidationError(f"s0 must be positive, got {self.s0}")
        if not math.isfinite(self.beta):
            raise ValidationError("beta must be finite")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError(f"sigma must be positive, got {self.sigma}")

    @property
    def trend(self) -> TrendParams:
        return TrendParams(self.s0, self.beta)


@dataclass(frozen=True)
class PricePath:
    times: np.ndarray
    prices: np.ndarray
    seed: int | None = field(default=None)

    def __post_init__(self):
        t = _as_times(self.times, allow_zero=False)
        p = np.asarray(self.prices, dtype=float)
        if p.shape != t.shape:
            raise ValidationError("times and prices must have the same length")
        if np.any(p <= 0):
            raise ValidationError("path prices must be strictly positive")
        t.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "prices", p)

    def __eq__(self, other):
        if not isinstance(other, PricePath):
            return NotImplemented
        return (
            self.seed == other.seed
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.prices, other.prices)
        )

    __hash__ = None


# -- trend -------------------------------------------------------------------


def fit_exponential_trend(series: PriceSeries) -> TrendParams:
    """Least-squares fit of ``ln(price) = ln(p0) - beta * t``.

    Parameters
    ----------
    series : PriceSeries
        At least two observations.

    Returns
    -------
    TrendParams
        Intercept ``p0`` (price at ``t = 0``) and decay rate ``beta`` in 1/years.
        ``beta`` is negative for a rising market.
    """
    if len(series) < 2:
        raise ValidationError("trend fitting needs at least 2 observations")
    t = series.times
    y = np.log(series.prices)
    tc = t - t.mean()
    sxx = float(np.dot(tc, tc))
    if sxx == 0.0:
        raise FittingError("all observation times coincide")
    slope = float(np.dot(tc, y - y.mean())) / sxx
    intercept = float(y.mean() - slope * t.mean())
    return TrendParams(p0=math.exp(intercept), beta=-slope)


def expected_price(trend: TrendParams, t):
    """Expected unit price ``p0 * exp(-beta * t)``; also the claim strike at ``t``.

    Accepts a scalar or an array of times.
    """
    ta = np.asarray(t, dtype=float)
    if np.any(ta < 0) or not np.all(np.isfinite(ta)):
        raise ValidationError("t must be finite and non-negative")
    out = trend.p0 * np.exp(-trend.beta * ta)
    return float(out) if out.ndim == 0 else out


# -- simulation ----------------------------------------------------------------


def _log_increments(drift: float, sigma: float, times: np.ndarray):
    dt = np.diff(times, prepend=0.0)
    return drift * dt, sigma * np.sqrt(dt)


def simulate_block(params: GbmParams, times, seed: int, block: int, size: int,
                   *, rate: float | None = None) -> np.ndarray:
    """Paths of block ``block`` as an array of shape ``(size, len(times))``.

    With ``rate=None`` paths follow the physical drift ``-beta``; otherwise the
    risk-neutral drift ``rate``. The draws come from ``substream(seed, block)``
    and are an exact sample of the lognormal law at each time.
    """
    t = _as_times(times, allow_zero=False)
    mu = -params.beta if rate is None else float(rate)
    drift, scale = _log_increments(mu - 0.5 * params.sigma**2, params.sigma, t)
    z = substream(seed, block).standard_normal((size, t.size))
    return np.exp(math.log(params.s0) + np.cumsum(drift + scale * z, axis=1))


def iter_path_blocks(
    params: GbmParams,
    times,
    n_paths: int,
    seed: int,
    *,
    rate: float | None = None,
    block_size: int = BLOCK_SIZE,
) -> Iterator[np.ndarray]:
    """Yield the paths of ``n_paths`` in stream order, one block at a time."""
    _as_times(times, allow_zero=False)
    if n_paths < 1:
        raise ValidationError("n_paths must be positive")
    for k, m in blocks(n_paths, block_size):
        yield simulate_block(params, times, seed, k, m, rate=rate)


def simulate_paths(params: GbmParams, times, n_paths: int, seed: int, *, rate=None) -> np.ndarray:
    """All paths of :func:`iter_path_blocks` stacked into one array."""
    return np.vstack(list(iter_path_blocks(params, times, n_paths, seed, rate=rate)))


def simulate_gbm_path(params: GbmParams, times, seed: int) -> PricePath:
    """One path under the physical measure, sampled exactly at ``times``.

    Identical to the first row of ``simulate_paths(params, times, n, seed)``.
    """
    prices = next(iter_path_blocks(params, times, 1, seed))[0]
    return PricePath(np.asarray(times, dtype=float), prices, seed)


def simulate_risk_neutral_path(params: GbmParams, rate: float, times, seed: int) -> PricePath:
    """One path with log-drift ``rate - sigma**2 / 2`` instead of ``-beta - sigma**2 / 2``."""
    if not math.isfinite(rate):
        raise ValidationError("rate must be finite")
    prices = next(iter_path_blocks(params, times, 1, seed, rate=rate))[0]
    return PricePath(np.asarray(times, dtype=float), prices, seed)


# -- volatility ----------------------------------------------------------------


@dataclass(frozen=True)
class ProviderPriceStats:
    """Cross-sectional mean and standard deviation of provider unit prices."""

    label: str
    mean: float
    std: float


CONSUMER_PRICES = ProviderPriceStats("consumer", mean=0.0955, std=0.0663)
BUSINESS_PRICES = ProviderPriceStats("business", mean=0.185, std=0.145)


def estimate_volatility(data, mode: str = "cross_sectional") -> float:
    """Volatility to use as ``sigma``.

    ``mode="cross_sectional"`` takes the dispersion of provider prices as is
    (a :class:`ProviderPriceStats` or a bare float). This is how the reference
    premiums were produced, even though the dispersion is in currency units.

    ``mode="time_series"`` annualises the sample standard deviation of log
    returns of a uniformly spaced :class:`PriceSeries` with at least 3 points.
    """
    if mode == "cross_sectional":
        if isinstance(data, ProviderPriceStats):
            value = data.std
        elif isinstance(data, PriceSeries):
            raise ValidationError("a PriceSeries needs mode='time_series'")
        else:
            value = float(data)
        if not (math.isfinite(value) and value > 0):
            raise ValidationError("dispersion must be positive")
        return value
    if mode == "time_series":
        if not isinstance(data, PriceSeries):
            raise ValidationError("time_series mode needs a PriceSeries")
        if len(data) < 3:
            raise ValidationError("time_series mode needs at least 3 observations")
        if not data.is_uniform:
            raise ValidationError("time_series mode needs uniformly spaced observations")
        dt = float(np.mean(np.diff(data.times)))
        r = np.diff(np.log(data.prices))
        return float(np.std(r, ddof=1) / math.sqrt(dt))
    raise ValidationError(f"unknown volatility mode {mode!r}")


# -- CSV ingestion -------------------------------------------------------------


def read_price_csv(path: str | PathLike) -> PriceSeries:
    """Load a ``date,price`` CSV with ISO dates into a :class:`PriceSeries`.

    Times are years since the first row (365.25 days per year).
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        if [h.strip().lower() for h in header] != ["date", "price"]:
            raise ValidationError(f"{path}: expected header 'date,price', got {','.join(header)!r}")
        days, prices = [], []
        first = None
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise ValidationError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
            try:
                d = date.fromisoformat(row[0].strip())
                p = float(row[1])
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            if first is None:
                first = d
            days.append((d - first).days)
            prices.append(p)
    return PriceSeries(np.asarray(days, dtype=float) / DAYS_PER_YEAR, np.asarray(prices))


def write_price_csv(path: str | PathLike, dates: Sequence[date], prices: Sequence[float]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "price"])
        for d, p in zip(dates, prices):
            w.writerow([d.isoformat(), repr(float(p))])

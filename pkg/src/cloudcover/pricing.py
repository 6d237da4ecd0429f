"""Closed-form premiums for the multiperiod price-rise insurance contract.

Each monthly claim pays ``max(S(t_i) - s0 * exp(-beta * t_i), 0)``, which is a
European call struck at the expected price. Under Black-Scholes the strike
term collapses and the call value depends on ``s0`` only as a scale factor:

    V(t_i) = s0 * [N(d1) - exp(-(beta + r) * t_i) * N(d2)]
    d1,2   = (r + beta +/- sigma**2 / 2) * sqrt(t_i) / sigma

The contract premium is the sum over the covered periods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import ValidationError

MONTH = 1.0 / 12.0


def std_normal_cdf(x):
    """Standard normal distribution function, accurate to ~1e-16 absolute.

    Works elementwise on arrays.
    """
    out = ndtr(np.asarray(x, dtype=float))
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class RateCurve:
    """Continuously compounded risk-free rates by tenor (years).

    Lookup interpolates linearly in tenor and extrapolates flat.
    """

    tenors: tuple[float, ...]
    rates: tuple[float, ...]

    def __post_init__(self):
        tenors = tuple(float(x) for x in self.tenors)
        rates = tuple(float(x) for x in self.rates)
        if not tenors or len(tenors) != len(rates):
            raise ValidationError("rate curve needs matching, non-empty tenors and rates")
        if tenors[0] <= 0 or any(b <= a for a, b in zip(tenors, tenors[1:])):
            raise ValidationError("rate curve tenors must be positive and strictly increasing")
        if not all(math.isfinite(r) for r in rates):
            raise ValidationError("rates must be finite")
        object.__setattr__(self, "tenors", tenors)
        object.__setattr__(self, "rates", rates)

    @classmethod
    def flat(cls, rate: float) -> "RateCurve":
        return cls((1.0,), (rate,))

    def rate_at(self, tenor: float) -> float:
        return float(np.interp(tenor, self.tenors, self.rates))


#: US Treasury yields quoted for 1-year and 5-year maturities.
TREASURY_CURVE = RateCurve((1.0, 5.0), (0.002, 0.0099))


@dataclass(frozen=True)
class ContractSpec:
    """A contract covering ``n_periods`` settlements at ``i * period_length``.

    The discount rate is one number for the whole contract, read off
    ``rate_curve`` at the final settlement time.
    """

    s0: float
    beta: float
    sigma: float
    n_periods: int
    rate_curve: RateCurve = field(default=TREASURY_CURVE)
    period_length: float = MONTH

    def __post_init__(self):
        if not (math.isfinite(self.s0) and self.s0 > 0):
            raise ValidationError(f"s0 must be positive, got {self.s0}")
        if not math.isfinite(self.beta):
            raise ValidationError("beta must be finite")
        if not (math.isfinite(self.sigma) and self.sigma > 0):
            raise ValidationError(f"sigma must be positive, got {self.sigma}")
        if int(self.n_periods) != self.n_periods or self.n_periods < 1:
            raise ValidationError(f"n_periods must be a positive integer, got {self.n_periods}")
        if not (math.isfinite(self.period_length) and self.period_length > 0):
            raise ValidationError("period_length must be positive")
        object.__setattr__(self, "n_periods", int(self.n_periods))

    @classmethod
    def with_rate(cls, s0, beta, sigma, n_periods, rate, period_length=MONTH) -> "ContractSpec":
        return cls(s0, beta, sigma, n_periods, RateCurve.flat(rate), period_length)

    @property
    def maturity(self) -> float:
        return self.n_periods * self.period_length

    @property
    def rate(self) -> float:
        return self.rate_curve.rate_at(self.maturity)

    def settlement_time(self, i: int) -> float:
        if int(i) != i or not 1 <= i <= self.n_periods:
            raise ValidationError(f"period index must be in 1..{self.n_periods}, got {i}")
        return int(i) * self.period_length

    def settlement_times(self) -> np.ndarray:
        return np.arange(1, self.n_periods + 1) * self.period_length

    def strikes(self) -> np.ndarray:
        return self.s0 * np.exp(-self.beta * self.settlement_times())


@dataclass(frozen=True)
class PeriodPremium:
    period: int
    t: float
    premium: float
    premium_normalized: float


@dataclass(frozen=True)
class PremiumSchedule:
    """Per-period premiums and their total, in currency and as multiples of ``s0``.

    ``total`` is accumulated in ascending period order with ``math.fsum``.
    """

    s0: float
    per_period: tuple[PeriodPremium, ...]
    total: float
    total_normalized: float

    @property
    def values(self) -> np.ndarray:
        return np.array([p.premium for p in self.per_period])

    @property
    def normalized(self) -> np.ndarray:
        return np.array([p.premium_normalized for p in self.per_period])

    def to_dict(self) -> dict:
        return {
            "s0": self.s0,
            "per_period": [
                {
                    "period": p.period,
                    "t": p.t,
                    "premium": p.premium,
                    "premium_normalized": p.premium_normalized,
                }
                for p in self.per_period
            ],
            "total": self.total,
            "total_normalized": self.total_normalized,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PremiumSchedule":
        rows = tuple(
            PeriodPremium(int(r["period"]), float(r["t"]), float(r["premium"]),
                          float(r["premium_normalized"]))
            for r in d["per_period"]
        )
        return cls(float(d["s0"]), rows, float(d["total"]), float(d["total_normalized"]))


def black_scholes_call(spot: float, strike: float, rate: float, sigma: float, t: float) -> float:
    """European call value ``spot*N(d1) - strike*exp(-rate*t)*N(d2)``.

    Raises ValidationError for ``t <= 0`` or ``sigma <= 0``; the intrinsic
    value at expiry is left to the caller.
    """
    if not (spot > 0 and strike > 0):
        raise ValidationError("spot and strike must be positive")
    if not sigma > 0:
        raise ValidationError("sigma must be positive")
    if not t > 0:
        raise ValidationError("t must be positive")
    vol = sigma * math.sqrt(t)
    d1 = (math.log(spot / strike) + (rate + 0.5 * sigma * sigma) * t) / vol
    d2 = d1 - vol
    return spot * std_normal_cdf(d1) - strike * math.exp(-rate * t) * std_normal_cdf(d2)


def _period_values(s0, beta, sigma, rate, t):
    # strike = s0*exp(-beta*t), so ln(spot/strike) = beta*t exactly
    k = rate + beta
    root_t = np.sqrt(t)
    d1 = (k + 0.5 * sigma * sigma) / sigma * root_t
    d2 = (k - 0.5 * sigma * sigma) / sigma * root_t
    return s0 * (ndtr(d1) - np.exp(-k * t) * ndtr(d2))


def period_premium(spec: ContractSpec, i: int) -> float:
    """Value at time 0 of the claim settled at period ``i`` (1-based)."""
    t = spec.settlement_time(i)
    return float(_period_values(spec.s0, spec.beta, spec.sigma, spec.rate, t))


def contract_premium(spec: ContractSpec) -> PremiumSchedule:
    """Fair premium of the whole contract with its per-period breakdown."""
    t = spec.settlement_times()
    v = _period_values(spec.s0, spec.beta, spec.sigma, spec.rate, t)
    rows = tuple(
        PeriodPremium(i, float(ti), float(vi), float(vi) / spec.s0)
        for i, (ti, vi) in enumerate(zip(t, v), start=1)
    )
    total = math.fsum(r.premium for r in rows)
    return PremiumSchedule(spec.s0, rows, total, total / spec.s0)


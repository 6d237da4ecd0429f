"""Reference scenarios: premium table, monthly premium curve and sensitivity sweeps.

All outputs are normalized by the current monthly price (``s0 = 1``) unless a
config says otherwise.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .market_model import BUSINESS_PRICES, CONSUMER_PRICES, REFERENCE_BETA
from .pricing import MONTH, TREASURY_CURVE, ContractSpec, RateCurve, contract_premium

PROFILES = {
    "consumer": CONSUMER_PRICES.std,
    "business": BUSINESS_PRICES.std,
}

#: Default volatility grid: 0.100, 0.105, ..., 0.145.
DEFAULT_SIGMA_GRID = tuple(round(0.10 + 0.005 * k, 3) for k in range(10))

#: Grid 0.01, 0.02, ..., 0.20, whose end-to-end premium increases match the
#: published 1-year and 5-year sensitivities.
WIDE_SIGMA_GRID = tuple(round(0.01 * k, 2) for k in range(1, 21))


@dataclass(frozen=True)
class ScenarioConfig:
    """One pricing scenario.

    ``rate=None`` reads the rate off the rate curve at the contract maturity.
    """

    label: str
    sigma: float
    duration_years: float
    rate: float | None = None
    beta: float = REFERENCE_BETA
    s0: float = 1.0
    period_length: float = MONTH

    def __post_init__(self):
        if not self.duration_years > 0:
            raise ValidationError("duration must be positive")
        n = self.duration_years / self.period_length
        if abs(n - round(n)) > 1e-9 * max(1.0, n):
            raise ValidationError(
                f"duration {self.duration_years} is not a multiple of the period length"
            )

    @property
    def n_periods(self) -> int:
        return int(round(self.duration_years / self.period_length))

    def contract(self, curve: RateCurve = TREASURY_CURVE) -> ContractSpec:
        rate_curve = curve if self.rate is None else RateCurve.flat(self.rate)
        return ContractSpec(self.s0, self.beta, self.sigma, self.n_periods, rate_curve,
                            self.period_length)


def profile_config(profile: str, years: float, **overrides) -> ScenarioConfig:
    if profile not in PROFILES:
        raise ValidationError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
    return ScenarioConfig(label=f"{profile}/{years:g}y", sigma=PROFILES[profile],
                          duration_years=years, **overrides)


TABLE2_SCENARIOS = (
    profile_config("consumer", 1),
    profile_config("consumer", 5),
    profile_config("business", 1),
    profile_config("business", 5),
)

#: Five-year consumer contract for the monthly premium curve. Its rate is the
#: 1-year yield: the quoted month-1 (3.6%) and month-12 (35.6%) premiums are
#: only reproduced with r = 0.002.
MONTHLY_CURVE_CONFIG = profile_config("consumer", 5, rate=0.002)


@dataclass(frozen=True)
class Table2Row:
    category: str
    years: float
    rate: float
    sigma: float
    total_normalized: float


def run_table2(curve: RateCurve = TREASURY_CURVE) -> list[Table2Row]:
    rows = []
    for cfg in TABLE2_SCENARIOS:
        spec = cfg.contract(curve)
        sched = contract_premium(spec)
        rows.append(Table2Row(cfg.label.split("/")[0], cfg.duration_years, spec.rate,
                              cfg.sigma, sched.total_normalized))
    return rows


def monthly_curve(config: ScenarioConfig = MONTHLY_CURVE_CONFIG,
                  curve: RateCurve = TREASURY_CURVE) -> list[tuple[int, float]]:
    """``(period, V(t_i) / s0)`` for every period of the contract."""
    sched = contract_premium(config.contract(curve))
    return [(p.period, p.premium_normalized) for p in sched.per_period]


@dataclass(frozen=True)
class SweepResult:
    """Normalized totals along a parameter axis, relative to ``totals[baseline_index]``."""

    parameter: str
    axis: tuple[float, ...]
    totals: tuple[float, ...]
    baseline_index: int
    relative_change: tuple[float, ...]

    def __post_init__(self):
        if not (len(self.axis) == len(self.totals) == len(self.relative_change)):
            raise ValidationError("sweep arrays must have equal length")
        if not 0 <= self.baseline_index < len(self.axis):
            raise ValidationError("baseline index out of range")

    @classmethod
    def from_totals(cls, parameter: str, axis, totals, baseline_index: int = 0) -> "SweepResult":
        base = totals[baseline_index]
        return cls(parameter, tuple(float(x) for x in axis), tuple(float(v) for v in totals),
                   baseline_index, tuple(float(v) / base - 1.0 for v in totals))

    @property
    def end_to_end_change(self) -> float:
        return self.totals[-1] / self.totals[0] - 1.0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "total_normalized", "relative_change"])
        for row in zip(self.axis, self.totals, self.relative_change):
            w.writerow([repr(v) for v in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "baseline_index": self.baseline_index,
            "points": [
                {"x": x, "total_normalized": v, "relative_change": c}
                for x, v, c in zip(self.axis, self.totals, self.relative_change)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _check_grid(grid: Sequence[float], name: str) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValidationError(f"{name} grid must be a non-empty list")
    if np.any(g <= 0) or not np.all(np.isfinite(g)):
        raise ValidationError(f"{name} grid values must be positive")
    if np.any(np.diff(g) <= 0):
        raise ValidationError(f"{name} grid must be strictly ascending")
    return g


def volatility_sweep(config: ScenarioConfig, sigma_grid: Sequence[float] = DEFAULT_SIGMA_GRID,
                     curve: RateCurve = TREASURY_CURVE) -> SweepResult:
    """Total normalized premium for each sigma; the baseline is the smallest sigma."""
    grid = _check_grid(sigma_grid, "sigma")
    totals = [contract_premium(replace(config, sigma=float(s)).contract(curve)).total_normalized
              for s in grid]
    return SweepResult.from_totals("sigma", grid, totals)


def duration_sweep(base: ScenarioConfig, durations: Sequence[float],
                   curve: RateCurve = TREASURY_CURVE) -> SweepResult:
    """Total normalized premium per contract duration (years), each priced at
    the curve rate for that duration. ``base.rate`` is ignored."""
    grid = _check_grid(durations, "duration")
    totals = []
    for d in grid:
        cfg = replace(base, duration_years=float(d), rate=curve.rate_at(float(d)))
        totals.append(contract_premium(cfg.contract(curve)).total_normalized)
    return SweepResult.from_totals("duration_years", grid, totals)


def monthly_durations(first: int, last: int) -> list[float]:
    return [m / 12 for m in range(first, last + 1)]


def log_log_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of ``ln y`` against ``ln x``."""
    lx, ly = np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float))
    lxc = lx - lx.mean()
    return float(np.dot(lxc, ly - ly.mean()) / np.dot(lxc, lxc))


def premium_ratio(long: float, short: float, sigma: float = CONSUMER_PRICES.std,
                  curve: RateCurve = TREASURY_CURVE) -> float:
    """Ratio of total premiums for two durations, each at its own curve rate."""
    res = duration_sweep(ScenarioConfig("ratio", sigma, short), [short, long], curve)
    return res.totals[1] / res.totals[0]


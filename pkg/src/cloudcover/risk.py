"""Claim settlement for the price-rise insurance contract.

At each settlement time the insured compares the market unit price with the
trend price ``s0 * exp(-beta * t)`` and is paid the excess. The insured's cash
flows are ``-premium`` at time 0 followed by one (non-negative) claim per
period.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .market_model import GbmParams, PricePath, TrendParams, expected_price, iter_path_blocks
from .pricing import ContractSpec


def claim_payout(actual_price, strike):
    """Indemnity ``max(actual_price - strike, 0)``; elementwise on arrays."""
    a = np.asarray(actual_price, dtype=float)
    k = np.asarray(strike, dtype=float)
    if np.any(a < 0) or np.any(k < 0):
        raise ValidationError("prices and strikes must be non-negative")
    out = np.maximum(a - k, 0.0)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class ClaimEvent:
    t: float
    actual_price: float
    strike: float
    payout: float


@dataclass(frozen=True)
class CashFlowSchedule:
    """Insured's cash flows for one realised price path.

    ``premium_at_zero`` is stored as a positive magnitude; it is paid by the
    insured, so its signed flow is ``-premium_at_zero``.
    """

    premium_at_zero: float
    claims: tuple[ClaimEvent, ...]

    def signed_flows(self) -> list[tuple[float, float]]:
        return [(0.0, -self.premium_at_zero)] + [(c.t, c.payout) for c in self.claims]

    def discounted_claims(self, rate: float) -> float:
        return math.fsum(c.payout * math.exp(-rate * c.t) for c in self.claims)

    def net_present_value(self, rate: float) -> float:
        return self.discounted_claims(rate) - self.premium_at_zero

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "actual", "strike", "payout"])
        for c in self.claims:
            w.writerow([repr(c.t), repr(c.actual_price), repr(c.strike), repr(c.payout)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "premium_at_zero": self.premium_at_zero,
            "claims": [
                {"t": c.t, "actual": c.actual_price, "strike": c.strike, "payout": c.payout}
                for c in self.claims
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _settlement_columns(spec: ContractSpec, times: np.ndarray) -> np.ndarray:
    wanted = spec.settlement_times()
    idx = np.searchsorted(times, wanted)
    idx = np.clip(idx, 0, times.size - 1)
    # tolerate only representation noise, never interpolate
    ok = np.isclose(times[idx], wanted, rtol=1e-12, atol=1e-12)
    if not np.all(ok):
        missing = wanted[~ok]
        raise ValidationError(f"path has no sample at settlement time(s) {missing[:3].tolist()}")
    return idx


def settle_contract(spec: ContractSpec, path: PricePath, premium: float) -> CashFlowSchedule:
    """Replay the contract along ``path`` and return the insured's cash flows."""
    if not (math.isfinite(premium) and premium >= 0):
        raise ValidationError("premium must be a non-negative magnitude")
    cols = _settlement_columns(spec, path.times)
    times = spec.settlement_times()
    strikes = expected_price(TrendParams(spec.s0, spec.beta), times)
    actual = path.prices[cols]
    payouts = claim_payout(actual, strikes)
    claims = tuple(
        ClaimEvent(float(t), float(a), float(k), float(p))
        for t, a, k, p in zip(times, actual, strikes, payouts)
    )
    return CashFlowSchedule(float(premium), claims)


@dataclass(frozen=True)
class SettlementStats:
    """Summary of discounted claim totals over many simulated paths."""

    measure: str
    n_paths: int
    seed: int
    mean: float
    std_error: float
    quantiles: dict[str, float]
    payout_fraction: float

    def to_dict(self) -> dict:
        return {
            "measure": self.measure,
            "n_paths": self.n_paths,
            "seed": self.seed,
            "mean_discounted_claims": self.mean,
            "std_error": self.std_error,
            "quantiles": self.quantiles,
            "payout_fraction": self.payout_fraction,
        }


MEASURES = ("risk-neutral", "physical", "trend")
_QUANTILES = (0.05, 0.25, 0.5, 0.75, 0.95)


def discounted_claim_totals(spec: ContractSpec, n_paths: int, seed: int,
                            measure: str = "risk-neutral") -> tuple[np.ndarray, float]:
    """Discounted claim totals per simulated path, and the fraction of paying periods.

    ``measure`` selects risk-neutral paths (drift ``r``), physical paths (drift
    ``-beta``) or the deterministic trend itself.
    """
    if measure not in MEASURES:
        raise ValidationError(f"measure must be one of {MEASURES}")
    if n_paths < 1:
        raise ValidationError("n_paths must be positive")
    times = spec.settlement_times()
    strikes = spec.strikes()
    disc = np.exp(-spec.rate * times)
    if measure == "trend":
        trend = expected_price(TrendParams(spec.s0, spec.beta), times)
        chunks = [np.broadcast_to(trend, (n_paths, times.size))]
    else:
        params = GbmParams(spec.s0, spec.beta, spec.sigma)
        rate = spec.rate if measure == "risk-neutral" else None
        chunks = iter_path_blocks(params, times, n_paths, seed, rate=rate)
    totals, paying = [], 0
    for prices in chunks:
        pay = claim_payout(prices, strikes)
        totals.append(pay @ disc)
        paying += int(np.count_nonzero(pay))
    return np.concatenate(totals), paying / (n_paths * times.size)


def settlement_statistics(spec: ContractSpec, n_paths: int, seed: int,
                          measure: str = "risk-neutral") -> SettlementStats:
    totals, frac = discounted_claim_totals(spec, n_paths, seed, measure)
    se = float(np.std(totals, ddof=1) / math.sqrt(totals.size)) if totals.size > 1 else 0.0
    qs = np.quantile(totals, _QUANTILES)
    return SettlementStats(
        measure=measure,
        n_paths=n_paths,
        seed=seed,
        mean=float(np.mean(totals)),
        std_error=se,
        quantiles={f"q{int(round(q * 100)):02d}": float(v) for q, v in zip(_QUANTILES, qs)},
        payout_fraction=frac,
    )

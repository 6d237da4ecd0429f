"""Monte Carlo cross-check of the closed-form premiums.

Prices are simulated under the risk-neutral law (log-drift ``r - sigma**2/2``)
and claims are discounted at ``r``. Nothing here calls the closed-form code.

Paths are split into fixed blocks (:data:`cloudcover.rng.BLOCK_SIZE`); each
block draws from its own substream and block statistics are merged in block
order, so an estimate is bit-identical for any ``workers`` value.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import ValidationError
from .market_model import GbmParams, simulate_block
from .pricing import ContractSpec
from .rng import blocks

MIN_PATHS = 100


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n_paths: int
    seed: int

    def confidence_interval(self, level: float = 0.99) -> tuple[float, float]:
        half = norm.ppf(0.5 + level / 2) * self.std_error
        return self.mean - half, self.mean + half

    def contains(self, value: float, level: float = 0.99) -> bool:
        lo, hi = self.confidence_interval(level)
        return lo <= value <= hi

    def z_score(self, value: float) -> float:
        """Standardised distance of ``value`` from the estimate."""
        diff = self.mean - value
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error


def _merge(stats):
    # Chan et al. pairwise update of (count, mean, M2), applied in block order
    n, mean, m2 = 0, 0.0, 0.0
    for nb, mb, m2b in stats:
        delta = mb - mean
        tot = n + nb
        mean += delta * nb / tot
        m2 += m2b + delta * delta * n * nb / tot
        n = tot
    return n, mean, m2


def _block_stats(x: np.ndarray):
    mb = float(np.mean(x))
    return x.size, mb, float(np.sum((x - mb) ** 2))


def _estimate(block_fn, n_paths: int, seed: int, workers: int) -> McEstimate:
    if n_paths < MIN_PATHS:
        raise ValidationError(f"n_paths must be at least {MIN_PATHS}")
    if seed < 0:
        raise ValidationError("seed must be non-negative")
    work = blocks(n_paths)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(lambda km: _block_stats(block_fn(*km)), work))
    else:
        stats = [_block_stats(block_fn(k, m)) for k, m in work]
    n, mean, m2 = _merge(stats)
    se = math.sqrt(m2 / (n - 1) / n)
    return McEstimate(mean=mean, std_error=se, n_paths=n, seed=seed)


def _params(spec: ContractSpec) -> GbmParams:
    return GbmParams(spec.s0, spec.beta, spec.sigma)


def mc_period_price(spec: ContractSpec, i: int, n_paths: int, seed: int,
                    *, rate: float | None = None, workers: int = 1) -> McEstimate:
    """Discounted expected claim of period ``i`` from terminal lognormal draws.

    ``rate`` overrides the contract rate for the simulation only (used to
    check that the comparison detects a wrong rate).
    """
    t = spec.settlement_time(i)
    r = spec.rate if rate is None else rate
    strike = spec.s0 * math.exp(-spec.beta * t)
    disc = math.exp(-r * t)
    params = _params(spec)

    def block(k, m):
        s_t = simulate_block(params, [t], seed, k, m, rate=r)[:, 0]
        return disc * np.maximum(s_t - strike, 0.0)

    return _estimate(block, n_paths, seed, workers)


def mc_contract_price(spec: ContractSpec, n_paths: int, seed: int,
                      *, rate: float | None = None, workers: int = 1) -> McEstimate:
    """Discounted sum of all claims along full monthly paths.

    The standard error comes from per-path totals, so it includes the
    correlation between claims on the same path.
    """
    times = spec.settlement_times()
    r = spec.rate if rate is None else rate
    strikes = spec.strikes()
    disc = np.exp(-r * times)
    params = _params(spec)

    def block(k, m):
        prices = simulate_block(params, times, seed, k, m, rate=r)
        return np.maximum(prices - strikes, 0.0) @ disc

    return _estimate(block, n_paths, seed, workers)

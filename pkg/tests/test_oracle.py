import math

import numpy as np
import pytest

from cloudcover import (
    ContractSpec,
    ValidationError,
    contract_premium,
    mc_contract_price,
    mc_period_price,
    period_premium,
)
from cloudcover.oracle import McEstimate, _merge


def test_period_estimate_brackets_anchor(consumer_1y):
    est = mc_period_price(consumer_1y, 12, 1_000_000, seed=1)
    assert abs(est.mean - 0.356) <= 3 * est.std_error + 0.0005
    assert abs(est.z_score(period_premium(consumer_1y, 12))) <= 3


def test_degenerate_sigma_is_deterministic():
    spec = ContractSpec.with_rate(1.0, 0.438, 1e-12, 12, 0.002)
    t = 12 / 12
    est = mc_period_price(spec, 12, 1000, seed=3)
    expected = max(math.exp(0.002 * t) - math.exp(-0.438 * t), 0.0) * math.exp(-0.002 * t)
    assert est.mean == pytest.approx(expected, rel=1e-9)
    assert est.std_error < 1e-10


def test_std_error_shrinks_with_more_paths(consumer_1y):
    ratios = []
    for s in range(5):
        a = mc_period_price(consumer_1y, 6, 20_000, seed=100 + s)
        b = mc_period_price(consumer_1y, 6, 40_000, seed=200 + s)
        ratios.append(b.std_error / a.std_error)
    assert np.mean(ratios) == pytest.approx(1 / math.sqrt(2), rel=0.2)


def test_contract_estimate(consumer_1y):
    est = mc_contract_price(consumer_1y, 200_000, seed=5)
    assert abs(est.z_score(contract_premium(consumer_1y).total)) <= 4


def test_single_period_contract_matches_period_estimate():
    spec = ContractSpec.with_rate(1.0, 0.438, 0.0663, 1, 0.002)
    a = mc_contract_price(spec, 50_000, seed=9)
    b = mc_period_price(spec, 1, 50_000, seed=9)
    assert abs(a.mean - b.mean) <= 2 * max(a.std_error, b.std_error)
    assert a == b  # shared seed policy: identical draws


def test_contract_error_is_not_root_sum_square(consumer_1y):
    # claims on one path are positively correlated
    total = mc_contract_price(consumer_1y, 50_000, seed=6)
    rss = math.sqrt(sum(mc_period_price(consumer_1y, i, 50_000, seed=6).std_error ** 2
                        for i in range(1, 13)))
    assert total.std_error > rss


def test_determinism_and_worker_independence(business_5y):
    a = mc_contract_price(business_5y, 150_000, seed=77)
    b = mc_contract_price(business_5y, 150_000, seed=77)
    c = mc_contract_price(business_5y, 150_000, seed=77, workers=4)
    assert a == b == c
    assert mc_contract_price(business_5y, 150_000, seed=78) != a


def test_wrong_rate_is_detected(consumer_1y):
    est = mc_contract_price(consumer_1y, 100_000, seed=1, rate=0.05)
    assert abs(est.z_score(contract_premium(consumer_1y).total)) > 4


def test_argument_checks(consumer_1y):
    with pytest.raises(ValidationError):
        mc_period_price(consumer_1y, 1, 99, seed=1)
    with pytest.raises(ValidationError):
        mc_period_price(consumer_1y, 13, 1000, seed=1)
    with pytest.raises(ValidationError):
        mc_contract_price(consumer_1y, 1000, seed=-1)


def test_block_merge_matches_pooled_statistics():
    rng = np.random.default_rng(0)
    x = rng.lognormal(size=10_001)
    parts = np.array_split(x, 7)
    n, mean, m2 = _merge([(p.size, p.mean(), ((p - p.mean()) ** 2).sum()) for p in parts])
    assert n == x.size
    assert mean == pytest.approx(x.mean(), rel=1e-13)
    assert m2 / (n - 1) == pytest.approx(x.var(ddof=1), rel=1e-12)


def test_confidence_interval():
    est = McEstimate(mean=1.0, std_error=0.1, n_paths=100, seed=0)
    lo, hi = est.confidence_interval(0.99)
    assert hi - 1.0 == pytest.approx(0.2575829, rel=1e-6)
    assert est.contains(1.25) and not est.contains(1.3)
    assert McEstimate(1.0, 0.0, 100, 0).z_score(1.0) == 0.0

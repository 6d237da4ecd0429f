"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line shown in the terminal summary.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from cloudcover import (
    ContractSpec,
    GbmParams,
    PriceSeries,
    black_scholes_call,
    contract_premium,
    fit_exponential_trend,
    mc_contract_price,
    period_premium,
    settlement_statistics,
    simulate_gbm_path,
)
from cloudcover.scenarios import (
    DEFAULT_SIGMA_GRID,
    MONTHLY_CURVE_CONFIG,
    duration_sweep,
    log_log_slope,
    monthly_curve,
    monthly_durations,
    profile_config,
    volatility_sweep,
)

BETA = 0.438
TABLE2 = [
    # sigma, rate, years, published normalized premium
    (0.0663, 0.002, 1, 2.469),
    (0.0663, 0.0099, 5, 36.504),
    (0.145, 0.002, 1, 2.481),
    (0.145, 0.0099, 5, 36.516),
]


def reference_spec(sigma, rate, years):
    return ContractSpec.with_rate(1.0, BETA, sigma, 12 * years, rate)


def test_ac1_reference_premiums(report):
    details, ok = [], True
    for sigma, rate, years, want in TABLE2:
        got = contract_premium(reference_spec(sigma, rate, years)).total_normalized
        rel = abs(got / want - 1)
        ok &= rel <= 0.005
        details.append(f"{got:.3f}/{want} ({rel:.2e})")
    report("AC1 reference premiums within 0.5%", ok, ", ".join(details))
    assert ok


def test_ac2_per_period_anchors(report):
    curve = dict(monthly_curve(MONTHLY_CURVE_CONFIG))
    v1, v12, v60 = curve[1], curve[12], curve[60]
    ok = abs(v1 - 0.036) <= 0.001 and abs(v12 - 0.356) <= 0.002 and 0.88 <= v60 <= 0.91
    report("AC2 per-period anchors", ok, f"V1={v1:.4f} V12={v12:.4f} V60={v60:.4f}")
    assert ok


def test_ac3_oracle_equivalence(report):
    zs = []
    for k, (sigma, rate, years, _) in enumerate(TABLE2):
        spec = reference_spec(sigma, rate, years)
        est = mc_contract_price(spec, 1_000_000, seed=1000 + k)
        zs.append(est.z_score(contract_premium(spec).total))
    table_ok = all(abs(z) <= 3 for z in zs)

    rng = np.random.default_rng(20120612)
    inside = 0
    for k in range(30):
        spec = ContractSpec.with_rate(
            1.0,
            beta=rng.uniform(-0.2, 0.8),
            sigma=rng.uniform(0.05, 0.5),
            n_periods=int(rng.integers(1, 61)),
            rate=rng.uniform(0.0, 0.05),
        )
        est = mc_contract_price(spec, 200_000, seed=2000 + k)
        inside += est.contains(contract_premium(spec).total, level=0.99)
    random_ok = inside >= 27
    ok = table_ok and random_ok
    report("AC3 Monte Carlo agreement", ok,
           f"reference contracts z={[round(z, 2) for z in zs]}; random specs in 99% CI {inside}/30")
    assert ok


def test_ac4_black_scholes_consistency(report):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(10_000):
        spec = ContractSpec.with_rate(
            s0=rng.uniform(1e-3, 10.0),
            beta=rng.uniform(-0.2, 0.8),
            sigma=rng.uniform(0.05, 0.5),
            n_periods=int(rng.integers(1, 61)),
            rate=rng.uniform(0.0, 0.05),
        )
        i = int(rng.integers(1, spec.n_periods + 1))
        t = spec.settlement_time(i)
        bs = black_scholes_call(spec.s0, spec.s0 * math.exp(-spec.beta * t), spec.rate, spec.sigma, t)
        worst = max(worst, abs(period_premium(spec, i) / bs - 1))
    ok = worst <= 1e-12
    report("AC4 closed form equals Black-Scholes", ok, f"max relative gap {worst:.2e}")
    assert ok


@pytest.fixture(scope="module")
def duration_totals():
    res = duration_sweep(profile_config("consumer", 1), monthly_durations(1, 60))
    return np.arange(1, 61), np.array(res.totals)


def test_ac5a_duration_slope_short(report, duration_totals):
    months, totals = duration_totals
    slope = log_log_slope(months[:12], totals[:12])
    ok = abs(slope - 2.0) <= 0.2
    report("AC5a log-log slope, months 1-12, 2.0 +/- 0.2", ok, f"slope={slope:.4f}")
    assert ok


def test_ac5b_duration_slope_long(report, duration_totals):
    months, totals = duration_totals
    slope = log_log_slope(months[11:], totals[11:])
    ok = 1.0 < slope < 2.0
    report("AC5b log-log slope, months 12-60, in (1, 2)", ok, f"slope={slope:.4f}")
    assert ok


def test_ac6_volatility_ordering(report):
    res1 = volatility_sweep(profile_config("consumer", 1), DEFAULT_SIGMA_GRID)
    res5 = volatility_sweep(profile_config("consumer", 5), DEFAULT_SIGMA_GRID)
    increasing = all(np.all(np.diff(r.totals) > 0) for r in (res1, res5))
    ok = increasing and res1.end_to_end_change > res5.end_to_end_change
    report("AC6 volatility sensitivity ordering", ok,
           f"1y +{res1.end_to_end_change:.3%}, 5y +{res5.end_to_end_change:.3%} over sigma 0.10-0.145")
    assert ok


def test_ac7_trend_fit_recovery(report):
    t = np.arange(0, 5.01, 0.25)
    fit = fit_exponential_trend(PriceSeries(t, 0.1 * np.exp(-BETA * t)))
    exact = abs(fit.p0 / 0.1 - 1) <= 1e-9 and abs(fit.beta / BETA - 1) <= 1e-9

    tw = np.arange(1, 301) * 7 / 365.25
    path = simulate_gbm_path(GbmParams(0.1, BETA, 0.1), tw, seed=2012)
    noisy = fit_exponential_trend(PriceSeries(tw, path.prices))
    ok = exact and abs(noisy.beta - BETA) <= 0.1
    report("AC7 trend fit recovery", ok,
           f"noiseless beta={fit.beta:.12f}, seeded GBM beta={noisy.beta:.4f}")
    assert ok


def test_ac8_settlement_fairness(report):
    spec = reference_spec(0.0663, 0.002, 1)
    stats = settlement_statistics(spec, 100_000, seed=8)
    premium = contract_premium(spec).total
    z = (stats.mean - premium) / stats.std_error
    ok = abs(z) <= 3
    report("AC8 settlement replay is fair", ok,
           f"mean={stats.mean:.4f} premium={premium:.4f} z={z:.2f}")
    assert ok


COMMANDS = [
    ["quote", "--profile", "consumer", "--years", "1"],
    ["quote", "--profile", "business", "--years", "5", "--format", "json"],
    ["verify", "--profile", "consumer", "--years", "1", "--seed", "9", "--format", "json"],
    ["verify", "--profile", "business", "--years", "5", "--n-paths", "200000", "--seed", "9"],
    ["sweep", "volatility", "--years", "5", "--format", "csv"],
    ["sweep", "duration", "--format", "json"],
    ["settle", "--seed", "9", "--format", "json"],
    ["settle", "--measure", "physical", "--seed", "9", "--n-paths", "20000"],
]


def test_ac9_determinism(report, tmp_path):
    csv_path = tmp_path / "prices.csv"
    csv_path.write_text("date,price\n2020-01-06,0.10\n2020-01-13,0.0995\n2020-01-20,0.0993\n")
    commands = COMMANDS + [["fit", str(csv_path), "--format", "json"]]
    bad = []
    for argv in commands:
        cmd = [sys.executable, "-m", "cloudcover", *argv]
        a = subprocess.run(cmd, capture_output=True)
        b = subprocess.run(cmd, capture_output=True)
        if a.returncode != 0 or a.stdout != b.stdout or not a.stdout:
            bad.append(argv[0])
    ok = not bad
    report("AC9 byte-identical repeated runs", ok,
           f"{len(commands) - len(bad)}/{len(commands)} commands stable" + (f"; unstable: {bad}" if bad else ""))
    assert ok

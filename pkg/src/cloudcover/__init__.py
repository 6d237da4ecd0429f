"""Pricing of insurance against cloud storage price rises.

The insured pays a premium up front and is reimbursed every month by the
amount the market unit price exceeds its expected exponential-decay trend.
Each monthly claim is a call option on the storage price, so the premium is a
sum of Black-Scholes values, checked here against Monte Carlo simulation.
"""

__version__ = "0.1.0"

from .errors import FittingError, ValidationError
from .market_model import (
    BUSINESS_PRICES,
    CONSUMER_PRICES,
    REFERENCE_BETA,
    GbmParams,
    PricePath,
    PriceSeries,
    ProviderPriceStats,
    TrendParams,
    estimate_volatility,
    expected_price,
    fit_exponential_trend,
    read_price_csv,
    simulate_gbm_path,
    simulate_paths,
    simulate_risk_neutral_path,
)
from .oracle import McEstimate, mc_contract_price, mc_period_price
from .pricing import (
    MONTH,
    TREASURY_CURVE,
    ContractSpec,
    PremiumSchedule,
    RateCurve,
    black_scholes_call,
    contract_premium,
    period_premium,
    std_normal_cdf,
)
from .risk import CashFlowSchedule, ClaimEvent, claim_payout, settle_contract, settlement_statistics
from .scenarios import (
    ScenarioConfig,
    SweepResult,
    duration_sweep,
    monthly_curve,
    run_table2,
    volatility_sweep,
)

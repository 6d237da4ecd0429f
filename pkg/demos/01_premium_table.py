"""
Premiums for the four reference contracts
=========================================

A cloud storage customer pays ``s0`` per GB per month today and expects the
price to fall like ``s0 * exp(-0.438 t)``. An insurer reimburses the customer
every month by however much the market price sits above that curve. What
should the customer pay up front for that cover?
"""

from cloudcover import ContractSpec, contract_premium
from cloudcover.scenarios import MONTHLY_CURVE_CONFIG, monthly_curve, run_table2

# Consumer and business prices differ mainly in their dispersion across
# providers (0.0663 vs 0.145); the contract lasts 1 or 5 years and is
# discounted at the Treasury yield for that maturity.
print(f"{'category':<10}{'years':>6}{'rate':>8}{'premium / s0':>14}")
for row in run_table2():
    print(f"{row.category:<10}{row.years:>6}{row.rate:>8.4f}{row.total_normalized:>14.3f}")

# The premium is proportional to today's price. For a consumer paying
# 0.0955 EUR per GB-month, one year of cover costs:
spec = ContractSpec(s0=0.0955, beta=0.438, sigma=0.0663, n_periods=12)
print(f"\none year of cover at s0=0.0955: {contract_premium(spec).total:.4f} EUR per GB")

# %%
# How the cost builds up month by month
# -------------------------------------
# Each month of cover is a separate call option. Near-term months are cheap
# because the price has little time to stray; distant months approach the
# full monthly price because the strike keeps falling.
curve = dict(monthly_curve(MONTHLY_CURVE_CONFIG))
for month in (1, 6, 12, 24, 36, 48, 60):
    bar = "#" * int(round(curve[month] * 50))
    print(f"month {month:>2}  {curve[month]:6.3f}  {bar}")

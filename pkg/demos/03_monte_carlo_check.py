"""
Checking the closed form by simulation
======================================

The closed-form premium rests on Black-Scholes. Here we simulate storage
prices instead: once under the risk-neutral law to price the contract
directly, and once by replaying monthly settlements along each path.
"""

from cloudcover import ContractSpec, contract_premium, mc_contract_price, settlement_statistics

spec = ContractSpec(s0=1.0, beta=0.438, sigma=0.145, n_periods=60)
closed = contract_premium(spec).total

est = mc_contract_price(spec, n_paths=1_000_000, seed=1, workers=4)
lo, hi = est.confidence_interval(0.99)
print(f"closed form     {closed:.4f}")
print(f"Monte Carlo     {est.mean:.4f} +/- {est.std_error:.4f}  (99% CI {lo:.4f}-{hi:.4f})")
print(f"z               {est.z_score(closed):+.2f}")

# %%
# Settlement replay
# -----------------
# Under the risk-neutral measure the average discounted claims equal the
# premium. Under the physical measure prices follow the trend on average,
# so the insurer pays out much less than it charges.
for measure in ("risk-neutral", "physical", "trend"):
    s = settlement_statistics(spec, 100_000, seed=2, measure=measure)
    print(f"{measure:>12}: mean claims {s.mean:8.4f}, months with a claim {s.payout_fraction:6.1%}")

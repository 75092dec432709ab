"""
Replaying the t=1 liquidation on the two reference portfolios.

A 10% withdrawal of deposits (d = 0.96) forces the bank to raise 0.096 in
cash. Model 4 sells whatever loses the least to haircuts; Model 3 must also
ship at least theta2 of expected loss off the balance sheet.
"""

import numpy as np

from loanliq import build_liquidation_problem, load_config, post_liquidation_state, solve_liquidation
from loanliq.analysis import injected_decision
from loanliq.report import fmt_pct, fmt_vector

cfg = load_config("paper_example")
loans, bank = cfg.loans, cfg.bank_config()

for model, weights in cfg.portfolios:
    dec = injected_decision(weights, loans, bank)
    print(f"\nModel {model} portfolio {fmt_vector(weights)}  equity {fmt_pct(dec.equity)}")

    runs = [("Model 4", False, None)] + [(f"Model 3 theta2={fmt_pct(t, 3)}", True, t) for t in cfg.theta2]
    for label, floor, t2 in runs:
        plan = solve_liquidation(build_liquidation_problem(dec, loans, bank, floor, theta2=t2))
        state = post_liquidation_state(dec, plan, bank, loans)
        print(f"  {label:24s} sells {fmt_vector(plan.betas)}"
              f"  haircut loss {plan.haircut_loss:.5f}  P(insolvent) {state.insolvency_probability:.6f}")

# The safe loan is the cheapest source of cash, so Model 4 empties it first.
# Raising theta2 trades safe-loan sales for the riskier, pricier loan 2.
cash = np.array([(1 - l.haircut) * (1 + l.rate / 2) for l in loans])
print("\ncash per unit sold:", np.round(cash, 4))

"""
Monotonicity sweeps and feasible-region exports.

Tightening the haircut cap pushes the bank out of the least liquid loan;
raising the liquidation risk floor pushes sales out of the safe loan. The
region files are plain CSV point clouds, one per constraint surface.
"""

import sys
import tempfile
from pathlib import Path

import numpy as np

from loanliq import cap_sweep, export_region, floor_sweep, load_config
from loanliq.analysis import injected_decision
from loanliq.report import fmt_vector

cfg = load_config("paper_example")
loans, bank = cfg.loans, cfg.bank_config()

print("haircut cap  ->  Model 1 portfolio")
sweep = cap_sweep(loans, bank, np.linspace(0.0, 0.2, 9))
for row in sweep.rows:
    print(f"  {row.haircut_cap:5.3f}  {fmt_vector(row.weights)}")
print("least liquid weight non-increasing:", sweep.illiquid_non_increasing)

dec = injected_decision(cfg.injected[1], loans, bank)
print("\ntheta2  ->  Model 3 sales")
fs = floor_sweep(dec, loans, bank, np.linspace(0.0, 0.0014, 8))
for row in fs.rows:
    print(f"  {row.theta2:.4%}  {fmt_vector(row.plan.betas) if row.feasible else 'infeasible'}")
print("safe-loan sales non-increasing:", fs.safe_sales_non_increasing)

out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="regions_"))
out.mkdir(parents=True, exist_ok=True)
for model in (3, "haircut-bound"):
    for ds in export_region(model, loans, bank, 40, dec.weights, 0.001, dec.equity):
        path = ds.write(out, f"model{model}_" if model == 3 else "")
        print(f"wrote {path} ({len(ds.points)} points)")

"""
Train or not: one receive antenna
=================================

With a single receive antenna the decision is binary. We print the smallest
block length that makes training worthwhile for a few Rician factors, then
check one point against Monte Carlo.
"""

import math

from wetrain.channel import RicianSpec, db_to_linear
from wetrain.energy import default_params
from wetrain.optimizer import miso_training_threshold, solve_miso_rician
from wetrain.simkit import TrialPlan, run_plan

print(" M   K=3dB  K=10dB   (noise-free limit)")
for M in (2, 5, 10, 20):
    lo = miso_training_threshold(M, float(db_to_linear(3)), math.inf)
    hi = miso_training_threshold(M, float(db_to_linear(10)), math.inf)
    print(f"{M:2d}   {lo:5d}  {hi:6d}")

# A stronger line of sight shrinks the training region.
p = default_params(M=5, N=1, T=200, K=float(db_to_linear(3)))
spec = RicianSpec.rank_one(p.M, p.N, p.K, p.beta)
report = solve_miso_rician(p)
print("decision:", "train" if report.trained else "no training", report.design)

for design in (report.design, "los", "ideal"):
    s = run_plan(TrialPlan(p, spec, design, 10000, master_seed=1))
    name = design if isinstance(design, str) else "optimized"
    print(f"{name:>9}: {s.mean_net * 1e3:.4f} mJ +/- {s.halfwidth95 * 1e3:.4f}")
print(f"predicted: {report.predicted_net * 1e3:.4f} mJ")

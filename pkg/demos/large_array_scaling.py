"""
Large transmit arrays
=====================

Rank-one line of sight, K = 1, five receive antennas, T = 1000. As M grows
the optimized training scheme approaches perfect-CSI beamforming up to the
pilot overhead (T - N) / T.
"""

from wetrain.channel import RicianSpec
from wetrain.energy import default_params
from wetrain.optimizer import closed_form_n1_rank1, solve_large_m
from wetrain.simkit import TrialPlan, run_plan

for M in (10, 50, 100, 200):
    p = default_params(M=M, N=5, T=1000, K=1.0)
    spec = RicianSpec.rank_one(M, 5, 1.0, p.beta)
    report = solve_large_m(p, spec.hbar)
    ideal = run_plan(TrialPlan(p, spec, "ideal", 4000, master_seed=M)).mean_net
    print(f"M = {M:3d}  N1* = {report.design.n1}  (rank-one rule {closed_form_n1_rank1(p)})  "
          f"ratio to ideal {report.predicted_net / ideal:.4f}")
print("overhead limit", (1000 - 5) / 1000)

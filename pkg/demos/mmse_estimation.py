"""
Pilot training and MMSE estimation
==================================

Send orthogonal pilots from two of three receive antennas, estimate the
channel at the transmitter and compare the empirical estimate and error
variances with their closed forms.
"""

import numpy as np

from wetrain.channel import RicianSpec, db_to_linear, draw_channel
from wetrain.energy import default_params
from wetrain.training import PilotConfig, mmse_estimate, simulate_training

p = default_params(M=4, N=3, K=float(db_to_linear(3.0)))
spec = RicianSpec.rank_one(p.M, p.N, p.K, p.beta)
rng = np.random.default_rng(0)

cfg = PilotConfig(tau=2, power=5e-6, trained_set=(0, 2))

# A batch of independent blocks; estimation is vectorized over the first axis.
ch = draw_channel(spec, rng, size=20000)
y = simulate_training(ch, spec, cfg, p.sigma_r2, rng)
est = mmse_estimate(y, spec, cfg, p.sigma_r2)

err = ch.hw[:, [0, 2]] - est.hw1_hat
print(f"estimate variance  {np.mean(np.abs(est.hw1_hat) ** 2):.4f}  (closed form {est.sigma2_hat:.4f})")
print(f"error variance     {np.mean(np.abs(err) ** 2):.4f}  (closed form {est.sigma2_tilde:.4f})")
print(f"pilot energy       {est.energy_spent * 1e6:.1f} uJ")

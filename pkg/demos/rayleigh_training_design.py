"""
How many receive antennas are worth training?
=============================================

Rayleigh fading, five transmit and ten receive antennas. For each block
length we print the net harvested energy for every number of trained
antennas and mark the optimum.
"""

import numpy as np

from wetrain.energy import default_params
from wetrain.optimizer import solve_rayleigh

# Standard budget: P_f = 1 W, beta = -60 dB, sigma^2 = -90 dBm, eta = 0.5
for T in (25, 50, 100):
    p = default_params(M=5, N=10, T=T)
    report = solve_rayleigh(p)
    values = np.array(report.values) * 1e3   # mJ
    print(f"T = {T}:  N1* = {report.design.n1},  P_r* = {report.design.pr * 1e6:.2f} uW")
    print("   " + " ".join(f"{v:6.3f}" for v in values))

# With a single transmit antenna there is nothing to beamform, so training never pays.
print("M = 1, T = 1000 trains:", solve_rayleigh(default_params(M=1, T=1000)).trained)

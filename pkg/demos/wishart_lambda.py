"""
Mean largest eigenvalue of a complex Wishart matrix
===================================================

Exact quadrature against Monte Carlo, and a persisted cache.
"""

import os
import tempfile

import numpy as np

from wetrain.wishart import LambdaTable, lambda_mc, lambda_mn_exact

for m, n1 in [(2, 2), (5, 5), (5, 10), (10, 10)]:
    mean, hw = lambda_mc(m, n1, 100_000, np.random.default_rng(0))
    print(f"Lambda({m:2d},{n1:2d}) = {lambda_mn_exact(m, n1):9.5f}   MC {mean:9.5f} +/- {hw:.5f}")

path = os.path.join(tempfile.mkdtemp(), "lambda.csv")
LambdaTable(path=path).fill(range(1, 6), range(1, 11)).save()
print("cached", sum(1 for line in open(path) if line[0].isdigit()), "entries in", path)

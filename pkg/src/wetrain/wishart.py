"""Mean largest eigenvalue of complex Wishart matrices.

``Lambda(M, N1) = E[lambda_max(Hn^H Hn)]`` for an ``N1 x M`` matrix ``Hn`` with
i.i.d. CN(0, 1) entries. Two independent routes are provided: a Monte Carlo
estimator and a quadrature of the exact CDF of the largest eigenvalue
(Khatri's determinant form). The table defaults to the quadrature route;
the sampler is kept as the cross-check.
"""

import csv
import math
import os
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np

from .numerics import ContractError, sample_cscg

CACHE_VERSION = 1
MIN_TRIALS = 1000
_CHUNK = 50_000


@dataclass(frozen=True)
class LambdaEntry:
    value: float
    trials: int        # 0 for analytic / quadrature entries
    halfwidth: float   # 95% normal halfwidth; 0 for analytic / quadrature entries


def _check_dims(m, n1):
    if m < 1 or n1 < 1:
        raise ContractError(f"dimensions must be >= 1, got ({m}, {n1})")


def lambda_mc(m, n1, trials, rng):
    """Monte Carlo ``(mean, 95% halfwidth)`` of the largest Gram eigenvalue."""
    _check_dims(m, n1)
    if trials < MIN_TRIALS:
        warnings.warn(f"Lambda({m},{n1}) estimated from only {trials} trials", RuntimeWarning,
                      stacklevel=2)
    a, b = min(m, n1), max(m, n1)
    total = total_sq = 0.0
    done = 0
    while done < trials:
        k = min(_CHUNK, trials - done)
        h = sample_cscg(a, b, 1.0, rng, size=k)
        top = np.linalg.eigvalsh(h @ np.conj(np.swapaxes(h, -1, -2)))[:, -1]
        total += top.sum()
        total_sq += np.square(top).sum()
        done += k
    mean = total / trials
    if trials < 2:
        return mean, 0.0
    var = max(total_sq / trials - mean ** 2, 0.0) * trials / (trials - 1)
    return mean, 1.96 * math.sqrt(var / trials)


def lambda_mn(m, n1, trials, rng):
    """Monte Carlo estimate of ``Lambda(m, n1)``; exact when either dimension is 1."""
    _check_dims(m, n1)
    if m == 1:
        return float(n1)
    if n1 == 1:
        return float(m)
    return float(lambda_mc(m, n1, trials, rng)[0])


def lambda_mn_exact(m, n1):
    """``Lambda(m, n1)`` by integrating ``1 - F(x)`` with the exact CDF of lambda_max.

    With ``p = min, q = max`` dimensions,
    ``F(x) = det[gamma(q - p + i + j - 1, x)]_{i,j=1..p} / prod_i Gamma(q - i + 1) Gamma(p - i + 1)``.
    """
    _check_dims(m, n1)
    if m == 1:
        return float(n1)
    if n1 == 1:
        return float(m)
    p, q = min(m, n1), max(m, n1)
    with mpmath.workdps(20 + 2 * p):
        log_norm = sum(mpmath.loggamma(q - i + 1) + mpmath.loggamma(p - i + 1)
                       for i in range(1, p + 1))
        scale = mpmath.exp(-log_norm)

        def survival(x):
            g = [mpmath.gammainc(q - p + k + 1, 0, x) for k in range(2 * p - 1)]
            hankel = mpmath.matrix([[g[i + j] for j in range(p)] for i in range(p)])
            return 1 - mpmath.det(hankel) * scale

        # Marchenko-Pastur edge sets the scale; the tail past 3x edge is negligible.
        edge = (math.sqrt(p) + math.sqrt(q)) ** 2
        nodes = [0, edge / 4, edge / 2, edge, 1.5 * edge, 2 * edge, 3 * edge + 60]
        return float(mpmath.quad(survival, nodes, method="gauss-legendre"))


class LambdaTable:
    """Cache of ``Lambda(M, N1)`` values, filled lazily and persisted as CSV.

    Parameters
    ----------
    method : {"exact", "mc"}
        How missing entries are computed.
    trials, seed :
        Monte Carlo budget and master seed (``method="mc"`` only). Each entry
        uses its own stream keyed by ``(M, N1)`` so the table is reproducible
        regardless of fill order.
    path : str, optional
        CSV cache. Loaded on construction if it exists.
    """

    def __init__(self, method="exact", trials=200_000, seed=0, path=None):
        if method not in ("exact", "mc"):
            raise ContractError(f"unknown method {method!r}")
        self.method = method
        self.trials = trials
        self.seed = seed
        self.path = path
        self.entries = {}
        if path and os.path.exists(path):
            self.load(path)

    def entry(self, m, n1):
        key = (int(m), int(n1))
        if key not in self.entries:
            self.entries[key] = self._compute(*key)
        return self.entries[key]

    def __call__(self, m, n1):
        return self.entry(m, n1).value

    def _compute(self, m, n1):
        _check_dims(m, n1)
        if m == 1 or n1 == 1:
            return LambdaEntry(float(max(m, n1)), 0, 0.0)
        if self.method == "exact":
            return LambdaEntry(lambda_mn_exact(m, n1), 0, 0.0)
        rng = np.random.default_rng(np.random.SeedSequence(self.seed, spawn_key=(m, n1)))
        mean, hw = lambda_mc(m, n1, self.trials, rng)
        return LambdaEntry(float(mean), self.trials, float(hw))

    def fill(self, ms, n1s):
        for m in ms:
            for n1 in n1s:
                self.entry(m, n1)
        return self

    @property
    def trials_used(self):
        return max((e.trials for e in self.entries.values()), default=0)

    @property
    def confidence_halfwidth(self):
        return max((e.halfwidth for e in self.entries.values()), default=0.0)

    def save(self, path=None):
        path = path or self.path
        if path is None:
            raise ContractError("no cache path given")
        with open(path, "w", newline="") as fh:
            fh.write(f"# wetrain lambda-table version={CACHE_VERSION} method={self.method} "
                     f"seed={self.seed}\n")
            w = csv.writer(fh)
            w.writerow(["M", "N1", "lambda", "trials", "halfwidth"])
            for (m, n1), e in sorted(self.entries.items()):
                w.writerow([m, n1, repr(e.value), e.trials, repr(e.halfwidth)])
        return path

    def load(self, path):
        with open(path, newline="") as fh:
            rows = [line for line in fh if not line.startswith("#")]
        for row in csv.DictReader(rows):
            key = (int(row["M"]), int(row["N1"]))
            self.entries[key] = LambdaEntry(float(row["lambda"]), int(row["trials"]),
                                            float(row["halfwidth"]))
        return self


_default = None


def default_table():
    """Process-wide exact table, shared by solvers when none is passed."""
    global _default
    if _default is None:
        _default = LambdaTable(method="exact")
    return _default

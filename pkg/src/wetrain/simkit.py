"""Monte Carlo engine for the two-phase protocol (pilot phase, then energy beamforming).

Trials are split into fixed-size chunks. Chunk ``i`` draws channels from
``SeedSequence(master_seed, spawn_key=(i, 0))`` and receiver noise from
``spawn_key=(i, 1)``, so results depend only on the plan and never on the
number of workers, and different designs evaluated with the same seed see
the same channels.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import draw_channel
from .energy import (EnergyReport, beamformer_from_estimate, benchmark_ideal,
                     benchmark_isotropic, benchmark_los, block_harvest)
from .numerics import ContractError, sample_cscg
from .optimizer import TrainingDesign
from .training import PilotConfig, mmse_estimate, simulate_training

BENCHMARKS = ("ideal", "isotropic", "los")
CHUNK = 2000
Z95 = 1.96


@dataclass(frozen=True)
class TrialPlan:
    params: object
    spec: object
    design: object   # TrainingDesign or one of BENCHMARKS
    trials: int
    master_seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ContractError("trials must be >= 1")
        _check_consistent(self.spec, self.params)
        if isinstance(self.design, str) and self.design not in BENCHMARKS:
            raise ContractError(f"unknown benchmark {self.design!r}")


@dataclass(frozen=True)
class TrialStats:
    """Sample means over ``trials`` blocks. ``halfwidth95`` is 0 when ``trials == 1``."""

    mean_net: float
    mean_harvested: float
    mean_cost: float
    halfwidth95: float
    trials: int


def _check_consistent(spec, p):
    if (spec.M, spec.N) != (p.M, p.N) or spec.K != p.K or spec.beta != p.beta:
        raise ContractError("channel spec and system params disagree on M, N, K or beta")


def chunk_streams(master_seed, index):
    seqs = [np.random.SeedSequence(int(master_seed), spawn_key=(int(index), k)) for k in (0, 1)]
    return tuple(np.random.default_rng(s) for s in seqs)


def simulate_blocks(spec, p, design, channel_rng, noise_rng=None, count=None):
    """Harvested energy and pilot cost for ``count`` independent blocks (arrays).

    With ``count=None`` a single block is simulated and scalars are returned.
    """
    noise_rng = channel_rng if noise_rng is None else noise_rng
    ch = draw_channel(spec, channel_rng, size=count)
    if isinstance(design, str):
        if design == "ideal":
            q = benchmark_ideal(ch.h, p)
        elif design == "isotropic":
            q = benchmark_isotropic(ch.h, p)
        elif design == "los":
            q = benchmark_los(ch.h, spec.hbar, p)
        else:
            raise ContractError(f"unknown benchmark {design!r}")
        return q, np.zeros_like(q)
    if design.n1 == 0:
        v = beamformer_from_estimate(spec.mean)
        q = block_harvest(ch.h, v, p, 0)
        return q, np.zeros_like(q)
    cfg = PilotConfig(design.tau, design.pr, design.trained_set)
    y = simulate_training(ch, spec, cfg, p.sigma_r2, noise_rng)
    est = mmse_estimate(y, spec, cfg, p.sigma_r2)
    v = beamformer_from_estimate(est.h_hat)
    q = block_harvest(ch.h, v, p, design.tau)
    return q, np.full_like(q, est.energy_spent)


def run_block(spec, p, design, rng, noise_rng=None):
    """One coherent block of the protocol."""
    _check_consistent(spec, p)
    q, cost = simulate_blocks(spec, p, design, rng, noise_rng)
    return EnergyReport(harvested=float(q), training_cost=float(cost))


def _chunk_sums(plan, index, size):
    crng, nrng = chunk_streams(plan.master_seed, index)
    q, cost = simulate_blocks(plan.spec, plan.params, plan.design, crng, nrng, count=size)
    net = q - cost
    return q.sum(), cost.sum(), net.sum(), np.square(net).sum()


def run_plan(plan, workers=1, chunk_size=CHUNK):
    """Average the protocol over ``plan.trials`` blocks."""
    sizes = [min(chunk_size, plan.trials - s) for s in range(0, plan.trials, chunk_size)]
    jobs = list(enumerate(sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda j: _chunk_sums(plan, *j), jobs))
    else:
        parts = [_chunk_sums(plan, *j) for j in jobs]
    sq = sc = sn = sn2 = 0.0
    for a, b, c, d in parts:  # fixed reduction order
        sq += a
        sc += b
        sn += c
        sn2 += d
    n = plan.trials
    mean_net = sn / n
    if n > 1:
        var = max(sn2 / n - mean_net ** 2, 0.0) * n / (n - 1)
        hw = Z95 * math.sqrt(var / n)
    else:
        hw = 0.0
    return TrialStats(mean_net=mean_net, mean_harvested=sq / n, mean_cost=sc / n,
                      halfwidth95=hw, trials=n)


def conditional_harvest_mc(h_hat, sigma2_tilde, trained_set, spec, p, tau, draws, rng):
    """Average harvest over the estimation error with the estimate held fixed.

    The error is ``sqrt(beta/(K+1))`` times a matrix whose trained rows are
    CN(0, sigma2_tilde) and whose other rows are CN(0, 1). Errors are drawn
    in antithetic pairs ``(E, -E)``, which cancels the term linear in ``E``;
    ``draws`` evaluations use ``ceil(draws / 2)`` independent errors. Returns
    ``(mean, 95% halfwidth)`` computed over the pair averages.
    """
    if draws < 2:
        raise ContractError("need at least 2 draws")
    v = beamformer_from_estimate(h_hat)
    rows = np.ones(spec.N)
    rows[list(trained_set)] = sigma2_tilde
    pairs = (draws + 1) // 2
    err = sample_cscg(spec.N, spec.M, 1.0, rng, size=pairs) * np.sqrt(rows)[:, None]
    q = 0.5 * (block_harvest(h_hat + spec.nlos_scale * err, v, p, tau)
               + block_harvest(h_hat - spec.nlos_scale * err, v, p, tau))
    hw = Z95 * q.std(ddof=1) / math.sqrt(pairs) if pairs > 1 else 0.0
    return float(q.mean()), float(hw)


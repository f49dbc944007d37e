"""Reverse-link pilot transmission and MMSE estimation of the trained rows."""

from dataclasses import dataclass

import numpy as np

from .channel import partition
from .numerics import ContractError, sample_cscg


@dataclass(frozen=True)
class PilotConfig:
    """Pilot phase of ``tau`` symbols at total power ``power`` from antennas ``trained_set``."""

    tau: int
    power: float
    trained_set: tuple

    def __post_init__(self):
        object.__setattr__(self, "trained_set", tuple(sorted(int(i) for i in self.trained_set)))
        if self.power < 0:
            raise ContractError("pilot power must be >= 0")
        if self.n1 >= 1 and self.tau < self.n1:
            raise ContractError(f"tau={self.tau} < N1={self.n1}")

    @property
    def n1(self):
        return len(self.trained_set)

    @property
    def energy(self):
        return self.power * self.tau


@dataclass(frozen=True)
class EstimationOutcome:
    h_hat: np.ndarray       # N x M, known part of H (Rician mean + estimated rows)
    hw1_hat: np.ndarray     # N1 x M, MMSE estimate of the trained scattered rows
    sigma2_hat: float
    sigma2_tilde: float
    energy_spent: float


def pilot_matrix(tau, n1):
    """First ``n1`` columns of the unnormalized ``tau``-point DFT, so ``Phi^H Phi = tau I``."""
    if n1 < 1 or tau < n1:
        raise ContractError(f"need tau >= n1 >= 1, got tau={tau}, n1={n1}")
    t = np.arange(tau)[:, None]
    k = np.arange(n1)[None, :]
    return np.exp(-2j * np.pi * t * k / tau)


def estimation_variances(beta, K, pr, tau, n1, sigma_r2):
    """Per-entry variances of the estimate and of the error (sum to one)."""
    signal = beta * pr * tau
    noise = sigma_r2 * n1 * (K + 1.0)
    if signal + noise <= 0:
        raise ContractError("estimation undefined with zero pilot energy and zero noise")
    tilde = noise / (signal + noise)
    return 1.0 - tilde, tilde


def simulate_training(real_channel, spec, cfg, sigma_r2, rng):
    """Received pilots ``Y = sqrt(P_r/N1) Phi H_N1 + Z`` (tau x M, batched over the channel)."""
    if cfg.n1 == 0:
        raise ContractError("no trained antennas: skip the pilot phase instead")
    if sigma_r2 < 0:
        raise ContractError("sigma_r2 must be >= 0")
    h1, _, _ = partition(real_channel.h, cfg.trained_set)
    phi = pilot_matrix(cfg.tau, cfg.n1)
    batch = h1.shape[:-2] or None
    noise = sample_cscg(cfg.tau, spec.M, sigma_r2, rng, size=batch)
    return np.sqrt(cfg.power / cfg.n1) * (phi @ h1) + noise


def mmse_estimate(y_tr, spec, cfg, sigma_r2):
    """MMSE estimate of the channel from received pilots.

    The scattered part of the trained rows is estimated linearly after removing
    the known Rician contribution; untrained rows keep only the Rician mean.
    """
    y_tr = np.asarray(y_tr, dtype=complex)
    if y_tr.shape[-2:] != (cfg.tau, spec.M):
        raise ContractError(f"y_tr shape {y_tr.shape[-2:]} != ({cfg.tau}, {spec.M})")
    n1, K, beta, pr = cfg.n1, spec.K, spec.beta, cfg.power
    s_hat, s_tilde = estimation_variances(beta, K, pr, cfg.tau, n1, sigma_r2)
    phi = pilot_matrix(cfg.tau, n1)
    hbar1, _, perm = partition(spec.hbar, cfg.trained_set)
    known = np.sqrt(pr * beta * K / (n1 * (K + 1.0))) * (phi @ hbar1)
    gain = np.sqrt(pr * beta * n1 * (K + 1.0)) / (pr * cfg.tau * beta + sigma_r2 * n1 * (K + 1.0))
    hw1_hat = gain * (np.conj(phi.T) @ (y_tr - known))
    pad = np.zeros(hw1_hat.shape[:-2] + (spec.N - n1, spec.M), dtype=complex)
    hw_hat = perm @ np.concatenate([hw1_hat, pad], axis=-2)
    h_hat = spec.mean + spec.nlos_scale * hw_hat
    return EstimationOutcome(h_hat=h_hat, hw1_hat=hw1_hat, sigma2_hat=s_hat,
                             sigma2_tilde=s_tilde, energy_spent=pr * cfg.tau)

"""Forward-link energy beamforming and harvested-energy bookkeeping."""

from dataclasses import dataclass, replace

import numpy as np

from .numerics import ContractError, as_cmatrix, gram_max_eig


def dbm_to_watts(dbm):
    return 10.0 ** ((np.asarray(dbm, dtype=float) - 30.0) / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """Scalar system constants. Powers in Watts, energies in Joules (unit symbol time)."""

    M: int
    N: int
    T: int
    K: float = 0.0
    beta: float = 1e-6
    Pf: float = 1.0
    eta: float = 0.5
    sigma_r2: float = 1e-12

    def __post_init__(self):
        for name in ("K", "beta", "Pf", "eta", "sigma_r2"):
            if not np.isfinite(getattr(self, name)):
                raise ContractError(f"{name} must be finite")
        if self.M < 1 or self.N < 1:
            raise ContractError("M and N must be >= 1")
        if self.T < 1:
            raise ContractError("T must be >= 1")
        if not 0 < self.eta <= 1:
            raise ContractError("eta must lie in (0, 1]")
        if self.K < 0 or self.beta <= 0 or self.Pf < 0 or self.sigma_r2 < 0:
            raise ContractError("K, Pf, sigma_r2 must be >= 0 and beta > 0")

    def with_(self, **changes):
        return replace(self, **changes)

    @property
    def gamma(self):
        return esnr(self)


def default_params(**overrides):
    """Numerical setup used throughout the examples: P_f = 1 W, beta = -60 dB,
    sigma_r^2 = -90 dBm, eta = 0.5."""
    base = dict(M=5, N=10, T=50, K=0.0, beta=1e-6, Pf=1.0, eta=0.5,
                sigma_r2=float(dbm_to_watts(-90.0)))
    base.update(overrides)
    return SystemParams(**base)


@dataclass(frozen=True)
class EnergyReport:
    harvested: float
    training_cost: float

    @property
    def net(self):
        return self.harvested - self.training_cost


def esnr(p):
    """Two-way effective SNR ``eta P_f beta^2 / sigma_r^2``."""
    if p.sigma_r2 <= 0:
        raise ContractError("ESNR undefined for zero noise power")
    return p.eta * p.Pf * p.beta ** 2 / p.sigma_r2


def beamformer_from_estimate(h_hat):
    """Dominant right singular direction of ``h_hat``; ``e_1`` when ``h_hat`` is zero."""
    h_hat = as_cmatrix(h_hat, "h_hat")
    pair = gram_max_eig(h_hat)
    v = pair.vector
    zero = np.linalg.norm(v, axis=-1) == 0
    if np.any(zero):
        e1 = np.zeros(h_hat.shape[-1], dtype=complex)
        e1[0] = 1.0
        v = np.where(zero[..., None], e1, v)
    return v


def _received_power(h, v):
    hv = np.einsum("...nm,...m->...n", h, v)
    return np.sum(np.abs(hv) ** 2, axis=-1)


def block_harvest(real_h, v, p, tau):
    """Energy ``eta (T - tau) P_f ||H v||^2`` harvested in one block."""
    if tau < 0 or tau > p.T:
        raise ContractError(f"tau={tau} outside [0, T={p.T}]")
    return p.eta * (p.T - tau) * p.Pf * _received_power(real_h, v)


def conditional_expected_harvest(h_hat, sigma2_tilde, n1, n2, p, tau):
    """Expected harvest given the estimate, with the optimal beam on ``h_hat``."""
    if n1 + n2 != p.N:
        raise ContractError(f"n1 + n2 = {n1 + n2} != N = {p.N}")
    lam = gram_max_eig(h_hat).value
    residual = p.beta / (p.K + 1.0) * (n1 * sigma2_tilde + n2)
    return p.eta * (p.T - tau) * p.Pf * (lam + residual)


def benchmark_ideal(real_h, p):
    """Perfect-CSI beamforming over the whole block."""
    return p.eta * p.T * p.Pf * gram_max_eig(real_h).value


def benchmark_isotropic(real_h, p):
    """No-CSI transmission with ``S = (P_f / M) 1 1^H``."""
    ones = np.ones(p.M) / np.sqrt(p.M)
    return p.eta * p.T * p.Pf * _received_power(real_h, ones)


def los_beamformer(hbar):
    return beamformer_from_estimate(hbar)


def benchmark_los(real_h, hbar, p):
    """Beamforming along the dominant eigenvector of ``Hbar^H Hbar``."""
    return p.eta * p.T * p.Pf * _received_power(real_h, los_beamformer(hbar))

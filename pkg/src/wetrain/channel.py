"""Rician MIMO channel model: array responses, deterministic part, random draws."""

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .numerics import ContractError, as_cmatrix, sample_cscg

NORM_RTOL = 1e-6


def db_to_linear(db):
    return 10.0 ** (np.asarray(db, dtype=float) / 10.0)


def linear_to_db(x):
    return 10.0 * np.log10(x)


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array with ``element_count`` elements spaced ``spacing_wavelengths`` apart."""

    element_count: int
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if self.element_count < 1:
            raise ContractError("element_count must be >= 1")
        if not self.spacing_wavelengths > 0:
            raise ContractError("spacing_wavelengths must be > 0")


class Path(NamedTuple):
    gain: complex
    aoa: float  # radians
    aod: float  # radians


def array_response(geom, theta):
    """ULA steering vector ``[exp(j 2 pi m d sin(theta))]_m`` with element 0 equal to 1."""
    m = np.arange(geom.element_count)
    return np.exp(2j * np.pi * m * geom.spacing_wavelengths * np.sin(theta))


def build_hbar(paths, rx_geom, tx_geom, normalize=True):
    """Deterministic component ``sum_l g_l a_r(aoa_l) a_t(aod_l)^H`` (N x M).

    With ``normalize`` the result is rescaled so that ``tr(Hbar Hbar^H) = M N``.
    """
    paths = [Path(*p) for p in paths]
    if not paths:
        raise ContractError("at least one path is required")
    hbar = np.zeros((rx_geom.element_count, tx_geom.element_count), dtype=complex)
    for p in paths:
        hbar += p.gain * np.outer(array_response(rx_geom, p.aoa),
                                  np.conj(array_response(tx_geom, p.aod)))
    if normalize:
        power = np.sum(np.abs(hbar) ** 2)
        if power == 0:
            raise ContractError("deterministic component has zero energy; cannot normalize")
        hbar *= np.sqrt(hbar.size / power)
    return hbar


@dataclass(frozen=True)
class RicianSpec:
    """Statistics of ``H = sqrt(beta K/(K+1)) Hbar + sqrt(beta/(K+1)) Hw``.

    ``K`` is linear; ``hbar`` must satisfy ``tr(Hbar Hbar^H) = M N``.
    """

    M: int
    N: int
    K: float
    beta: float
    hbar: np.ndarray
    paths: Sequence[Path] = field(default=())

    def __post_init__(self):
        hbar = as_cmatrix(self.hbar, "hbar")
        object.__setattr__(self, "hbar", hbar)
        if hbar.shape != (self.N, self.M):
            raise ContractError(f"hbar shape {hbar.shape} != (N, M) = ({self.N}, {self.M})")
        if self.K < 0 or not np.isfinite(self.K):
            raise ContractError("K must be finite and >= 0")
        if not self.beta > 0:
            raise ContractError("beta must be > 0")
        tr = np.sum(np.abs(hbar) ** 2)
        if abs(tr - self.M * self.N) > NORM_RTOL * self.M * self.N:
            raise ContractError(f"tr(Hbar Hbar^H) = {tr:.6g}, expected M*N = {self.M * self.N}")

    @classmethod
    def from_paths(cls, M, N, K, beta, paths, spacing=0.5):
        paths = [Path(*p) for p in paths]
        hbar = build_hbar(paths, ArrayGeometry(N, spacing), ArrayGeometry(M, spacing))
        return cls(M=M, N=N, K=K, beta=beta, hbar=hbar, paths=tuple(paths))

    @classmethod
    def rank_one(cls, M, N, K, beta, aoa=0.0, aod=np.deg2rad(10.0), spacing=0.5):
        """Single LOS path with unit gain, as in ``Hbar = a_r a_t^H``."""
        return cls.from_paths(M, N, K, beta, [Path(1.0, aoa, aod)], spacing)

    @classmethod
    def rayleigh(cls, M, N, beta):
        # Hbar is irrelevant at K = 0; an all-ones LOS keeps the invariant.
        return cls.rank_one(M, N, 0.0, beta, aoa=0.0, aod=0.0)

    @property
    def los_scale(self):
        return np.sqrt(self.beta * self.K / (self.K + 1.0))

    @property
    def nlos_scale(self):
        return np.sqrt(self.beta / (self.K + 1.0))

    @property
    def mean(self):
        """Deterministic part ``sqrt(beta K/(K+1)) Hbar``."""
        return self.los_scale * self.hbar

    def assemble(self, hw):
        return self.mean + self.nlos_scale * hw


@dataclass(frozen=True)
class ChannelRealization:
    h: np.ndarray
    hw: np.ndarray


def draw_channel(spec, rng, size=None):
    """Draw one realization (or a batch of ``size``) of the Rician channel."""
    hw = sample_cscg(spec.N, spec.M, 1.0, rng, size=size)
    return ChannelRealization(h=spec.assemble(hw), hw=hw)


def partition(h, trained_set):
    """Split rows of ``h`` into the trained block and the rest.

    Returns ``(h1, h2, perm)`` with ``h == perm @ concatenate([h1, h2])``.
    Works on stacks; rows are axis -2.
    """
    h = np.asarray(h)
    n = h.shape[-2]
    idx = sorted(int(i) for i in trained_set)
    if len(set(idx)) != len(idx):
        raise ContractError("trained_set has duplicate indices")
    if any(i < 0 or i >= n for i in idx):
        raise ContractError(f"trained_set indices must lie in [0, {n})")
    rest = [i for i in range(n) if i not in set(idx)]
    order = idx + rest
    perm = np.eye(n)[:, order]
    return h[..., idx, :], h[..., rest, :], perm

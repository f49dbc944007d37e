"""Complex linear algebra and random sampling shared by the rest of the package.

All routines accept stacked inputs: any leading axes are treated as a batch,
the last two axes as the matrix.
"""

from dataclasses import dataclass

import numpy as np

HERMITIAN_RTOL = 1e-10
RESIDUAL_RTOL = 1e-8


class ContractError(ValueError):
    """An input violates a documented precondition."""


class NumericError(ArithmeticError):
    """A numerical routine failed to reach its accuracy target."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class EigPair:
    """Dominant eigenpair. ``value`` has the batch shape, ``vector`` one extra axis."""

    value: np.ndarray
    vector: np.ndarray


def as_cmatrix(a, name="matrix"):
    """Return ``a`` as a complex array with at least two axes and finite entries."""
    a = np.asarray(a, dtype=complex)
    if a.ndim < 2:
        raise ContractError(f"{name} must have at least 2 dimensions, got {a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ContractError(f"{name} has non-finite entries")
    return a


def fro_norm(a):
    return np.sqrt(np.sum(np.abs(a) ** 2, axis=(-2, -1)))


def fix_phase(v, tol=1e-12):
    """Rotate each vector so its first non-negligible component is real and >= 0."""
    v = np.asarray(v, dtype=complex)
    mag = np.abs(v)
    scale = np.max(mag, axis=-1, keepdims=True)
    nonzero = mag > tol * np.where(scale > 0, scale, 1.0)
    first = np.argmax(nonzero, axis=-1)
    pivot = np.take_along_axis(v, first[..., None], axis=-1)
    pmag = np.abs(pivot)
    rot = np.where(pmag > 0, np.conj(pivot) / np.where(pmag > 0, pmag, 1.0), 1.0)
    return v * rot


def hermitian_max_eig(a, check=True):
    """Largest eigenvalue and unit eigenvector of a Hermitian matrix (or stack).

    The input is symmetrized as ``(A + A^H) / 2`` before decomposition. The
    returned eigenvector follows the phase convention of :func:`fix_phase`.

    Raises
    ------
    ContractError
        If the input is not square or not Hermitian to within 1e-10 relative.
    NumericError
        If the eigen-residual exceeds 1e-8 times the Frobenius norm.
    """
    a = as_cmatrix(a)
    if a.shape[-1] != a.shape[-2]:
        raise ContractError(f"expected square matrix, got shape {a.shape[-2:]}")
    ah = np.conj(np.swapaxes(a, -1, -2))
    norm = fro_norm(a)
    if check:
        asym = fro_norm(a - ah)
        if np.any(asym > HERMITIAN_RTOL * np.maximum(norm, 1.0)):
            raise ContractError("matrix is not Hermitian within tolerance")
    sym = 0.5 * (a + ah)
    w, vecs = np.linalg.eigh(sym)
    value = w[..., -1]
    vector = fix_phase(vecs[..., :, -1])
    if check:
        resid = np.linalg.norm(
            np.einsum("...ij,...j->...i", sym, vector) - value[..., None] * vector, axis=-1
        )
        if np.any(resid > RESIDUAL_RTOL * np.maximum(norm, np.finfo(float).tiny)):
            raise NumericError("eigen-residual above tolerance", residual=float(np.max(resid)))
    return EigPair(value=value, vector=vector)


def gram_max_eig(h):
    """Dominant eigenpair of ``H^H H`` computed through the smaller Gram matrix.

    For an ``n x m`` matrix with ``n < m`` the ``n x n`` matrix ``H H^H`` is
    decomposed and the right vector recovered as ``H^H u / ||H^H u||``. Zero
    matrices yield a zero vector; callers decide what to do with them.
    """
    h = as_cmatrix(h)
    n, m = h.shape[-2:]
    hh = np.conj(np.swapaxes(h, -1, -2))
    if n >= m:
        return hermitian_max_eig(hh @ h, check=False)
    left = hermitian_max_eig(h @ hh, check=False)
    v = np.einsum("...ij,...j->...i", hh, left.vector)
    nv = np.linalg.norm(v, axis=-1, keepdims=True)
    v = np.where(nv > 0, v / np.where(nv > 0, nv, 1.0), 0.0)
    return EigPair(value=np.maximum(left.value, 0.0), vector=fix_phase(v))


def sample_cscg(rows, cols, variance=1.0, rng=None, size=None):
    """I.i.d. circularly symmetric complex Gaussian entries CN(0, variance).

    ``size`` adds leading batch axes (int or tuple). Real and imaginary parts
    are each N(0, variance / 2).
    """
    if variance < 0:
        raise ContractError(f"variance must be >= 0, got {variance}")
    rng = np.random.default_rng() if rng is None else rng
    if size is None:
        shape = (rows, cols)
    else:
        shape = tuple(np.atleast_1d(size)) + (rows, cols)
    z = rng.standard_normal(shape + (2,))
    return np.sqrt(variance / 2.0) * (z[..., 0] + 1j * z[..., 1])


def stream(master_seed, index):
    """Independent generator number ``index`` derived from ``master_seed``.

    Equivalent to the ``index``-th child of ``SeedSequence(master_seed).spawn``.
    """
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(index),))
    return np.random.default_rng(seq)

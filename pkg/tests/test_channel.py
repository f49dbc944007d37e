import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wetrain.channel import (ArrayGeometry, Path, RicianSpec, array_response, build_hbar,
                             db_to_linear, draw_channel, linear_to_db, partition)
from wetrain.numerics import ContractError


def test_db_roundtrip():
    assert db_to_linear(3.0) == pytest.approx(1.99526, rel=1e-5)
    assert db_to_linear(10.0) == pytest.approx(10.0)
    assert linear_to_db(db_to_linear(-7.5)) == pytest.approx(-7.5)


def test_array_response_explicit():
    a = array_response(ArrayGeometry(3, 0.5), math.pi / 6)
    # d sin(theta) = 1/4 wavelength per element
    np.testing.assert_allclose(a, [1, 1j, -1], atol=1e-12)


def test_broadside_is_all_ones():
    np.testing.assert_allclose(array_response(ArrayGeometry(4), 0.0), np.ones(4))


@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_hbar_normalized(m, n, paths, seed):
    r = np.random.default_rng(seed)
    ps = [Path(r.standard_normal() + 1j * r.standard_normal(), *r.uniform(-1.5, 1.5, 2))
          for _ in range(paths)]
    hbar = build_hbar(ps, ArrayGeometry(n), ArrayGeometry(m))
    assert hbar.shape == (n, m)
    assert np.sum(np.abs(hbar) ** 2) == pytest.approx(m * n, rel=1e-9)


def test_rank_one_is_outer_product():
    spec = RicianSpec.rank_one(6, 3, 1.0, 1e-6, aoa=0.2, aod=-0.4)
    ar = array_response(ArrayGeometry(3), 0.2)
    at = array_response(ArrayGeometry(6), -0.4)
    np.testing.assert_allclose(spec.hbar, np.outer(ar, at.conj()), atol=1e-12)
    s = np.linalg.svd(spec.hbar, compute_uv=False)
    assert s[0] ** 2 == pytest.approx(18.0)
    assert s[1] < 1e-10


def test_spec_validation():
    with pytest.raises(ContractError):
        RicianSpec(2, 2, 1.0, 1e-6, np.ones((2, 2)) * 2.0)   # trace 16 != 4
    with pytest.raises(ContractError):
        RicianSpec(2, 2, -1.0, 1e-6, np.ones((2, 2)))
    with pytest.raises(ContractError):
        RicianSpec(2, 2, 1.0, 0.0, np.ones((2, 2)))
    with pytest.raises(ContractError):
        RicianSpec(3, 2, 1.0, 1e-6, np.ones((2, 2)))


def test_channel_moments(rng):
    spec = RicianSpec.rank_one(4, 2, 3.0, 2.0)
    h = draw_channel(spec, rng, size=40000).h
    np.testing.assert_allclose(h.mean(axis=0), np.sqrt(2.0 * 3 / 4) * spec.hbar, atol=0.03)
    dev = h - np.sqrt(1.5) * spec.hbar
    assert np.mean(np.abs(dev) ** 2) == pytest.approx(2.0 / 4, rel=0.02)
    # total average gain per entry is beta
    assert np.mean(np.abs(h) ** 2) == pytest.approx(2.0, rel=0.01)


def test_rayleigh_mean_is_zero(rng):
    spec = RicianSpec.rayleigh(3, 2, 1.0)
    assert np.all(spec.mean == 0)
    assert np.mean(np.abs(draw_channel(spec, rng, size=20000).h) ** 2) == pytest.approx(1, rel=0.02)


def test_draw_reproducible():
    spec = RicianSpec.rank_one(3, 2, 1.0, 1.0)
    a = draw_channel(spec, np.random.default_rng(1)).h
    b = draw_channel(spec, np.random.default_rng(1)).h
    np.testing.assert_array_equal(a, b)


@given(st.integers(1, 7), st.data())
def test_partition_reassembles(n, data):
    subset = data.draw(st.sets(st.integers(0, n - 1)))
    h = np.arange(n * 3, dtype=complex).reshape(n, 3) + 1j
    h1, h2, perm = partition(h, subset)
    assert h1.shape[0] == len(subset) and h2.shape[0] == n - len(subset)
    np.testing.assert_array_equal(perm @ np.concatenate([h1, h2]), h)
    np.testing.assert_array_equal(perm.T @ perm, np.eye(n))


def test_partition_batched_and_errors():
    h = np.random.default_rng(0).standard_normal((5, 4, 2))
    h1, h2, perm = partition(h, [3, 1])
    np.testing.assert_array_equal(h1, h[:, [1, 3]])
    np.testing.assert_allclose(perm @ np.concatenate([h1, h2], axis=-2), h)
    with pytest.raises(ContractError):
        partition(h, [4])
    with pytest.raises(ContractError):
        partition(h, [1, 1])

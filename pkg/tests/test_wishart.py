import warnings

import numpy as np
import pytest

from wetrain.numerics import ContractError
from wetrain.wishart import LambdaTable, lambda_mc, lambda_mn, lambda_mn_exact

# Closed forms for p = 2 from the finite sum of the largest-eigenvalue density.
EXACT_2 = {2: 3.5, 3: 4.875, 4: 6.1875, 5: 7.4609375, 6: 8.70703125}


@pytest.mark.parametrize("q,value", sorted(EXACT_2.items()))
def test_two_row_closed_forms(q, value):
    assert lambda_mn_exact(2, q) == pytest.approx(value, rel=1e-10)


def test_dimension_one_is_exact():
    for m in range(1, 6):
        assert lambda_mn_exact(m, 1) == m
        assert lambda_mn(m, 1, 10, None) == m
        assert lambda_mn(1, m, 10, None) == m


def test_symmetric_in_arguments():
    assert lambda_mn_exact(3, 5) == pytest.approx(lambda_mn_exact(5, 3), rel=1e-12)


def test_bounds_and_monotone():
    # max(M, N1) <= Lambda <= M N1 (trace bound); increasing in each argument.
    vals = [[lambda_mn_exact(m, n) for n in range(1, 6)] for m in range(1, 6)]
    for m in range(1, 6):
        for n in range(1, 6):
            assert max(m, n) <= vals[m - 1][n - 1] <= m * n + 1e-9
            if n < 5:
                assert vals[m - 1][n] > vals[m - 1][n - 1]


@pytest.mark.parametrize("m,n1", [(2, 2), (5, 5), (4, 7)])
def test_exact_agrees_with_monte_carlo(m, n1):
    mean, hw = lambda_mc(m, n1, 200_000, np.random.default_rng(m * 100 + n1))
    assert abs(mean - lambda_mn_exact(m, n1)) < 1.5 * hw


def test_low_trial_warning():
    with pytest.warns(RuntimeWarning):
        lambda_mc(2, 2, 10, np.random.default_rng(0))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        lambda_mc(2, 2, 1000, np.random.default_rng(0))


def test_bad_dims():
    with pytest.raises(ContractError):
        lambda_mn_exact(0, 2)
    with pytest.raises(ContractError):
        LambdaTable(method="guess")


def test_table_cache_roundtrip(tmp_path):
    path = tmp_path / "lam.csv"
    t = LambdaTable(method="mc", trials=2000, seed=3, path=str(path))
    t.fill([1, 2, 3], [1, 2])
    t.save()
    assert t.trials_used == 2000 and t.confidence_halfwidth > 0
    back = LambdaTable(path=str(path))
    assert back.entries == t.entries
    first = path.read_text()
    # same seed, different fill order: same file
    u = LambdaTable(method="mc", trials=2000, seed=3)
    u.fill([3, 2, 1], [2, 1])
    u.save(str(tmp_path / "again.csv"))
    assert (tmp_path / "again.csv").read_text() == first


def test_table_exact_default():
    t = LambdaTable()
    assert t(2, 2) == pytest.approx(3.5)
    assert t.entry(2, 2).trials == 0
    with pytest.raises(ContractError):
        t.save()

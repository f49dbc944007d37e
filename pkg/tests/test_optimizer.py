import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st
from scipy.optimize import minimize_scalar

from wetrain.channel import RicianSpec
from wetrain.energy import default_params, esnr
from wetrain.numerics import ContractError
from wetrain.optimizer import (Regime, TrainingDesign, antenna_ordering, brute_force_p1,
                               closed_form_n1_rank1, large_m_bound, miso_net, miso_trains,
                               miso_training_threshold, predicted_net, rank1_objective,
                               rayleigh_net, rayleigh_trains_miso, solve_large_m,
                               solve_miso_rician, solve_rayleigh)
from wetrain.wishart import lambda_mn_exact


def best_over_power(f, scale):
    """Numerical max of ``f(pr)`` over ``pr >= 0`` (oracle for the closed forms)."""
    res = minimize_scalar(lambda x: -f(x * scale), bounds=(0, 50), method="bounded",
                          options={"xatol": 1e-10})
    return max(-res.fun, f(0.0)), res.x * scale


def test_design_contracts():
    with pytest.raises(ContractError):
        TrainingDesign(0, (), 1, 0.0)
    with pytest.raises(ContractError):
        TrainingDesign(2, (0, 1), 1, 1.0)
    with pytest.raises(ContractError):
        TrainingDesign(1, (0, 1), 2, 1.0)
    d = TrainingDesign.first(3, 0.5)
    assert d.trained_set == (0, 1, 2) and d.tau == 3 and d.energy == 1.5


@given(st.integers(1, 6), st.integers(1, 8), st.integers(10, 300), st.data())
def test_rayleigh_power_is_optimal(m, n, t, data):
    n1 = data.draw(st.integers(1, min(n, t - 1)))
    p = default_params(M=m, N=n, T=t)
    lam = lambda_mn_exact(m, n1)
    report = solve_rayleigh(p)
    value = report.values[n1]
    ref, _ = best_over_power(lambda pr: rayleigh_net(p, n1, n1, pr, lam), 1e-5)
    assert value == pytest.approx(ref, rel=1e-7, abs=1e-15)


@given(st.integers(1, 8), st.integers(2, 400), st.floats(0, 30))
def test_miso_power_is_optimal(m, t, k):
    p = default_params(M=m, N=1, T=t, K=k)
    report = solve_miso_rician(p)
    ref, _ = best_over_power(lambda pr: miso_net(p, 1, 1, pr), 1e-5)
    assert report.values[1] == pytest.approx(ref, rel=1e-7)
    assert report.values[0] == pytest.approx(miso_net(p, 0, 0, 0.0))


def test_large_m_power_is_optimal():
    p = default_params(M=20, N=4, T=300, K=1.0)
    spec = RicianSpec.rank_one(20, 4, 1.0, p.beta)
    report = solve_large_m(p, spec.hbar)
    lam_bar, order, cum = antenna_ordering(spec.hbar)
    for n1 in range(1, 5):
        ref, _ = best_over_power(lambda pr: large_m_bound(p, lam_bar, cum[n1 - 1], n1, n1, pr), 1e-4)
        assert report.values[n1] == pytest.approx(ref, rel=1e-7)
    assert report.values[0] == pytest.approx(large_m_bound(p, lam_bar, 0.0, 0, 0, 0.0))


def test_predicted_net_consistent_with_solvers(params):
    r = solve_rayleigh(params)
    assert predicted_net(params, r.design) == pytest.approx(r.predicted_net)
    p = default_params(M=5, N=1, T=200, K=2.0)
    r = solve_miso_rician(p)
    assert predicted_net(p, r.design) == pytest.approx(r.predicted_net)
    p = default_params(M=30, N=3, T=100, K=1.0)
    spec = RicianSpec.rank_one(30, 3, 1.0, p.beta)
    r = solve_large_m(p, spec.hbar)
    assert predicted_net(p, r.design, hbar=spec.hbar) == pytest.approx(r.predicted_net)
    with pytest.raises(ContractError):
        predicted_net(p, r.design)


def test_solver_contracts(params):
    with pytest.raises(ContractError):
        solve_rayleigh(params.with_(K=1.0))
    with pytest.raises(ContractError):
        solve_miso_rician(params)
    with pytest.raises(ContractError):
        solve_large_m(params.with_(M=2, N=3), np.ones((3, 2)))


def test_single_transmit_antenna_never_trains():
    for t in (5, 50, 500):
        r = solve_rayleigh(default_params(M=1, T=t))
        assert not r.trained and r.regime is Regime.RAYLEIGH


def test_no_training_when_t_too_short():
    assert not solve_rayleigh(default_params(T=2)).trained


@given(st.integers(1, 2000), st.integers(1, 64), st.floats(1e-3, 1e3))
def test_miso_rule_reduces_to_rayleigh(t, m, g):
    assert miso_trains(t, m, 0.0, g) == rayleigh_trains_miso(t, m, g)


@given(st.integers(2, 40), st.floats(0, 20), st.floats(0.05, 50))
def test_threshold_is_smallest_training_t(m, k, g):
    t0 = miso_training_threshold(m, k, g)
    assert miso_trains(t0, m, k, g)
    assert t0 == 1 or not miso_trains(t0 - 1, m, k, g)


def test_threshold_grows_with_k():
    for m in range(2, 31):
        assert miso_training_threshold(m, 10.0, math.inf) > miso_training_threshold(m, 2.0, math.inf)
    assert miso_training_threshold(1, 1.0, 1.0) is None


def test_miso_solver_follows_rule():
    for t in (2, 10, 30, 100, 300):
        for k in (0.0, 2.0, 10.0):
            p = default_params(M=5, N=1, T=t, K=k)
            r = solve_miso_rician(p)
            assert r.trained == miso_trains(t, 5, k, esnr(p))
            assert r.predicted_net == max(r.values) or not r.trained


def test_antenna_ordering_non_increasing(rng):
    h = rng.standard_normal((5, 8)) + 1j * rng.standard_normal((5, 8))
    h *= np.sqrt(40 / np.sum(np.abs(h) ** 2))
    lam, order, cum = antenna_ordering(h)
    _, vecs = np.linalg.eigh(h @ h.conj().T)
    mags = np.abs(vecs[:, -1]) ** 2
    assert np.all(np.diff(mags[order]) <= 1e-12)
    assert cum[-1] == pytest.approx(1.0)
    assert lam == pytest.approx(np.linalg.eigvalsh(h @ h.conj().T).max())


def test_large_m_trains_strongest_antennas():
    hbar = RicianSpec.from_paths(16, 3, 1.0, 1e-6, [(1.0, 0.3, 0.2), (0.4, -0.9, 0.7)]).hbar
    p = default_params(M=16, N=3, T=60, K=1.0)
    r = solve_large_m(p, hbar)
    _, order, _ = antenna_ordering(hbar)
    assert r.design.trained_set == tuple(sorted(order[:r.design.n1]))


@given(st.integers(1, 3000), st.floats(0, 8), st.integers(1, 16))
def test_rank1_closed_form_is_argmax(t, k, n):
    got = closed_form_n1_rank1(default_params(M=n, N=n, T=t, K=k))
    vals = [rank1_objective(t, k, n, j) for j in range(n + 1)]
    assert vals[got] == max(vals)


def test_brute_force_guards(params):
    spec = RicianSpec.rayleigh(params.M, params.N, params.beta)
    with pytest.raises(ContractError):
        brute_force_p1(params.with_(N=13), RicianSpec.rayleigh(5, 13, params.beta), ([1], [1.0]), 10)
    with pytest.raises(ContractError):
        brute_force_p1(params, spec, ([], [1.0]), 10)


def test_brute_force_finds_training_gain():
    p = default_params(M=4, N=2, T=40)
    spec = RicianSpec.rayleigh(4, 2, p.beta)
    r = solve_rayleigh(p)
    bf = brute_force_p1(p, spec, ([1, 2], [r.design.pr, 10 * r.design.pr]), 4000, seed=1)
    assert bf.regime is Regime.BRUTE_FORCE and bf.trained
    assert bf.predicted_net >= bf.candidates[0][1].mean_net
    assert len(bf.candidates) == 1 + 2 * 2 * 2 + 1 * 1 * 2

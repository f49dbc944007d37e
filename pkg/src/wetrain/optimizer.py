"""Training-design solvers: which receive antennas to train, for how long, at what power.

The three closed-form regimes (Rayleigh MIMO, MISO Rician, large-M Rician)
share one structure. For ``N1 >= 1`` trained antennas with ``tau = N1`` the
optimal net energy is

    (T - N1) * base + coef * N1 * (sqrt((T - N1) * (ratio - 1)) - offset)^2

when ``(T - N1)(ratio - 1) > offset^2`` and ``(T - N1) * base`` otherwise, with
``offset = (K + 1) / sqrt(Gamma)`` and the optimal pilot power
``sqrt(eta P_f sigma_r^2) * [sqrt((T - N1)(ratio - 1)) - offset]^+``. Only
``base`` and ``ratio`` differ between regimes.
"""

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .energy import esnr
from .numerics import ContractError, hermitian_max_eig
from .wishart import default_table

MAX_BRUTE_FORCE_N = 12


class Regime(str, Enum):
    RAYLEIGH = "rayleigh"
    MISO_RICIAN = "miso_rician"
    LARGE_M = "large_m"
    BRUTE_FORCE = "brute_force"


@dataclass(frozen=True)
class TrainingDesign:
    """Trained antenna set, pilot duration ``tau`` (symbols) and pilot power ``pr`` (W)."""

    n1: int
    trained_set: tuple
    tau: int
    pr: float

    def __post_init__(self):
        object.__setattr__(self, "trained_set", tuple(sorted(int(i) for i in self.trained_set)))
        if len(self.trained_set) != self.n1:
            raise ContractError(f"|trained_set| = {len(self.trained_set)} != n1 = {self.n1}")
        if self.pr < 0:
            raise ContractError("pr must be >= 0")
        if self.n1 == 0 and (self.tau != 0 or self.pr != 0):
            raise ContractError("a design without trained antennas must have tau = 0, pr = 0")
        if self.n1 > 0 and self.tau < self.n1:
            raise ContractError(f"tau={self.tau} < n1={self.n1}")

    @classmethod
    def no_training(cls):
        return cls(0, (), 0, 0.0)

    @classmethod
    def first(cls, n1, pr, tau=None):
        """Train antennas ``0..n1-1`` (any subset is equivalent when they are i.i.d.)."""
        if n1 == 0:
            return cls.no_training()
        return cls(n1, tuple(range(n1)), n1 if tau is None else tau, float(pr))

    @property
    def energy(self):
        return self.pr * self.tau


@dataclass(frozen=True)
class SolverReport:
    design: TrainingDesign
    predicted_net: float
    regime: Regime
    values: tuple = ()              # predicted net for N1 = 0, 1, ... (closed-form regimes)
    halfwidth: float | None = None  # Monte Carlo regimes only
    candidates: list = field(default_factory=list, repr=False)

    @property
    def trained(self):
        return self.design.n1 > 0


# ---------------------------------------------------------------------------
# Closed-form pieces
# ---------------------------------------------------------------------------

def _offset(p, gamma=None):
    gamma = esnr(p) if gamma is None else gamma
    return (p.K + 1.0) / math.sqrt(gamma)


def _base_rate(p, lam_bar):
    """Per-symbol harvest without training: ``eta P_f beta (K lam_bar + N) / (K + 1)``."""
    return p.eta * p.Pf * p.beta * (p.K * lam_bar + p.N) / (p.K + 1.0)


def optimal_value_and_power(p, n1, base, ratio):
    """Optimal net energy and pilot power for ``n1`` trained antennas (``tau = n1``)."""
    if n1 == 0:
        return p.T * base, 0.0
    if n1 > p.T:
        raise ContractError(f"n1={n1} exceeds block length T={p.T}")
    c = _offset(p)
    x = (p.T - n1) * (ratio - 1.0)
    if x > c * c:
        gap = math.sqrt(x) - c
        coef = p.eta * p.Pf * p.beta / (p.K + 1.0)
        value = (p.T - n1) * base + coef * n1 * gap * gap
        return value, math.sqrt(p.eta * p.Pf * p.sigma_r2) * gap
    return (p.T - n1) * base, 0.0


def _in_training_set(p, n1, ratio):
    c = _offset(p)
    return (p.T - n1) * (ratio - 1.0) > c * c


def _argmax(values, allowed):
    # smallest index wins exact ties
    best = 0
    for n1 in allowed:
        if values[n1] > values[best]:
            best = n1
    return best


def rayleigh_net(p, n1, tau, pr, lam):
    """Net average energy in Rayleigh fading for any ``(N1, tau, P_r)``.

    ``lam`` is ``Lambda(M, N1)``.
    """
    if n1 == 0:
        return p.eta * (p.T - tau) * p.Pf * p.beta * p.N - pr * tau
    e = pr * tau * p.beta
    trained = (e * lam + p.sigma_r2 * n1 ** 2) / (e + p.sigma_r2 * n1)
    return p.eta * (p.T - tau) * p.Pf * p.beta * (trained + p.N - n1) - pr * tau


def miso_net(p, n1, tau, pr):
    """Net average energy for a single-antenna receiver in Rician fading."""
    K, M = p.K, p.M
    e = p.beta * pr * tau
    inner = K * M / (K + 1.0) + (1.0 - n1) / (K + 1.0)
    if n1:
        inner += n1 * (M * e / (K + 1.0) + p.sigma_r2) / (e + p.sigma_r2 * n1 * (K + 1.0))
    return p.eta * (p.T - tau) * p.Pf * p.beta * inner - pr * tau


def large_m_bound(p, lam_bar, vnorm2, n1, tau, pr):
    """Large-M lower bound on the net energy.

    ``lam_bar`` is ``lambda_max(Hbar Hbar^H)``; ``vnorm2`` the squared norm of the
    trained entries of its dominant eigenvector.
    """
    K = p.K
    e = p.beta * pr * tau
    if n1:
        trained = (p.M * vnorm2 * e + n1 ** 2 * p.sigma_r2 * (K + 1.0)) / (
            e + n1 * p.sigma_r2 * (K + 1.0))
    else:
        trained = 0.0
    return (p.eta * (p.T - tau) * p.Pf * p.beta / (K + 1.0)
            * (K * lam_bar + trained + p.N - n1) - pr * tau)


def rayleigh_trains_miso(T, M, gamma):
    """Train decision for ``N = 1`` Rayleigh: ``TM - T - M > 1/Gamma + 2/sqrt(Gamma)``."""
    return T * M - T - M > 1.0 / gamma + 2.0 / math.sqrt(gamma)


def miso_trains(T, M, K, gamma):
    """Train decision for ``N = 1`` Rician:
    ``(T-1)(M-1) > (sqrt(KM+1) + (K+1)/sqrt(Gamma))^2``. ``gamma`` may be ``inf``."""
    rhs = (math.sqrt(K * M + 1.0) + (K + 1.0) / math.sqrt(gamma)) ** 2
    return (T - 1) * (M - 1) > rhs


def miso_training_threshold(M, K, gamma, t_max=10**7):
    """Smallest block length ``T`` for which training pays off, or ``None``."""
    if M <= 1:
        return None
    rhs = (math.sqrt(K * M + 1.0) + (K + 1.0) / math.sqrt(gamma)) ** 2
    t = max(1, math.floor(rhs / (M - 1) + 1.0) - 1)
    while not miso_trains(t, M, K, gamma):
        t += 1
        if t > t_max:
            return None
    return t


# ---------------------------------------------------------------------------
# Solvers
# ---------------------------------------------------------------------------

def solve_rayleigh(p, lam=None):
    """Optimal design in Rayleigh fading (``K = 0``).

    ``lam`` is a callable ``(M, N1) -> Lambda``; defaults to the shared exact table.
    """
    if p.K != 0:
        raise ContractError("solve_rayleigh requires K = 0")
    lam = default_table() if lam is None else lam
    base = _base_rate(p, 0.0)
    top = min(p.N, p.T)
    values, powers, allowed = [], [], [0]
    for n1 in range(top + 1):
        ratio = lam(p.M, n1) / n1 if n1 else 0.0
        v, pw = optimal_value_and_power(p, n1, base, ratio)
        values.append(v)
        powers.append(pw)
        if n1 and _in_training_set(p, n1, ratio):
            allowed.append(n1)
    best = _argmax(values, allowed)
    return SolverReport(TrainingDesign.first(best, powers[best]), values[best],
                        Regime.RAYLEIGH, tuple(values))


def solve_miso_rician(p):
    """Optimal binary train / no-train decision for a single receive antenna."""
    if p.N != 1:
        raise ContractError("solve_miso_rician requires N = 1")
    base = _base_rate(p, float(p.M))
    v0, _ = optimal_value_and_power(p, 0, base, float(p.M))
    v1, pw = optimal_value_and_power(p, 1, base, float(p.M)) if p.T >= 1 else (v0, 0.0)
    if miso_trains(p.T, p.M, p.K, esnr(p)):
        return SolverReport(TrainingDesign.first(1, pw), v1, Regime.MISO_RICIAN, (v0, v1))
    return SolverReport(TrainingDesign.no_training(), v0, Regime.MISO_RICIAN, (v0, v1))


def antenna_ordering(hbar):
    """Dominant eigenpair of ``Hbar Hbar^H`` and receive antennas sorted by ``|v|`` (descending)."""
    hbar = np.asarray(hbar, dtype=complex)
    pair = hermitian_max_eig(hbar @ np.conj(hbar.T))
    mag2 = np.abs(pair.vector) ** 2
    order = np.argsort(-mag2, kind="stable")
    return float(pair.value), order, np.cumsum(mag2[order])


def solve_large_m(p, hbar):
    """Approximate design for ``M >= N`` by maximizing the large-M lower bound."""
    if p.M < p.N:
        raise ContractError("solve_large_m requires M >= N")
    lam_bar, order, cum = antenna_ordering(hbar)
    base = _base_rate(p, lam_bar)
    top = min(p.N, p.T)
    values, powers, allowed = [], [], [0]
    for n1 in range(top + 1):
        ratio = p.M * cum[n1 - 1] / n1 if n1 else 0.0
        v, pw = optimal_value_and_power(p, n1, base, ratio)
        values.append(v)
        powers.append(pw)
        if n1 and _in_training_set(p, n1, ratio):
            allowed.append(n1)
    best = _argmax(values, allowed)
    if best == 0:
        design = TrainingDesign.no_training()
    else:
        design = TrainingDesign(best, tuple(order[:best]), best, powers[best])
    return SolverReport(design, values[best], Regime.LARGE_M, tuple(values))


def rank1_objective(T, K, N, n1):
    """``(T - N1)(K N^2 + N1)``: the rank-1, large-M net energy up to a positive factor."""
    return (T - n1) * (K * N * N + n1)


def closed_form_n1_rank1(p):
    """Trained-antenna count for a rank-1 ``Hbar`` at large M.

    The relaxed optimum ``(T - K N^2) / 2`` is clamped to ``[0, N]``; when it is
    fractional the better of floor and ceiling is kept (floor on ties).
    """
    x = min(max((p.T - p.K * p.N ** 2) / 2.0, 0.0), float(p.N))
    lo, hi = math.floor(x), math.ceil(x)
    if lo == hi:
        return int(lo)
    f = lambda n: rank1_objective(p.T, p.K, p.N, n)  # noqa: E731
    return int(hi) if f(hi) > f(lo) else int(lo)


def predicted_net(p, design, hbar=None, lam=None):
    """Analytic net energy of an arbitrary design in the regime implied by ``p``."""
    if p.K == 0:
        lam = default_table() if lam is None else lam
        ln = lam(p.M, design.n1) if design.n1 else 0.0
        return rayleigh_net(p, design.n1, design.tau, design.pr, ln)
    if p.N == 1:
        return miso_net(p, design.n1, design.tau, design.pr)
    if hbar is None:
        raise ContractError("hbar required for the large-M bound")
    hbar = np.asarray(hbar, dtype=complex)
    pair = hermitian_max_eig(hbar @ np.conj(hbar.T))
    vnorm2 = float(np.sum(np.abs(pair.vector[list(design.trained_set)]) ** 2))
    return large_m_bound(p, float(pair.value), vnorm2, design.n1, design.tau, design.pr)


def brute_force_p1(p, spec, grid, trials, seed=0, workers=1):
    """Exhaustive Monte Carlo search over antenna subsets, ``tau`` and ``P_r``.

    Every candidate is simulated with the same master seed, so channel draws are
    shared across candidates (common random numbers). ``grid`` is
    ``(tau_values, pr_values)``.
    """
    from .simkit import TrialPlan, run_plan

    if p.N > MAX_BRUTE_FORCE_N:
        raise ContractError(f"brute force limited to N <= {MAX_BRUTE_FORCE_N}")
    taus, prs = grid
    if not len(taus) or not len(prs):
        raise ContractError("grid must be non-empty")
    designs = [TrainingDesign.no_training()]
    for n1 in range(1, p.N + 1):
        for subset in itertools.combinations(range(p.N), n1):
            for tau in taus:
                if n1 <= tau <= p.T:
                    designs.extend(TrainingDesign(n1, subset, int(tau), float(pr)) for pr in prs)
    results = []
    for d in designs:
        stats = run_plan(TrialPlan(p, spec, d, trials, seed), workers=workers)
        results.append((d, stats))
    best_d, best_s = results[0]
    for d, s in results[1:]:
        if s.mean_net > best_s.mean_net:
            best_d, best_s = d, s
    return SolverReport(best_d, best_s.mean_net, Regime.BRUTE_FORCE,
                        halfwidth=best_s.halfwidth95, candidates=results)

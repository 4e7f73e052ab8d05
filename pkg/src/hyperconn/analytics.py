"""Closed-form quantities for the critical window of k-connectivity.

Binomials of binomials such as ``C(C(n, d), m)`` are handled in log space;
integer arithmetic would be hopeless at these sizes.  The degree law is a
small difference of huge log-gammas, so its anchor value is computed in
multiprecision and the rest of the vector follows by ratio recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, factorial

import mpmath
import numpy as np
from scipy.special import gammaln
from scipy.stats import binom


# --------------------------------------------------------------------------
# threshold parameters

def _ceil_clamped(x: float, N: int) -> int:
    return int(min(max(math.ceil(x), 0), N))


@dataclass(frozen=True)
class ThresholdParams:
    n: int
    d: int
    k: int
    c: float
    omega: float
    m_at_c: int
    p_at_c: float
    m0: int
    m1: int
    m0_prime: int | None
    m1_prime: int | None

    @property
    def potential_edges(self) -> int:
        return comb(self.n, self.d)


def _window_level(n: int, k: int) -> float:
    ln = math.log(n)
    return ln + (k - 1) * math.log(ln)


def thresholds(n: int, d: int, k: int, c: float = 0.0, omega: float = 3.0) -> ThresholdParams:
    """Edge counts and edge probability around the k-connectivity threshold.

    ``m = (n/d)(ln n + (k-1) ln ln n + x)`` rounded up and clamped to
    ``[0, C(n, d)]``, for ``x = c`` (``m_at_c``), ``x = -omega, +omega``
    (``m0``, ``m1``) and ``x = -/+ ln ln ln n`` (``m0_prime``, ``m1_prime``;
    None when ``ln ln ln n <= 0``, i.e. ``n <= 15``).
    """
    if n < 3:
        raise ValueError(f"need n >= 3 so that ln ln n > 0, got n={n}")
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if d < 2 or k < 1:
        raise ValueError(f"need d >= 2 and k >= 1, got d={d}, k={k}")
    N = comb(n, d)
    base = _window_level(n, k)
    scale = n / d
    m_at_c = _ceil_clamped(scale * (base + c), N)
    p = factorial(d - 1) * (base + c) / n ** (d - 1)
    p = min(max(p, 0.0), 1.0)
    m0 = _ceil_clamped(scale * (base - omega), N)
    m1 = _ceil_clamped(scale * (base + omega), N)
    lll = math.log(math.log(math.log(n))) if n > math.e ** math.e else -math.inf
    if lll > 0:
        m0p = _ceil_clamped(scale * (base - lll), N)
        m1p = _ceil_clamped(scale * (base + lll), N)
    else:
        m0p = m1p = None
    return ThresholdParams(n, d, k, c, omega, m_at_c, p, m0, m1, m0p, m1p)


def limit_prob_k_connected(c: float, k: int) -> float:
    """Limiting probability of k-connectivity at offset ``c``."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    return math.exp(-poisson_limit_lambda(c, k))


def poisson_limit_lambda(c: float, k: int) -> float:
    """Limiting mean number of degree-(k-1) vertices, ``e^{-c}/(k-1)!``."""
    return math.exp(-c) / factorial(k - 1)


@dataclass(frozen=True)
class PoissonLimit:
    lam: float
    prob_k_connected: float

    @classmethod
    def at(cls, c: float, k: int) -> "PoissonLimit":
        lam = poisson_limit_lambda(c, k)
        return cls(lam, math.exp(-lam))


# --------------------------------------------------------------------------
# exact finite-n laws

def _check_degree_args(n, d, m, j):
    N = comb(n, d)
    K = comb(n - 1, d - 1)
    if not 0 <= m <= N:
        raise ValueError(f"m must lie in [0, {N}], got {m}")
    if not 0 <= j <= min(m, K):
        raise ValueError(f"j must lie in [0, {min(m, K)}], got {j}")
    return N, K


def _log_binom_mp(a: int, b: int):
    return mpmath.loggamma(a + 1) - mpmath.loggamma(b + 1) - mpmath.loggamma(a - b + 1)


def log_degree_pmf(n: int, d: int, m: int, j: int) -> float:
    """Log of the hypergeometric degree law ``C(K,j) C(N-K,m-j) / C(N,m)``
    with ``N = C(n, d)``, ``K = C(n-1, d-1)``.

    The three log-binomials are each of size about ``N log N`` while their
    combination is small, so they are evaluated in multiprecision with
    enough guard digits to survive the cancellation.
    """
    N, K = _check_degree_args(n, d, m, j)
    if m - j > N - K:
        return -math.inf
    with mpmath.workdps(25 + len(str(N))):
        val = _log_binom_mp(K, j) + _log_binom_mp(N - K, m - j) - _log_binom_mp(N, m)
        return float(val)


def exact_degree_pmf(n: int, d: int, m: int, j: int) -> float:
    """P(deg(v) = j) in the uniform m-edge hypergraph (hypergeometric)."""
    return math.exp(log_degree_pmf(n, d, m, j))


def degree_pmf_vector(n: int, d: int, m: int) -> np.ndarray:
    """``exact_degree_pmf`` for ``j = 0 .. min(m, C(n-1, d-1))``.

    Anchored at the mode and extended by the ratio recurrence
    ``pmf(j+1)/pmf(j) = (K-j)(m-j) / ((j+1)(N-K-m+j+1))`` across the
    window carrying the mass; entries far outside it are left at zero
    (they are below ``1e-300``).
    """
    N, K = _check_degree_args(n, d, m, 0)
    top = min(m, K)
    lo = max(0, m - (N - K))
    out = np.zeros(top + 1)
    mode = min(max((m + 1) * (K + 1) // (N + 2), lo), top)
    var = m * (K / N) * (1 - K / N) * (N - m) / max(N - 1, 1)
    half = int(40 * math.sqrt(var)) + 200
    a, b = max(lo, mode - half), min(top, mode + half)
    anchor = log_degree_pmf(n, d, m, mode)

    def step_logs(j):
        return np.log(K - j) + np.log(m - j) - np.log(j + 1) - np.log(N - K - m + j + 1)

    up = np.arange(mode, b, dtype=np.float64)
    down = np.arange(mode - 1, a - 1, -1, dtype=np.float64)
    out[mode:b + 1] = np.exp(anchor + np.concatenate(([0.0], np.cumsum(step_logs(up)))))
    if len(down):
        out[a:mode] = np.exp(anchor - np.cumsum(step_logs(down)))[::-1]
    return out


def exact_expected_deg_count(n: int, d: int, m: int, k: int) -> float:
    """Expected number of vertices of degree ``k - 1`` with ``m`` edges."""
    j = k - 1
    K = comb(n - 1, d - 1)
    if j > min(m, K):
        return 0.0
    return n * exact_degree_pmf(n, d, m, j)


def edge_count_pmf(n: int, d: int, p: float, m: int) -> float:
    """P(e(H_d(n, p)) = m), a Binomial(C(n, d), p) mass."""
    N = comb(n, d)
    if not 0 <= m <= N:
        raise ValueError(f"m must lie in [0, {N}], got {m}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if p == 0.0:
        return 1.0 if m == 0 else 0.0
    if p == 1.0:
        return 1.0 if m == N else 0.0
    return float(np.exp(binom.logpmf(m, N, p)))


def mix_over_edge_counts(n: int, d: int, p: float, prob_at_m, tail: float = 1e-12) -> float:
    """``sum_m P(e = m) * prob_at_m(m)``: a property's probability in
    H_d(n, p) from its probabilities in H_d(n, m).

    Masses below ``tail`` on both ends of the binomial are dropped.
    """
    N = comb(n, d)
    mean = N * p
    sd = math.sqrt(max(N * p * (1 - p), 1e-300))
    span = int(10 * sd) + 10
    lo, hi = max(0, int(mean) - span), min(N, int(mean) + span)
    total = 0.0
    for m in range(lo, hi + 1):
        w = edge_count_pmf(n, d, p, m)
        if w < tail:
            continue
        total += w * prob_at_m(m)
    return total


# --------------------------------------------------------------------------
# Poisson comparison helpers

def poisson_pmf(lam: float, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if lam == 0:
        return (x == 0).astype(float)
    return np.exp(x * math.log(lam) - lam - gammaln(x + 1))


def tv_to_poisson(samples, lam: float) -> float:
    """Total-variation distance between an empirical law and Poisson(lam)."""
    samples = np.asarray(samples, dtype=np.int64)
    if samples.size == 0:
        raise ValueError("need at least one sample")
    top = int(max(samples.max(), lam + 20 * math.sqrt(lam + 1) + 20))
    emp = np.bincount(samples, minlength=top + 1)[: top + 1] / samples.size
    pois = poisson_pmf(lam, np.arange(top + 1))
    tail = max(0.0, 1.0 - pois.sum())
    return 0.5 * (float(np.abs(emp - pois).sum()) + tail)


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054) -> tuple[float, float]:
    if trials <= 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi

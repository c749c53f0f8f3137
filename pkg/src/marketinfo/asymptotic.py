"""Gamma null law of the estimated market information and the Taylor error bound.

Under the efficient null the estimate from ``N`` windows of length L+1 is
asymptotically Gamma with shape ``2**(L-1)`` and scale ``1 / (N ln 2)``. The
shape is always an integer, so the tail is a finite Erlang sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class GammaParams:
    shape: int
    scale: float
    L: int
    N: int

    @property
    def mean(self) -> float:
        return self.shape * self.scale


@dataclass(frozen=True)
class BoundParams:
    """Arguments of the error bound on one summand's characteristic function.

    ``epsilon = 1`` gives the large-``n_j`` form of the bound.
    """

    t: float
    p_j: float
    q: int
    epsilon: float
    n_j: float

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 2:
            raise ValueError(f"q must be an integer >= 2, got {self.q!r}")
        if self.epsilon < 1:
            raise ValueError("epsilon must be >= 1")
        if not 0 <= self.p_j <= 1:
            raise ValueError("p_j must be a probability")
        if self.n_j <= 0:
            raise ValueError("n_j must be positive")


def gamma_params(L: int, N: int) -> GammaParams:
    if int(L) != L or L < 1:
        raise ValueError(f"L must be a positive integer, got {L!r}")
    if int(N) != N or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    L, N = int(L), int(N)
    return GammaParams(shape=2 ** (L - 1), scale=1.0 / (_LN2 * N), L=L, N=N)


def survival(x: float, params: GammaParams) -> float:
    """P(X > x) = exp(-z) * sum_{m<k} z**m / m!  with z = x / scale.

    Strictly decreasing in exact arithmetic; float results may tie near 0 and 1.
    """
    if not x >= 0:
        raise ValueError(f"survival needs x >= 0, got {x!r}")
    if x == 0:
        return 1.0
    z = x / params.scale
    if math.isinf(z):
        return 0.0
    k = params.shape
    if z < k:
        # below the mode the complementary Poisson tail sum_{m>=k} is small
        # and accurate, while the finite sum would be a rounded 1 - tiny
        return 1.0 - _poisson_upper(z, k)
    m = np.arange(k)
    log_terms = -z + m * math.log(z) - np.array([math.lgamma(j + 1) for j in m])
    terms = np.sort(np.exp(log_terms))
    return min(1.0, math.fsum(terms))


def _poisson_upper(z: float, k: int) -> float:
    """P(Poisson(z) >= k) for z < k, summed until terms stop mattering."""
    term = math.exp(-z + k * math.log(z) - math.lgamma(k + 1))
    terms, m = [], k
    while term > 0 and (not terms or term > 1e-18 * terms[0]):
        terms.append(term)
        m += 1
        term *= z / m
    return math.fsum(reversed(terms))


def cdf(x: float, params: GammaParams) -> float:
    if x <= 0:
        return 0.0
    z = x / params.scale
    if z < params.shape:
        return _poisson_upper(z, params.shape)
    return 1.0 - survival(x, params)


def critical_value(alpha: float, params: GammaParams, rtol: float = 1e-13) -> float:
    """Smallest x with survival(x) = alpha, by bisection.

    The bracket starts at ``scale * (shape + 40)`` and doubles until it holds
    the quantile, which matters for large shapes where 40 scale units is less
    than one standard deviation.
    """
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    lo, hi = 0.0, params.scale * (params.shape + 40)
    while survival(hi, params) > alpha:
        lo, hi = hi, 2 * hi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if survival(mid, params) > alpha:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lah_number(k: int, l: int) -> int:
    """Unsigned Lah number C(k-1, l-1) * k! / l!."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k!r}")
    if int(l) != l or not 1 <= l <= k:
        raise ValueError(f"l must be an integer in [1, {k}], got {l!r}")
    k, l = int(k), int(l)
    return math.comb(k - 1, l - 1) * math.factorial(k) // math.factorial(l)


def error_bound(params: BoundParams) -> float:
    """Upper bound on the remainder of the two-term expansion of
    ``E[g_j(t, X / n_j)]`` with ``X ~ Binomial(n_j, 1/2)``.

    Decays like ``n_j ** (-2 + 1 / (2 q))``.
    """
    q = int(params.q)
    a = abs(2 ** 5 * params.t * params.p_j / (15 * _LN2))
    series = math.fsum(
        a ** l * lah_number(4, l) / (5 * q * l - 1) ** (1.0 / q) for l in range(1, 5)
    )
    const = params.epsilon / 96 * (q - 1) ** (1 - 1.0 / q) * (4 * q - 1) ** 3
    return const * series * params.n_j ** (-2 + 1.0 / (2 * q))

"""Shannon entropies of binary patterns and the market information.

All entropies are in bits. ``0 * log2(0)`` is taken as 0 wherever it occurs,
through explicit masking rather than floating-point accidents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InconsistentProbabilitiesError
from .symbolic import count_patterns, empirical_probs

NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class InformationEstimate:
    L: int
    N: int
    p_hat: np.ndarray
    pi_hat: np.ndarray
    H_full: float
    H_star: float
    info: float


def _as_dist(dist) -> np.ndarray:
    p = np.asarray(dist, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("distribution must be a nonempty 1-d array")
    if np.any(~np.isfinite(p)) or np.any(p < 0):
        raise ValueError("distribution entries must be finite and nonnegative")
    if abs(p.sum() - 1.0) > NORM_TOL:
        raise ValueError(f"distribution sums to {p.sum()!r}, not 1")
    return p


def _as_conditional(p: np.ndarray, pi) -> np.ndarray:
    pi = np.array([np.nan if v is None else v for v in pi], dtype=float)
    if pi.shape != p.shape:
        raise ValueError("p and pi must have the same length")
    missing = (p > 0) & np.isnan(pi)
    if np.any(missing):
        raise InconsistentProbabilitiesError(
            f"pi undefined at positions {np.flatnonzero(missing).tolist()} where p > 0"
        )
    live = p > 0
    if np.any((pi[live] < 0) | (pi[live] > 1)):
        raise ValueError("conditional probabilities must lie in [0, 1]")
    return pi


def _xlog2x(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x, dtype=float)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return out


def shannon_entropy(dist) -> float:
    p = _as_dist(dist)
    return float(-_xlog2x(p).sum())


def binary_entropy(pi) -> np.ndarray:
    pi = np.asarray(pi, dtype=float)
    return -(_xlog2x(pi) + _xlog2x(1.0 - pi))


def entropy_full(p, pi) -> float:
    """Entropy of the (L+1)-gram law built from prefix probabilities and
    conditional suffix probabilities."""
    p = _as_dist(p)
    pi = _as_conditional(p, pi)
    live = p > 0
    a = p[live] * pi[live]
    b = p[live] * (1.0 - pi[live])
    return float(-(_xlog2x(a) + _xlog2x(b)).sum())


def entropy_star(p) -> float:
    """Entropy an efficient market would show: one extra fair bit."""
    return 1.0 + shannon_entropy(p)


def market_information(p, pi) -> float:
    """Entropy gap between the efficient-market law and the observed law.

    Evaluated as ``sum_i p_i * (1 - H_b(pi_i))``, which is algebraically equal
    to ``entropy_star(p) - entropy_full(p, pi)`` and is exactly zero when every
    live ``pi_i`` is 1/2.
    """
    p = _as_dist(p)
    pi = _as_conditional(p, pi)
    live = p > 0
    terms = p[live] * (1.0 - binary_entropy(pi[live]))
    return float(terms.sum())


def estimate_information(bits, L: int) -> InformationEstimate:
    table = count_patterns(bits, L)
    p_hat, pi_hat = empirical_probs(table)
    for arr in (p_hat, pi_hat):
        arr.setflags(write=False)
    return InformationEstimate(
        L=table.L,
        N=table.N,
        p_hat=p_hat,
        pi_hat=pi_hat,
        H_full=entropy_full(p_hat, pi_hat),
        H_star=entropy_star(p_hat),
        info=market_information(p_hat, pi_hat),
    )

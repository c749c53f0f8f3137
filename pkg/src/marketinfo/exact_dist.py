"""Exact law of the estimated market information under the efficient null.

Everything here conditions on the prefix counts: prefix ``i`` is seen ``n_i``
times, its empirical probability equals ``p_i = n_i / sum(n)``, and the number
of up-moves following it is Binomial(n_i, 1/2), independently across
prefixes. Writing ``h(x) = x log2 x + (1-x) log2(1-x)``, the estimate is
``1 + sum_i p_i h(j_i / n_i)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceededError
from .information import market_information

DEFAULT_BUDGET = 10 ** 7
_CHUNK = 1 << 16
_LN2 = math.log(2.0)


@dataclass(frozen=True, eq=False)
class ConditionalSetup:
    """Prefix counts ``n_i`` and the prefix probabilities they imply."""

    counts: tuple
    p: np.ndarray
    L: int

    def __init__(self, counts):
        counts = tuple(int(c) for c in counts)
        size = len(counts)
        if size < 2 or size & (size - 1):
            raise ValueError(f"need 2**L prefix counts with L >= 1, got {size}")
        if any(c < 1 for c in counts):
            raise ValueError("every prefix count must be at least 1")
        total = sum(counts)
        p = np.array([c / total for c in counts])
        p.setflags(write=False)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "L", size.bit_length() - 1)

    @property
    def cost(self) -> int:
        """Number of terms in the nested sum over all suffix tallies."""
        return math.prod(n + 1 for n in self.counts)


@dataclass(frozen=True)
class ExactPmf:
    atoms: tuple  # ((value, probability), ...) sorted by value

    @property
    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.atoms])

    @property
    def probs(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])

    def moment(self, r: int) -> float:
        return math.fsum(w * v ** r for v, w in self.atoms)

    def mgf(self, t: float) -> float:
        return math.fsum(w * math.exp(t * v) for v, w in self.atoms)


def _binom_half(n: int) -> np.ndarray:
    """P(J = j) for J ~ Binomial(n, 1/2), j = 0..n."""
    if n <= 1000:
        denom = 2 ** n
        return np.array([math.comb(n, j) / denom for j in range(n + 1)])
    j = np.arange(n + 1)
    logw = (
        math.lgamma(n + 1)
        - np.array([math.lgamma(k + 1) + math.lgamma(n - k + 1) for k in j])
        - n * _LN2
    )
    return np.exp(logw)


def _h(n: int) -> np.ndarray:
    """h(j/n) for j = 0..n, with the 0 log 0 = 0 convention at both ends."""
    x = np.arange(n + 1) / n
    out = np.zeros(n + 1)
    inner = slice(1, n)
    xi = x[inner]
    out[inner] = xi * np.log2(xi) + (1.0 - xi) * np.log2(1.0 - xi)
    return out


def _check_budget(setup: ConditionalSetup, budget: int) -> None:
    if setup.cost > budget:
        raise BudgetExceededError(setup.cost, budget)


def mgf_exact(t: float, setup: ConditionalSetup) -> float:
    """Moment-generating function ``E[exp(t * I)]`` of the estimate.

    Each factor sums ``C(n,j) 2^-n (j/n)^(t p (j/n)/ln2) (1-j/n)^(t p (1-j/n)/ln2)``
    over j; the powers are evaluated as ``exp(t p h(j/n))`` so the boundary
    tallies j = 0 and j = n contribute their binomial weight alone.
    """
    t = float(t)
    log_total = t
    for n, p in zip(setup.counts, setup.p):
        expo = t * p * _h(n)
        peak = expo.max()
        if peak > 700:
            raise OverflowError(
                f"mgf exponent {peak:.1f} overflows at t={t}; use smaller |t|"
            )
        s = math.fsum(_binom_half(n) * np.exp(expo))
        log_total += math.log(s)
    try:
        return math.exp(log_total)
    except OverflowError:
        raise OverflowError(f"mgf value exp({log_total:.1f}) overflows at t={t}") from None


def _alpha_chunks(setup: ConditionalSetup):
    """Yield (alpha, weight) arrays over all suffix tallies in mixed-radix order."""
    dims = [n + 1 for n in setup.counts]
    h_tabs = [p * _h(n) for n, p in zip(setup.counts, setup.p)]
    w_tabs = [_binom_half(n) for n in setup.counts]
    total = math.prod(dims)
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        idx = np.unravel_index(flat, dims)
        alpha = np.zeros(len(flat))
        weight = np.ones(len(flat))
        for k in range(len(dims)):
            alpha += h_tabs[k][idx[k]]
            weight *= w_tabs[k][idx[k]]
        yield alpha, weight


def moment_exact(r: int, setup: ConditionalSetup, budget: int = DEFAULT_BUDGET) -> float:
    """Raw moment of order r from the binomial expansion of ``(1 + alpha)^r``.

    Cost is ``prod(n_i + 1)`` terms; refused above ``budget``.
    """
    if int(r) != r or r < 0:
        raise ValueError("moment order must be a nonnegative integer")
    r = int(r)
    if r == 0:
        return 1.0
    _check_budget(setup, budget)
    # E[alpha^m] for m = 0..r, each accumulated with exact-rounded partial sums
    partial = [[] for _ in range(r + 1)]
    for alpha, weight in _alpha_chunks(setup):
        power = weight.copy()
        for m in range(r + 1):
            partial[m].append(math.fsum(power))
            power *= alpha
    raw = [math.fsum(parts) for parts in partial]
    return math.fsum(math.comb(r, m) * raw[m] for m in range(r + 1))


def mean_exact(setup: ConditionalSetup) -> float:
    """First moment in closed form, linear in the total count.

    ``1 + sum_i p_i 2^(1-n_i) sum_j C(n_i, j) (j/n_i) log2(j/n_i)``
    """
    terms = [1.0]
    for n, p in zip(setup.counts, setup.p):
        x = np.arange(1, n + 1) / n
        inner = math.fsum(_binom_half(n)[1:] * x * np.log2(x))
        terms.append(2.0 * p * inner)
    return math.fsum(terms)


def enumerate_pmf(setup: ConditionalSetup, budget: int = DEFAULT_BUDGET, tol: float = 1e-12) -> ExactPmf:
    """Brute-force law: every tally tuple scored through ``market_information``.

    Deliberately slow; this is the reference the closed forms are checked
    against.
    """
    _check_budget(setup, budget)
    counts = setup.counts
    p = [c / sum(counts) for c in counts]
    per_prefix = [
        [(j, math.comb(n, j) / 2 ** n) for j in range(n + 1)] for n in counts
    ]
    scored = []
    for combo in itertools.product(*per_prefix):
        pi = [j / n for (j, _), n in zip(combo, counts)]
        prob = math.prod(w for _, w in combo)
        scored.append((market_information(p, pi), prob))
    scored.sort()

    atoms = []
    group_v, group_w = [scored[0][0]], [scored[0][1]]
    for v, w in scored[1:]:
        if v - group_v[0] <= tol:
            group_v.append(v)
            group_w.append(w)
        else:
            atoms.append((group_v[0], math.fsum(group_w)))
            group_v, group_w = [v], [w]
    atoms.append((group_v[0], math.fsum(group_w)))
    return ExactPmf(atoms=tuple(atoms))

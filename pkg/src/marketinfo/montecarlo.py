"""Simulation of the estimate under the null and under dependent alternatives.

Trial ``i`` of a run seeded with ``seed`` draws its bits from
``SeedSequence(seed, spawn_key=(i,))``, so every trial is reproducible on its
own and results do not depend on how trials are spread over workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .asymptotic import GammaParams, cdf, critical_value, gamma_params
from .efficiency_test import LEVELS, rejects, test_from_estimate
from .errors import UnobservedPrefixError
from .information import estimate_information

DEFAULT_TRIALS = 1000


@dataclass(frozen=True)
class GeneratorSpec:
    """Bit generator: fair coin, biased coin, or two-state Markov chain.

    For ``markov``, ``pi_0`` and ``pi_1`` are the probabilities of an up-move
    after a down-move and after an up-move. The chain starts from its
    stationary law.
    """

    kind: str
    n: int
    p: float = 0.5
    pi_0: float = 0.5
    pi_1: float = 0.5

    def __post_init__(self):
        if self.kind not in ("fair_coin", "biased_coin", "markov"):
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")
        for name in ("p", "pi_0", "pi_1"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must be a probability, got {v!r}")

    @classmethod
    def fair_coin(cls, n):
        return cls("fair_coin", n)

    @classmethod
    def biased_coin(cls, p, n):
        return cls("biased_coin", n, p=p)

    @classmethod
    def markov(cls, pi_0, pi_1, n):
        return cls("markov", n, pi_0=pi_0, pi_1=pi_1)

    def canonical(self) -> "GeneratorSpec":
        """Collapse memoryless chains to coins and fair coins to ``fair_coin``."""
        if self.kind == "markov":
            if self.pi_0 != self.pi_1:
                return self
            p = self.pi_0
        elif self.kind == "biased_coin":
            p = self.p
        else:
            p = 0.5
        if p == 0.5:
            return GeneratorSpec("fair_coin", self.n)
        return GeneratorSpec("biased_coin", self.n, p=p)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        spec = self.canonical()
        u = rng.random(spec.n)
        if spec.kind == "fair_coin":
            return (u < 0.5).astype(np.int8)
        if spec.kind == "biased_coin":
            return (u < spec.p).astype(np.int8)
        up_after = (spec.pi_0, spec.pi_1)
        denom = 1.0 - spec.pi_1 + spec.pi_0
        start = spec.pi_0 / denom if denom > 0 else 0.5
        out = np.empty(spec.n, dtype=np.int8)
        prev = int(u[0] < start)
        out[0] = prev
        for t in range(1, spec.n):
            prev = int(u[t] < up_after[prev])
            out[t] = prev
        return out


@dataclass(frozen=True, eq=False)
class SimulationReport:
    """Outcome of ``trials`` simulated trajectories.

    ``infos``/``p_values`` are per trial (p-value NaN when a prefix was never
    observed); ``samples`` keeps only the trials the null law applies to.
    """

    spec: GeneratorSpec
    L: int
    seed: int
    trials: int
    params: GammaParams
    infos: np.ndarray
    p_values: np.ndarray
    samples: np.ndarray
    ks_statistic: float
    ks_pvalue: float
    rejection_rates: dict = field(default_factory=dict)
    unobserved: int = 0


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _run_trials(args):
    spec, L, seed, start, stop = args
    out = np.empty((stop - start, 2))
    for row, i in enumerate(range(start, stop)):
        est = estimate_information(spec.sample(trial_rng(seed, i)), L)
        try:
            p_value = test_from_estimate(est).p_value
        except UnobservedPrefixError:
            p_value = math.nan
        out[row] = est.info, p_value
    return out


def _chunks(trials, workers):
    size = max(1, math.ceil(trials / (4 * workers)))
    return [(s, min(s + size, trials)) for s in range(0, trials, size)]


def simulate(spec: GeneratorSpec, L: int, trials: int = DEFAULT_TRIALS, seed: int = 0,
             workers: int = 1) -> SimulationReport:
    if spec.n < L + 1:
        raise ValueError(f"trajectories of {spec.n} bits are too short for L={L}")
    if int(trials) != trials or trials < 1:
        raise ValueError("trials must be a positive integer")
    trials = int(trials)
    jobs = [(spec, L, seed, a, b) for a, b in _chunks(trials, workers)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_trials, jobs))
    else:
        parts = [_run_trials(job) for job in jobs]
    res = np.concatenate(parts)
    infos, p_values = res[:, 0], res[:, 1]
    ok = ~np.isnan(p_values)
    samples = infos[ok]

    params = gamma_params(L, spec.n - L)
    if samples.size:
        d = ks_statistic(samples, params)
        kp = ks_pvalue(d, samples.size)
        rates = {lvl: float(np.mean([rejects(pv, lvl) for pv in p_values[ok]])) for lvl in LEVELS}
    else:
        d, kp = math.nan, math.nan
        rates = {lvl: math.nan for lvl in LEVELS}
    for arr in (infos, p_values, samples):
        arr.setflags(write=False)
    return SimulationReport(
        spec=spec, L=L, seed=seed, trials=trials, params=params,
        infos=infos, p_values=p_values, samples=samples,
        ks_statistic=d, ks_pvalue=kp, rejection_rates=rates,
        unobserved=int((~ok).sum()),
    )


def ks_statistic(samples, params: GammaParams) -> float:
    """Two-sided Kolmogorov distance between the sample and the gamma law."""
    x = np.sort(np.asarray(samples, dtype=float))
    m = x.size
    if m == 0:
        raise ValueError("ks_statistic needs at least one sample")
    F = np.array([cdf(v, params) for v in x])
    i = np.arange(1, m + 1)
    return float(max(np.max(i / m - F), np.max(F - (i - 1) / m)))


def ks_pvalue(d: float, m: int) -> float:
    """Asymptotic Kolmogorov tail Q(sqrt(m) d), truncated below 1e-12."""
    if d < 0 or m < 1:
        raise ValueError("need d >= 0 and m >= 1")
    z = math.sqrt(m) * d
    if z == 0:
        return 1.0
    total, j = 0.0, 1
    while True:
        term = math.exp(-2.0 * j * j * z * z)
        total += term if j % 2 else -term
        if term < 1e-12:
            break
        j += 1
    return min(1.0, max(0.0, 2.0 * total))


def calibration_curve(L: int, n_grid, trials: int = DEFAULT_TRIALS, seed: int = 0,
                      workers: int = 1) -> list:
    """KS distance to the gamma law for fair-coin trajectories of each length.

    Returns one ``(n, ks_statistic, ks_pvalue, unobserved)`` tuple per grid
    point.
    """
    rows = []
    for n in n_grid:
        rep = simulate(GeneratorSpec.fair_coin(int(n)), L, trials, seed, workers)
        rows.append((int(n), rep.ks_statistic, rep.ks_pvalue, rep.unobserved))
    return rows


def gamma_quantile_samples(m: int, params: GammaParams, seed: int) -> np.ndarray:
    """Inverse-CDF draws from the gamma law (bisection through critical_value)."""
    u = np.random.default_rng(seed).random(m)
    return np.array([critical_value(1.0 - ui, params) if ui > 0 else 0.0 for ui in u])

"""Rolling-window testing of price series and the tables behind the figures."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .asymptotic import BoundParams, cdf, critical_value, error_bound, gamma_params
from .efficiency_test import rejects, test_from_estimate
from .errors import InputTooShortError, UnobservedPrefixError
from .information import estimate_information
from .montecarlo import GeneratorSpec, calibration_curve, simulate
from .symbolic import PriceSeries, encode_returns

KOLMOGOROV_QUANTILES = {0.05: 1.3581, 0.01: 1.6276, 0.001: 1.9495}


def level_tag(level: float) -> str:
    """0.95 -> '95', 0.999 -> '999'."""
    return f"{level:.10f}".split(".")[1].rstrip("0")


@dataclass(frozen=True)
class RollingConfig:
    window: int = 100
    L: int = 1
    levels: tuple = (0.95, 0.99, 0.999)
    step: int = 1

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        if self.L < 1:
            raise ValueError("L must be positive")
        if self.window < self.L + 1:
            raise ValueError(f"window {self.window} must be at least L + 1 = {self.L + 1}")
        if self.step < 1:
            raise ValueError("step must be positive")
        if not self.levels or any(not 0 < v < 1 for v in self.levels):
            raise ValueError("levels must lie in (0, 1)")
        if any(a >= b for a, b in zip(self.levels, self.levels[1:])):
            raise ValueError("levels must be strictly increasing")


@dataclass(frozen=True)
class RollingRow:
    date: object
    info: float
    p_value: float  # NaN when the window misses a prefix
    rejects: tuple  # per level; None when untested
    critical: tuple
    status: str = "ok"


@dataclass(frozen=True)
class RollingSummary:
    levels: tuple
    tested: int
    skipped: int
    rejected: tuple

    @property
    def fractions(self) -> tuple:
        if not self.tested:
            return tuple(math.nan for _ in self.levels)
        return tuple(r / self.tested for r in self.rejected)


def _score_windows(args):
    prices, ends, config = args
    out = []
    for e in ends:
        bits = encode_returns(prices[e - config.window : e + 1])
        est = estimate_information(bits, config.L)
        try:
            p_value = test_from_estimate(est).p_value
        except UnobservedPrefixError:
            p_value = math.nan
        out.append((est.info, p_value))
    return out


def run_roll(series: PriceSeries, config: RollingConfig = RollingConfig(), workers: int = 1):
    """Test each trailing window of ``window`` returns ending at every date.

    Returns ``(rows, summary)``. Windows where some prefix never occurs are
    kept with a NaN p-value and ``status='unobserved_prefix'``; they are left
    out of the rejection fractions.
    """
    prices = np.asarray(series.prices, dtype=float)
    if len(prices) < config.window + 1:
        raise InputTooShortError(
            f"need at least window + 1 = {config.window + 1} prices, got {len(prices)}"
        )
    ends = list(range(config.window, len(prices), config.step))
    params = gamma_params(config.L, config.window - config.L)
    crit = tuple(critical_value(1 - lvl, params) for lvl in config.levels)

    size = max(1, math.ceil(len(ends) / (4 * max(workers, 1))))
    jobs = [(prices, ends[i : i + size], config) for i in range(0, len(ends), size)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_score_windows, jobs))
    else:
        parts = [_score_windows(job) for job in jobs]
    scored = [s for part in parts for s in part]

    rows = []
    for e, (info, p_value) in zip(ends, scored):
        if math.isnan(p_value):
            rows.append(RollingRow(series.timestamps[e], info, p_value,
                                   (None,) * len(config.levels), crit, "unobserved_prefix"))
        else:
            flags = tuple(rejects(p_value, lvl) for lvl in config.levels)
            rows.append(RollingRow(series.timestamps[e], info, p_value, flags, crit))
    tested = [r for r in rows if r.status == "ok"]
    summary = RollingSummary(
        levels=config.levels,
        tested=len(tested),
        skipped=len(rows) - len(tested),
        rejected=tuple(sum(r.rejects[k] for r in tested) for k in range(len(config.levels))),
    )
    return rows, summary


def roll_header(config: RollingConfig) -> list:
    tags = [level_tag(v) for v in config.levels]
    return (["date", "info", "p_value"] + [f"crit{t}" for t in tags]
            + [f"reject{t}" for t in tags] + ["status"])


def roll_records(rows, config: RollingConfig):
    for r in rows:
        flags = ["" if f is None else int(f) for f in r.rejects]
        yield [r.date, r.info, r.p_value, *r.critical, *flags, r.status]


# --- figure tables -----------------------------------------------------------

def figure_bound(n_grid=None, t=1.0, p=0.5, epsilon=1.0, qs=(2, 3, 4, 5)):
    if n_grid is None:
        n_grid = np.logspace(2, 6, 41)
    header = ["n"] + [f"q{q}" for q in qs]
    rows = [[n] + [error_bound(BoundParams(t, p, q, epsilon, n)) for q in qs] for n in n_grid]
    return header, rows


def figure_critical(L=1, n_grid=None, alphas=(0.05, 0.01, 0.001)):
    """Information level at which each p-value is reached, against N."""
    if n_grid is None:
        n_grid = range(50, 1001, 10)
    header = ["n"] + [f"alpha_{a:g}" for a in alphas]
    rows = []
    for n in n_grid:
        params = gamma_params(L, int(n))
        rows.append([int(n)] + [critical_value(a, params) for a in alphas])
    return header, rows


def figure_distribution(L=1, n=100, trials=1000, seed=0, workers=1):
    """Empirical CDF of simulated estimates next to the gamma CDF.

    ``n`` counts bits per trajectory; the gamma scale uses ``n - L`` windows.
    """
    rep = simulate(GeneratorSpec.fair_coin(n), L, trials, seed, workers)
    x = np.sort(rep.samples)
    m = len(x)
    header = ["x", "empirical_cdf", "gamma_cdf"]
    rows = [[v, (i + 1) / m, cdf(v, rep.params)] for i, v in enumerate(x)]
    return header, rows, rep


def figure_calibration(L=1, n_grid=(25, 50, 75, 100, 150, 200, 300, 400), trials=1000,
                       seed=0, workers=1):
    """KS distance per n, with the distances that give p-values 5%, 1%, 0.1%."""
    header = ["n", "ks_stat", "ks_pvalue", "d05", "d01", "d001"]
    rows = []
    for n, d, pv, _ in calibration_curve(L, n_grid, trials, seed, workers):
        lines = [KOLMOGOROV_QUANTILES[a] / math.sqrt(trials) for a in (0.05, 0.01, 0.001)]
        rows.append([n, d, pv, *lines])
    return header, rows

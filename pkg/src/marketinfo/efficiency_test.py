"""Test of the null "every prefix is followed by an up-move with probability 1/2"."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .asymptotic import GammaParams, critical_value, gamma_params, survival
from .errors import UnobservedPrefixError
from .information import InformationEstimate, estimate_information
from .symbolic import gray_pattern

LEVELS = (0.95, 0.99, 0.999)
SMALL_SAMPLE = 100


@dataclass(frozen=True)
class TestResult:
    estimate: InformationEstimate
    params: GammaParams
    p_value: float
    reject_95: bool
    reject_99: bool
    reject_999: bool
    small_sample_warning: bool

    __test__ = False  # keep pytest from collecting this class

    def critical_values(self, levels=LEVELS) -> dict:
        return {lvl: critical_value(1 - lvl, self.params) for lvl in levels}


def rejects(p_value: float, level: float) -> bool:
    return p_value < 1 - level


def test_from_estimate(estimate: InformationEstimate) -> TestResult:
    unseen = np.flatnonzero(estimate.p_hat == 0)
    if unseen.size:
        i = int(unseen[0]) + 1
        raise UnobservedPrefixError(gray_pattern(estimate.L, i).bits, i)
    params = gamma_params(estimate.L, estimate.N)
    p_value = survival(estimate.info, params)
    return TestResult(
        estimate=estimate,
        params=params,
        p_value=p_value,
        reject_95=rejects(p_value, 0.95),
        reject_99=rejects(p_value, 0.99),
        reject_999=rejects(p_value, 0.999),
        small_sample_warning=estimate.N < SMALL_SAMPLE,
    )


def test_efficiency(bits, L: int) -> TestResult:
    """Estimate the market information and score it against the gamma null.

    Raises :class:`UnobservedPrefixError` when some prefix never occurs, since
    the null law assumes every prefix has positive probability.
    """
    return test_from_estimate(estimate_information(bits, L))


test_efficiency.__test__ = False
test_from_estimate.__test__ = False

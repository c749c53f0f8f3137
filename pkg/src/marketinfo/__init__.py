"""Market information of binary price-move sequences and a test of weak-form efficiency."""

from .asymptotic import (
    BoundParams,
    GammaParams,
    critical_value,
    error_bound,
    gamma_params,
    lah_number,
    survival,
)
from .efficiency_test import TestResult, test_efficiency
from .errors import (
    BudgetExceededError,
    CsvFormatError,
    EmptyTableError,
    InconsistentProbabilitiesError,
    InputTooShortError,
    MarketInfoError,
    UnobservedPrefixError,
)
from .exact_dist import ConditionalSetup, ExactPmf, enumerate_pmf, mean_exact, mgf_exact, moment_exact
from .information import (
    InformationEstimate,
    entropy_full,
    entropy_star,
    estimate_information,
    market_information,
    shannon_entropy,
)
from .montecarlo import GeneratorSpec, SimulationReport, calibration_curve, ks_pvalue, ks_statistic, simulate
from .pipeline import RollingConfig, RollingRow, run_roll
from .symbolic import (
    PatternTable,
    PriceSeries,
    count_patterns,
    empirical_probs,
    encode_returns,
    gray_index,
    gray_pattern,
    read_price_csv,
)

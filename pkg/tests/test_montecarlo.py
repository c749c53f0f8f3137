import math

import numpy as np
import pytest
from scipy import stats

from marketinfo.asymptotic import gamma_params
from marketinfo.exact_dist import ConditionalSetup, mean_exact
from marketinfo.montecarlo import (
    GeneratorSpec,
    calibration_curve,
    gamma_quantile_samples,
    ks_pvalue,
    ks_statistic,
    simulate,
    trial_rng,
)
from marketinfo.asymptotic import critical_value

SEED = 0


def test_generator_canonical_forms():
    n = 50
    fair = GeneratorSpec.fair_coin(n)
    assert GeneratorSpec.biased_coin(0.5, n).canonical() == fair
    assert GeneratorSpec.markov(0.5, 0.5, n).canonical() == fair
    assert GeneratorSpec.markov(0.3, 0.3, n).canonical() == GeneratorSpec.biased_coin(0.3, n)
    a = GeneratorSpec.markov(0.5, 0.5, n).sample(trial_rng(7, 3))
    b = fair.sample(trial_rng(7, 3))
    assert a.tolist() == b.tolist()


def test_generator_validation():
    with pytest.raises(ValueError):
        GeneratorSpec.biased_coin(1.2, 10)
    with pytest.raises(ValueError):
        GeneratorSpec("random", 10)


def test_markov_transition_frequencies():
    bits = GeneratorSpec.markov(0.2, 0.9, 200_000).sample(trial_rng(1, 0))
    prev, nxt = bits[:-1], bits[1:]
    assert nxt[prev == 0].mean() == pytest.approx(0.2, abs=0.01)
    assert nxt[prev == 1].mean() == pytest.approx(0.9, abs=0.01)


def test_degenerate_generator_counts_unobserved():
    rep = simulate(GeneratorSpec.biased_coin(1.0, 100), 1, trials=20, seed=SEED)
    assert rep.unobserved == 20
    assert rep.samples.size == 0


def test_report_shape():
    rep = simulate(GeneratorSpec.fair_coin(100), 1, trials=50, seed=SEED)
    assert rep.samples.size == rep.trials == 50
    assert np.all(rep.samples >= 0)
    assert 0 <= rep.ks_statistic <= 1
    assert rep.params == gamma_params(1, 99)


def test_simulation_is_deterministic_across_workers():
    spec = GeneratorSpec.markov(0.4, 0.6, 120)
    a = simulate(spec, 1, trials=40, seed=11, workers=1)
    b = simulate(spec, 1, trials=40, seed=11, workers=3)
    assert a.infos.tobytes() == b.infos.tobytes()
    assert a.p_values.tobytes() == b.p_values.tobytes()
    assert a.ks_statistic == b.ks_statistic


def test_ks_statistic_quantile_grid():
    g = gamma_params(2, 500)
    m = 200
    grid = [critical_value(1 - (i - 0.5) / m, g) for i in range(1, m + 1)]
    assert ks_statistic(grid, g) == pytest.approx(1 / (2 * m), abs=1e-9)


def test_ks_statistic_matches_scipy():
    g = gamma_params(1, 80)
    x = np.random.default_rng(5).gamma(1.0, g.scale, 300)
    ref = stats.kstest(x, stats.gamma(g.shape, scale=g.scale).cdf).statistic
    assert ks_statistic(x, g) == pytest.approx(ref, abs=1e-12)


def test_ks_statistic_pile_up_at_zero():
    assert ks_statistic(np.zeros(10), gamma_params(1, 100)) == 1.0


def test_ks_statistic_empty():
    with pytest.raises(ValueError):
        ks_statistic([], gamma_params(1, 10))


def test_ks_on_gamma_draws():
    g = gamma_params(1, 100)
    x = gamma_quantile_samples(1000, g, seed=SEED)
    d = ks_statistic(x, g)
    assert d < 1.358 / math.sqrt(1000)
    assert ks_pvalue(d, 1000) > 0.05


@pytest.mark.parametrize("z, expected", [(1.358, 0.05), (1.949, 0.001)])
def test_ks_pvalue_quantiles(z, expected):
    m = 1000
    assert ks_pvalue(z / math.sqrt(m), m) == pytest.approx(expected, rel=0.01)


@pytest.mark.parametrize("z", [0.05, 0.3, 0.8, 1.2, 2.5])
def test_ks_pvalue_matches_kolmogorov_law(z):
    assert ks_pvalue(z / 10, 100) == pytest.approx(stats.kstwobign.sf(z), abs=1e-10)


def test_ks_pvalue_at_zero():
    assert ks_pvalue(0.0, 10) == 1.0


def test_calibration_grid_with_empty_prefixes():
    (row,) = calibration_curve(2, [10], trials=200, seed=SEED)
    assert row[0] == 10 and row[3] > 0


def test_calibration_single_point_matches_simulate():
    (row,) = calibration_curve(1, [60], trials=100, seed=4)
    rep = simulate(GeneratorSpec.fair_coin(60), 1, 100, 4)
    assert row == (60, rep.ks_statistic, rep.ks_pvalue, rep.unobserved)


def test_calibration_curve_validity_from_100():
    rows = calibration_curve(1, [25, 50, 100, 200, 400], trials=1000, seed=SEED)
    by_n = {n: pv for n, _, pv, _ in rows}
    assert by_n[25] < 0.05
    assert all(by_n[n] > 0.05 for n in (100, 200, 400))


def test_mean_agrees_with_exact_mean():
    rep = simulate(GeneratorSpec.fair_coin(128), 1, trials=1000, seed=SEED)
    se = rep.samples.std(ddof=1) / math.sqrt(rep.samples.size)
    exact = mean_exact(ConditionalSetup([64, 64]))
    assert abs(rep.samples.mean() - exact) < 3 * se


def test_markov_power_exceeds_size():
    size = simulate(GeneratorSpec.fair_coin(100), 1, 1000, SEED).rejection_rates[0.95]
    power = simulate(GeneratorSpec.markov(0.3, 0.7, 100), 1, 1000, SEED).rejection_rates[0.95]
    assert power > size

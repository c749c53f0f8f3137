import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from marketinfo.asymptotic import critical_value, gamma_params, survival
from marketinfo.efficiency_test import test_efficiency as run_test
from marketinfo.errors import InputTooShortError, UnobservedPrefixError


def test_balanced_suffixes_do_not_reject():
    bits = [(k // 2) % 2 for k in range(101)]
    res = run_test(bits, 1)
    assert res.estimate.info == 0.0
    assert res.p_value == 1.0
    assert not (res.reject_95 or res.reject_99 or res.reject_999)


def test_alternating_rejects_everywhere():
    res = run_test([k % 2 for k in range(101)], 1)
    assert res.estimate.N == 100
    assert res.p_value == pytest.approx(math.exp(-math.log(2) * 100), rel=1e-12)
    assert res.p_value == pytest.approx(7.9e-31, rel=0.01)
    assert res.reject_95 and res.reject_99 and res.reject_999
    assert not res.small_sample_warning


def test_small_sample_warning_threshold():
    bits = np.random.default_rng(1).integers(0, 2, 100)
    assert run_test(bits, 1).small_sample_warning  # N = 99
    bits = np.random.default_rng(1).integers(0, 2, 101)
    assert not run_test(bits, 1).small_sample_warning


def test_unobserved_prefix_names_pattern():
    with pytest.raises(UnobservedPrefixError) as exc:
        run_test([0, 0, 0, 0, 1], 2)
    assert exc.value.pattern in {(0, 1), (1, 1), (1, 0)}
    assert "".join(map(str, exc.value.pattern)) in str(exc.value)


def test_too_short():
    with pytest.raises(InputTooShortError):
        run_test([1], 1)


@given(st.lists(st.integers(0, 1), min_size=30, max_size=300), st.integers(1, 2))
def test_flags_consistent(bits, L):
    try:
        res = run_test(bits, L)
    except UnobservedPrefixError:
        return
    assert res.p_value == survival(res.estimate.info, res.params)
    assert (not res.reject_999 or res.reject_99) and (not res.reject_99 or res.reject_95)
    crit = critical_value(0.05, res.params)
    if res.estimate.info > crit * (1 + 1e-12):
        assert res.reject_95
    if res.estimate.info < crit * (1 - 1e-12):
        assert not res.reject_95


def test_p_value_decreasing_in_information():
    g = gamma_params(1, 100)
    xs = np.linspace(0, 0.2, 50)
    ps = [survival(x, g) for x in xs]
    assert all(a > b for a, b in zip(ps, ps[1:]))

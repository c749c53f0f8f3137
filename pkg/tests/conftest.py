import datetime as dt

import numpy as np
import pytest

ACCEPTANCE_LINES = []


def write_price_csv(path, prices, start=dt.date(2021, 1, 4)):
    with open(path, "w") as fh:
        fh.write("date,price\n")
        for i, p in enumerate(prices):
            fh.write(f"{start + dt.timedelta(days=i)},{float(p)!r}\n")
    return path


def alternating_prices(n):
    return [100.0 + (i % 2) for i in range(n)]


def random_walk_prices(n, seed):
    steps = np.random.default_rng(seed).normal(0.0, 0.01, n - 1)
    return list(100.0 * np.exp(np.concatenate([[0.0], np.cumsum(steps)])))


@pytest.fixture
def price_csv(tmp_path):
    def make(prices, name="prices.csv"):
        return str(write_price_csv(tmp_path / name, prices))

    return make


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

"""Binary encoding of price moves and counting of Gray-indexed patterns.

Patterns of length ``L`` are indexed 1..2**L following the reflected binary
Gray code, so index 1 is the all-zeros pattern and neighbouring indices
differ in one bit. Arrays indexed by pattern use position ``index - 1``.

For reference, the ordering printed for L=3 in the source material is
(0,0,0), (0,0,1), (0,1,1), (0,1,0), (1,1,0), (1,0,0), (1,0,1), (1,1,1); it is
also a Gray path but differs from the reflected code in its last four entries.
Every downstream quantity sums over all patterns, so the choice is cosmetic.
"""

from __future__ import annotations

import csv
import datetime as dt
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CsvFormatError, EmptyTableError, InputTooShortError

MAX_L = 16


def _check_L(L: int) -> int:
    if isinstance(L, bool) or int(L) != L or not 1 <= L <= MAX_L:
        raise ValueError(f"pattern length L must be an integer in [1, {MAX_L}], got {L!r}")
    return int(L)


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PriceSeries:
    """Timestamped strictly positive prices, ascending in time."""

    timestamps: tuple
    prices: np.ndarray

    def __init__(self, timestamps: Sequence, prices: Sequence[float]):
        prices = _frozen(prices, float)
        timestamps = tuple(timestamps)
        if prices.ndim != 1:
            raise ValueError("prices must be one-dimensional")
        if len(timestamps) != len(prices):
            raise ValueError("timestamps and prices differ in length")
        if len(prices) < 2:
            raise InputTooShortError("at least two prices are needed to form a return")
        if not np.all(np.isfinite(prices)) or np.any(prices <= 0):
            raise ValueError("prices must be finite and strictly positive")
        for a, b in zip(timestamps, timestamps[1:]):
            if not a < b:
                raise ValueError(f"timestamps must be strictly increasing ({a} >= {b})")
        object.__setattr__(self, "timestamps", timestamps)
        object.__setattr__(self, "prices", prices)

    def __len__(self):
        return len(self.prices)


@dataclass(frozen=True)
class Pattern:
    L: int
    bits: tuple
    index: int


@dataclass(frozen=True, eq=False)
class PatternTable:
    """Prefix counts and suffix-one counts of the overlapping (L+1)-grams.

    ``prefix_counts[i - 1]`` counts windows whose first ``L`` bits are the Gray
    pattern with index ``i``; ``suffix_one_counts[i - 1]`` counts how many of
    those windows end with a 1.
    """

    L: int
    N: int
    prefix_counts: np.ndarray
    suffix_one_counts: np.ndarray


def encode_returns(series) -> np.ndarray:
    """Map consecutive prices to increase indicators.

    A bit is 1 only for a strictly positive price change; ties map to 0.
    ``series`` may be a :class:`PriceSeries` or any sequence of prices.
    """
    prices = np.asarray(getattr(series, "prices", series), dtype=float)
    if prices.ndim != 1 or len(prices) < 2:
        raise InputTooShortError("at least two prices are needed to form a return")
    return (np.diff(prices) > 0).astype(np.int8)


def _as_bits(bits) -> np.ndarray:
    if isinstance(bits, str):
        bits = [int(c) for c in bits.strip()]
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if arr.size and not np.all((arr == 0) | (arr == 1)):
        raise ValueError("bit sequence may only contain 0 and 1")
    return arr.astype(np.int64)


def gray_code(L: int) -> np.ndarray:
    """Integer codes (MSB first) of all Gray patterns, in index order."""
    L = _check_L(L)
    b = np.arange(2 ** L, dtype=np.int64)
    return b ^ (b >> 1)


def _inverse_gray(codes: np.ndarray, L: int) -> np.ndarray:
    out = codes.copy()
    shift = 1
    while shift < L:
        out ^= out >> shift
        shift <<= 1
    return out


def gray_pattern(L: int, index: int) -> Pattern:
    L = _check_L(L)
    if int(index) != index or not 1 <= index <= 2 ** L:
        raise ValueError(f"index must be in [1, {2 ** L}], got {index!r}")
    b = int(index) - 1
    g = b ^ (b >> 1)
    bits = tuple((g >> (L - 1 - k)) & 1 for k in range(L))
    return Pattern(L=L, bits=bits, index=int(index))


def gray_index(pattern) -> int:
    """Position in [1, 2**L] of a pattern given as a Pattern or a bit tuple."""
    bits = getattr(pattern, "bits", pattern)
    bits = tuple(int(b) for b in bits)
    if not bits or any(b not in (0, 1) for b in bits):
        raise ValueError("pattern must be a nonempty tuple of 0/1 values")
    L = _check_L(len(bits))
    g = 0
    for b in bits:
        g = (g << 1) | b
    return int(_inverse_gray(np.array([g]), L)[0]) + 1


def count_patterns(bits, L: int) -> PatternTable:
    """Slide a window of length L+1 (step 1) and tally prefixes and suffixes."""
    L = _check_L(L)
    x = _as_bits(bits)
    if len(x) <= L:
        raise InputTooShortError(
            f"need more than L={L} bits to form an (L+1)-gram, got {len(x)}"
        )
    N = len(x) - L
    code = np.zeros(N, dtype=np.int64)
    for k in range(L):
        code = (code << 1) | x[k : k + N]
    pos = _inverse_gray(code, L)
    suffix = x[L : L + N]
    prefix_counts = np.bincount(pos, minlength=2 ** L)
    suffix_one_counts = np.bincount(pos, weights=suffix, minlength=2 ** L).astype(np.int64)
    return PatternTable(
        L=L,
        N=N,
        prefix_counts=_frozen(prefix_counts, np.int64),
        suffix_one_counts=_frozen(suffix_one_counts, np.int64),
    )


def empirical_probs(table: PatternTable) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(p_hat, pi_hat)``; ``pi_hat`` is NaN for unobserved prefixes."""
    if table.N < 1:
        raise EmptyTableError("pattern table holds no windows")
    n = np.asarray(table.prefix_counts, dtype=float)
    ones = np.asarray(table.suffix_one_counts, dtype=float)
    p_hat = n / table.N
    pi_hat = np.full_like(n, np.nan)
    seen = n > 0
    pi_hat[seen] = ones[seen] / n[seen]
    return p_hat, pi_hat


def read_price_csv(lines: Iterable[str]) -> PriceSeries:
    """Parse ``date,price`` CSV text (ISO dates, ascending).

    Row numbers in errors count the header as row 1.
    """
    reader = csv.reader(lines)
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError(1, "empty input, expected header 'date,price'") from None
    if [h.strip().lower() for h in header] != ["date", "price"]:
        raise CsvFormatError(1, f"expected header 'date,price', got {','.join(header)!r}")
    dates, prices = [], []
    for row_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 2:
            raise CsvFormatError(row_no, f"expected 2 fields, got {len(row)}")
        try:
            d = dt.date.fromisoformat(row[0].strip())
        except ValueError:
            raise CsvFormatError(row_no, f"bad ISO-8601 date {row[0]!r}") from None
        try:
            price = float(row[1])
        except ValueError:
            raise CsvFormatError(row_no, f"bad price {row[1]!r}") from None
        if not np.isfinite(price) or price <= 0:
            raise CsvFormatError(row_no, f"price must be positive, got {row[1]!r}")
        if dates and d <= dates[-1]:
            raise CsvFormatError(row_no, f"date {d} is not after {dates[-1]}")
        dates.append(d)
        prices.append(price)
    if len(prices) < 2:
        raise InputTooShortError("CSV holds fewer than two prices")
    return PriceSeries(dates, prices)

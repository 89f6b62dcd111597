"""Published reference values the repro command and tests compare against.

Counts are stored as (mantissa, exponent10) exactly as printed at three
significant figures; logs are natural logs as printed to two decimals.
Tolerances encode that rounding: a 3-figure count is trusted to 2%
ratio, a 2-decimal log difference to 0.02 nats, a 2-decimal exact log
to 0.01 nats.
"""

from __future__ import annotations

import math
from typing import NamedTuple

__all__ = [
    "Table1Row",
    "Table2Row",
    "Table3Row",
    "TABLE1",
    "TABLE2",
    "TABLE3",
    "TOLERANCES",
    "published_ln",
]

TOLERANCES = {
    # |ln(computed) - ln(published)| bound for 3-figure counts
    "count_ratio": math.log(1.02),
    # window around published 2-decimal logs and log-differences
    "ln_delta": 0.02,
    # window around published 2-decimal exact logs checked by oracle
    "exact_ln": 0.01,
}


def published_ln(count: tuple[float, int]) -> float:
    """Natural log of a printed count given as (mantissa, exponent10)."""
    mantissa, exp10 = count
    return math.log(mantissa) + exp10 * math.log(10.0)


class Table1Row(NamedTuple):
    m: int
    n: int
    mean: float
    exact: tuple[float, int]
    edgeworth: tuple[float, int]
    excluded: bool


class Table2Row(NamedTuple):
    n: int
    d: int
    ln_exact: float
    err: float
    estimated_only: bool


class Table3Row(NamedTuple):
    degrees: tuple[int, ...]
    ln_exact: float
    ln_gauss: float
    ln_edgeworth: float


# equal-margin tables: rows_i = n * mean, cols_j = m * mean
TABLE1: tuple[Table1Row, ...] = (
    Table1Row(10, 10, 2.0, (1.10, 59), (1.12, 59), False),
    Table1Row(3, 3, 100.0 / 3.0, (1.33, 7), (1.23, 7), False),
    # long thin and dense: flagged by diagnostics, excluded from pass/fail
    Table1Row(3, 49, 49.0 / 3.0, (1.01, 68), (4.04, 147), True),
    Table1Row(3, 9, 11.0, (2.79, 21), (2.84, 21), False),
    Table1Row(18, 18, 13.0 / 18.0, (7.95, 127), (8.05, 127), False),
    Table1Row(30, 30, 0.1, (2.23, 59), (2.23, 59), False),
)

# d-regular graphs on n vertices; err is ln_edgeworth - ln_exact as printed
TABLE2: tuple[Table2Row, ...] = (
    Table2Row(8, 3, 9.87, 0.06, False),
    Table2Row(9, 4, 13.84, 0.04, False),
    Table2Row(10, 3, 16.23, 0.10, False),
    Table2Row(10, 4, 18.01, 0.04, False),
    Table2Row(11, 4, 22.37, 0.05, False),
    Table2Row(12, 3, 23.17, 0.14, False),
    Table2Row(12, 4, 26.90, 0.06, False),
    Table2Row(12, 5, 28.72, 0.03, False),
    Table2Row(13, 4, 31.58, 0.08, False),
    Table2Row(13, 6, 35.28, 0.03, False),
    Table2Row(14, 3, 30.60, 0.18, False),
    Table2Row(14, 4, 36.42, 0.09, False),
    Table2Row(14, 5, 40.18, 0.04, False),
    Table2Row(14, 6, 42.04, 0.03, False),
    Table2Row(15, 4, 41.39, 0.10, False),
    Table2Row(15, 6, 48.98, 0.03, False),
    Table2Row(16, 3, 38.46, 0.20, False),
    Table2Row(16, 4, 46.49, 0.11, False),
    Table2Row(16, 5, 52.31, 0.06, False),
    Table2Row(16, 6, 56.11, 0.03, False),
    Table2Row(17, 4, 51.71, 0.12, False),
    # starred rows: the printed log is itself an estimate, reference only
    Table2Row(17, 6, 63.41, math.nan, True),
    Table2Row(18, 3, 46.68, 0.23, False),
    Table2Row(18, 4, 57.05, 0.13, False),
    Table2Row(18, 5, 65.04, 0.08, False),
    Table2Row(18, 6, 70.88, math.nan, True),
)

TABLE3: tuple[Table3Row, ...] = (
    Table3Row((4, 4, 4, 4, 3, 3, 3, 3), 9.59, 10.22, 9.64),
    Table3Row((6, 6, 6, 6, 6, 6, 5, 5, 5, 5, 5, 5), 28.45, 29.03, 28.46),
    # as printed: seven 7s and seven 4s (degree total 77 is odd)
    Table3Row((7, 7, 7, 7, 7, 7, 7, 4, 4, 4, 4, 4, 4, 4), 24.21, 24.83, 24.33),
)

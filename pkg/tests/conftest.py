"""Shared fixtures: brute-force counters and the acceptance summary hook.

The brute-force counters here are deliberately naive and share no code
with the package oracles; they exist so the DP oracles are themselves
validated against something independent.
"""

from __future__ import annotations

import re

import numpy as np
import pytest


def brute_force_tables(rows, cols) -> int:
    """Enumerate every non-negative integer table with the given margins."""
    rows = [int(v) for v in rows]
    cols = [int(v) for v in cols]
    if sum(rows) != sum(cols):
        return 0

    def compositions(total, caps):
        if len(caps) == 1:
            if total <= caps[0]:
                yield (total,)
            return
        for x in range(min(total, caps[0]) + 1):
            for rest in compositions(total - x, caps[1:]):
                yield (x,) + rest

    def rec(j, cols_left):
        if j == len(rows):
            return 1 if all(c == 0 for c in cols_left) else 0
        total = 0
        for cells in compositions(rows[j], cols_left):
            total += rec(j + 1, tuple(c - x for c, x in zip(cols_left, cells)))
        return total

    return rec(0, tuple(cols))


def brute_force_graphs(degrees) -> int:
    """Enumerate every labeled simple graph by edge bitmask (n <= 6)."""
    deg = [int(v) for v in degrees]
    n = len(deg)
    assert n <= 6, "bitmask enumeration is only meant for tiny n"
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    count = 0
    for mask in range(1 << len(edges)):
        seen = [0] * n
        for t, (i, j) in enumerate(edges):
            if mask >> t & 1:
                seen[i] += 1
                seen[j] += 1
        if seen == deg:
            count += 1
    return count


def random_margin_spec(rng: np.random.Generator, m: int, n: int):
    """Feasible positive integer margins, sampled by building a table."""
    cells = rng.integers(1, 6, size=(m, n))
    return cells.sum(axis=1).astype(float), cells.sum(axis=0).astype(float)


def random_degree_sequence(rng: np.random.Generator, n: int, p: float = 0.5):
    """Degree sequence of a sampled labeled graph (always realizable)."""
    adj = (rng.random((n, n)) < p).astype(int)
    adj = np.triu(adj, 1)
    adj = adj + adj.T
    return adj.sum(axis=1).astype(float)


# ---------------------------------------------------------------------------
# acceptance summary: one aggregated pass/fail line per criterion

_CRITERION = re.compile(r"test_criterion(\d+)")
_results: dict[int, list[tuple[str, bool]]] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    match = _CRITERION.search(report.nodeid)
    if match:
        _results.setdefault(int(match.group(1)), []).append(
            (report.nodeid, report.passed)
        )


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for key in sorted(_results):
        checks = _results[key]
        passed = sum(1 for _, ok in checks if ok)
        status = "PASS" if passed == len(checks) else "FAIL"
        terminalreporter.write_line(
            f"criterion {key}: {status} ({passed}/{len(checks)} checks)"
        )
        if status == "FAIL":
            for nodeid, ok in checks:
                if not ok:
                    terminalreporter.write_line(f"  failed: {nodeid.rsplit('::', 1)[-1]}")

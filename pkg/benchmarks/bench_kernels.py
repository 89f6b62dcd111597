"""Benchmark the compiled pair-sum kernel against the pure NumPy path.

Builds regular-graph instances of growing size, times kappa3 through
both kernels (best of 5), and checks they agree.  Run as

    python3 benchmarks/bench_kernels.py
"""

from __future__ import annotations

import time

import numpy as np

from entropy_count import (
    DegreeSpec,
    build_graph_covariance,
    edge_pair_covariances,
    fit_graph,
    graph_edge_coefficients,
)
from entropy_count.kernels import BACKEND, pair_cubic_sum, pair_cubic_sum_py


def best_of(func, repeats: int = 5) -> tuple[float, float]:
    best = float("inf")
    value = None
    for _ in range(repeats):
        start = time.perf_counter()
        value = func()
        best = min(best, time.perf_counter() - start)
    return value, best


def main() -> None:
    print(f"active backend: {BACKEND}")
    header = f"{'n':>4} {'edges':>6} {'compiled_ms':>12} {'pure_ms':>10} {'speedup':>8} {'rel_diff':>10}"
    print(header)
    for n in (12, 24, 48, 96):
        fit = fit_graph(DegreeSpec(degrees=np.full(n, n // 3.0)))
        model = build_graph_covariance(fit)
        coeffs = graph_edge_coefficients(fit)
        pair = edge_pair_covariances(model)
        b = np.ascontiguousarray(coeffs.b)
        args = (b, pair.sigma2, pair.i1, pair.i2, pair.w_pad)
        fast, t_fast = best_of(lambda: pair_cubic_sum(*args))
        slow, t_slow = best_of(lambda: pair_cubic_sum_py(*args))
        rel = abs(fast - slow) / max(abs(slow), 1e-300)
        print(
            f"{n:>4} {n * (n - 1) // 2:>6} {t_fast * 1e3:>12.3f} {t_slow * 1e3:>10.3f} "
            f"{t_slow / t_fast:>8.1f} {rel:>10.2e}"
        )


if __name__ == "__main__":
    main()

"""Kernel dispatch: compiled extension when built, pure NumPy otherwise.

`BACKEND` records which implementation is live; both are importable
directly for the cross-checks in the test suite and the benchmark.
"""

from __future__ import annotations

from . import _kernels_py

pair_cubic_sum_py = _kernels_py.pair_cubic_sum

try:
    from . import _speedups

    pair_cubic_sum = _speedups.pair_cubic_sum
    BACKEND = "compiled"
except ImportError:  # pragma: no cover - depends on the build environment
    pair_cubic_sum = pair_cubic_sum_py
    BACKEND = "pure"

__all__ = ["pair_cubic_sum", "pair_cubic_sum_py", "BACKEND"]

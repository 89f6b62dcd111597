"""Independent oracles the estimates are validated against.

Three routes, sharing nothing with the estimator:

* exact_count_tables / exact_count_graphs: memoized DP over residual
  margin multisets, exact integers.

* charfn_quadrature_table: ln P{S = 0} by trapezoid quadrature of the
  characteristic function for d = m + n - 1 <= 3; combined with the
  entropy this checks ln # without any Gaussian step.

* mc_gaussian_moments: plain Monte Carlo of the kappa3 / kappa4
  definitions under t ~ N(0, V^{-1}), cross-checking the Wick pair sums.

The DP oracles honor a state budget (default 1e7, override with the
ENTROPY_COUNT_BUDGET environment variable) and raise BudgetExceeded
rather than hang.
"""

from __future__ import annotations

import itertools
import math
import os
from collections import Counter
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import (
    BudgetExceeded,
    DimensionTooLarge,
    InfeasibleMargins,
    NotPositiveDefinite,
)
from .maxent import GeometricFit
from .moments import CovarianceModel, EdgeCoefficients

__all__ = [
    "ExactCount",
    "MCEstimate",
    "exact_count_tables",
    "exact_count_graphs",
    "charfn_quadrature_table",
    "mc_gaussian_moments",
    "DEFAULT_STATE_BUDGET",
]

DEFAULT_STATE_BUDGET = 10_000_000


def _state_budget() -> int:
    raw = os.environ.get("ENTROPY_COUNT_BUDGET")
    if raw is None:
        return DEFAULT_STATE_BUDGET
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"ENTROPY_COUNT_BUDGET must be an integer, got {raw!r}") from exc
    if value <= 0:
        raise ValueError("ENTROPY_COUNT_BUDGET must be positive")
    return value


@dataclass(frozen=True)
class ExactCount:
    """An exact non-negative integer count and its log."""

    value: int
    ln_value: float
    instance: str


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo kappa estimates with standard errors."""

    kappa3_hat: float
    kappa4_hat: float
    se3: float
    se4: float
    samples: int
    seed: int


def _exact(value: int, instance: str) -> ExactCount:
    ln = math.log(value) if value > 0 else -math.inf
    return ExactCount(value=value, ln_value=ln, instance=instance)


def _as_int_vector(values, name: str) -> list[int]:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InfeasibleMargins(f"{name} must be a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)) or np.any(arr != np.round(arr)):
        raise InfeasibleMargins(f"exact counting needs integer {name}")
    if np.any(arr < 0):
        raise InfeasibleMargins(f"{name} must be non-negative")
    return [int(round(v)) for v in arr]


# ---------------------------------------------------------------------------
# exact table counts


def _bounded_partitions(total: int, parts: int, cap: int):
    """Non-increasing tuples of length `parts`, entries <= cap, summing to total."""
    if total == 0:
        yield (0,) * parts
        return
    if parts == 0 or total > parts * cap:
        return
    # first entry p >= ceil(total/parts) keeps the tuple non-increasing
    for p in range(min(total, cap), (total - 1) // parts, -1):
        for rest in _bounded_partitions(total - p, parts - 1, p):
            yield (p,) + rest


def _arrangements(part: tuple[int, ...]) -> int:
    mult = math.factorial(len(part))
    for count in Counter(part).values():
        mult //= math.factorial(count)
    return mult


def exact_count_tables(rows, cols) -> ExactCount:
    """Exact number of non-negative integer tables with the given margins.

    Column-by-column DP keyed by the sorted multiset of residual row sums;
    within a column the amounts given to equal residuals are enumerated as
    partitions and weighted by their arrangement count, which collapses the
    row-permutation symmetry the multiset key introduces.
    """
    r = _as_int_vector(rows, "rows")
    c = _as_int_vector(cols, "cols")
    if sum(r) != sum(c):
        raise InfeasibleMargins(f"sum(rows) = {sum(r)} != sum(cols) = {sum(c)}")
    budget = _state_budget()
    cols_sorted = sorted(c, reverse=True)
    memo: dict = {}
    steps = 0

    def allocations(resid: tuple[int, ...], target: int):
        groups = [(val, len(list(grp))) for val, grp in itertools.groupby(resid)]
        suffix_cap = [0] * (len(groups) + 1)
        for gi in range(len(groups) - 1, -1, -1):
            val, cnt = groups[gi]
            suffix_cap[gi] = suffix_cap[gi + 1] + val * cnt

        def rec(gi: int, remaining: int, acc: list):
            if remaining > suffix_cap[gi]:
                return
            if gi == len(groups):
                if remaining == 0:
                    yield acc
                return
            val, cnt = groups[gi]
            for sub in range(min(remaining, val * cnt), -1, -1):
                for part in _bounded_partitions(sub, cnt, val):
                    yield from rec(gi + 1, remaining - sub, acc + [(val, part)])

        for acc in rec(0, target, []):
            mult = 1
            new = []
            for val, part in acc:
                mult *= _arrangements(part)
                new.extend(val - x for x in part)
            yield mult, tuple(sorted(new, reverse=True))

    def count(k: int, resid: tuple[int, ...]) -> int:
        nonlocal steps
        if k == len(cols_sorted):
            return 1
        key = (k, resid)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = 0
        for mult, new_resid in allocations(resid, cols_sorted[k]):
            steps += 1
            if steps > budget:
                raise BudgetExceeded(
                    f"table oracle exceeded the {budget} step budget "
                    "(set ENTROPY_COUNT_BUDGET to raise it)"
                )
            total += mult * count(k + 1, new_resid)
        if len(memo) >= budget:
            raise BudgetExceeded(
                f"table oracle exceeded the {budget} memo-state budget "
                "(set ENTROPY_COUNT_BUDGET to raise it)"
            )
        memo[key] = total
        return total

    value = count(0, tuple(sorted(r, reverse=True)))
    return _exact(value, f"table rows={r} cols={c}")


# ---------------------------------------------------------------------------
# exact graph counts


def _erdos_gallai_ok(state: tuple[int, ...]) -> bool:
    # state sorted non-increasing, even sum assumed
    n = len(state)
    prefix = 0
    for k in range(1, n + 1):
        prefix += state[k - 1]
        tail = sum(min(state[i], k) for i in range(k, n))
        if prefix > k * (k - 1) + tail:
            return False
    return True


def exact_count_graphs(degrees) -> ExactCount:
    """Exact number of labeled simple graphs with the given degree sequence.

    DP pivoting on the largest residual degree: connect the pivot to a
    choice of k_v vertices inside each residual-value group, weight by the
    product of binomials, and recurse on the sorted residual multiset.
    """
    deg = _as_int_vector(degrees, "degrees")
    n = len(deg)
    if any(v > n - 1 for v in deg):
        raise InfeasibleMargins("degrees must lie in [0, n-1]")
    if sum(deg) % 2 == 1:
        return _exact(0, f"graph degrees={deg}")
    budget = _state_budget()
    memo: dict = {}
    steps = 0

    def count(state: tuple[int, ...]) -> int:
        nonlocal steps
        if not state:
            return 1
        hit = memo.get(state)
        if hit is not None:
            return hit
        if not _erdos_gallai_ok(state):
            memo[state] = 0
            return 0
        pivot = state[0]
        rest = state[1:]
        groups = [(val, len(list(grp))) for val, grp in itertools.groupby(rest)]
        total = 0

        def rec(gi: int, remaining: int, ways: int, picks: list):
            nonlocal total, steps
            if remaining == 0:
                steps += 1
                if steps > budget:
                    raise BudgetExceeded(
                        f"graph oracle exceeded the {budget} step budget "
                        "(set ENTROPY_COUNT_BUDGET to raise it)"
                    )
                new = []
                for (val, cnt), k in zip(groups, picks + [0] * (len(groups) - len(picks))):
                    new.extend([val] * (cnt - k))
                    new.extend([val - 1] * k)
                total += ways * count(tuple(sorted((v for v in new if v > 0), reverse=True)))
                return
            if gi == len(groups):
                return
            val, cnt = groups[gi]
            for k in range(min(cnt, remaining), -1, -1):
                rec(gi + 1, remaining - k, ways * math.comb(cnt, k), picks + [k])

        if pivot <= len(rest):
            rec(0, pivot, 1, [])
        if len(memo) >= budget:
            raise BudgetExceeded(
                f"graph oracle exceeded the {budget} memo-state budget "
                "(set ENTROPY_COUNT_BUDGET to raise it)"
            )
        memo[state] = total
        return total

    start = tuple(sorted((v for v in deg if v > 0), reverse=True))
    return _exact(count(start), f"graph degrees={deg}")


# ---------------------------------------------------------------------------
# characteristic-function quadrature


def _psi_geometric(mu: float, theta: np.ndarray) -> np.ndarray:
    # E e^{i theta (X - mu)} for X geometric with mean mu; NOT 2pi-periodic
    # because of the centering factor, so always evaluate at the summed
    # angle rather than indexing a periodic table.
    return np.exp(-1j * mu * theta) / (1.0 - mu * (np.exp(1j * theta) - 1.0))


def charfn_quadrature_table(fit: GeometricFit, *, grid: int = 256) -> float:
    """ln P{S = 0} for a fitted table by d-dimensional trapezoid quadrature.

    Restricted to d = m + n - 1 <= 3; the product over cells separates
    across the row angle, so the cost is grid^(n-1) times a vectorized
    row integral.  Raises if the integral keeps a non-negligible
    imaginary part, which would mean the grid is too coarse.
    """
    mu = fit.mu
    m, n = mu.shape
    d = m + n - 1
    if d > 3:
        raise DimensionTooLarge(f"quadrature oracle is limited to d <= 3, got d = {d}")
    if grid < 64:
        raise ValueError("need grid >= 64")
    npts = int(grid)
    theta = -math.pi + 2.0 * math.pi * np.arange(npts) / npts

    if n == 1:
        val = 1.0 + 0.0j
        for j in range(m):
            val *= np.mean(_psi_geometric(float(mu[j, 0]), theta))
    else:
        total = 0.0 + 0.0j
        seen = 0
        chunk = 2048
        indices = itertools.product(range(npts), repeat=n - 1)
        while True:
            block = list(itertools.islice(indices, chunk))
            if not block:
                break
            w = theta[np.asarray(block)]  # (B, n-1)
            prod_rows = np.ones(w.shape[0], dtype=complex)
            for j in range(m):
                row = np.ones((w.shape[0], npts), dtype=complex)
                for k in range(n - 1):
                    row *= _psi_geometric(float(mu[j, k]), w[:, k : k + 1] + theta[None, :])
                row *= _psi_geometric(float(mu[j, n - 1]), theta)[None, :]
                prod_rows *= row.mean(axis=1)
            total += prod_rows.sum()
            seen += w.shape[0]
        val = total / seen

    if abs(val.imag) > 1e-8:
        raise ArithmeticError(
            f"quadrature kept imaginary part {val.imag:.3e}; increase the grid"
        )
    return float(np.log(val.real))


# ---------------------------------------------------------------------------
# Monte Carlo moments


def mc_gaussian_moments(
    model: CovarianceModel,
    coeffs: EdgeCoefficients,
    *,
    samples: int,
    seed: int,
) -> MCEstimate:
    """Monte Carlo check of kappa3 and kappa4 straight from the definitions.

    Draws t ~ N(0, V^{-1}) via L^{-T} z with V = L L', then averages
    (sum_e b_e t_e^3)^2 and sum_e a_e t_e^4.  Deterministic for a fixed
    seed: Philox stream, fixed batch layout, fixed reduction order.
    """
    if samples < 2:
        raise ValueError("need samples >= 2")
    try:
        chol = np.linalg.cholesky(model.V)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("margin covariance is not positive definite") from exc
    d = model.d
    i1 = model.incidence[:, 0]
    i2 = np.where(model.incidence[:, 1] < 0, d, model.incidence[:, 1])
    b = np.asarray(coeffs.b, dtype=float)[:, None]
    a = np.asarray(coeffs.a, dtype=float)[:, None]
    rng = np.random.Generator(np.random.Philox(seed))

    sum3 = sum4 = sq3 = sq4 = 0.0
    done = 0
    batch = 1 << 14
    while done < samples:
        take = min(batch, samples - done)
        z = rng.standard_normal((d, take))
        t = solve_triangular(chol, z, lower=True, trans="T")
        t_pad = np.vstack([t, np.zeros((1, take))])
        t_e = t_pad[i1] + t_pad[i2]
        t2 = t_e * t_e
        v3 = np.sum(b * (t2 * t_e), axis=0) ** 2
        v4 = np.sum(a * (t2 * t2), axis=0)
        sum3 += float(np.sum(v3))
        sum4 += float(np.sum(v4))
        sq3 += float(np.sum(v3 * v3))
        sq4 += float(np.sum(v4 * v4))
        done += take

    mean3 = sum3 / samples
    mean4 = sum4 / samples
    var3 = max(0.0, (sq3 - samples * mean3 * mean3) / (samples - 1))
    var4 = max(0.0, (sq4 - samples * mean4 * mean4) / (samples - 1))
    return MCEstimate(
        kappa3_hat=mean3,
        kappa4_hat=mean4,
        se3=math.sqrt(var3 / samples),
        se4=math.sqrt(var4 / samples),
        samples=samples,
        seed=seed,
    )

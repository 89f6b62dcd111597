"""Maximum-entropy margin fitting.

Tables: the margin-constrained maximum-entropy distribution on
non-negative integer cells is a product of independent geometrics with
cell expectations mu_jk tied to dual parameters by

    log(1 + 1/mu_jk) = alpha_j + beta_k,
    sum_k mu_jk = r_j,   sum_j mu_jk = c_k.

Graphs: independent Bernoulli edges with

    log(mu_ij / (1 - mu_ij)) = alpha_i + alpha_j,
    sum_{j != i} mu_ij = d_i.

Both duals are smooth and strictly convex (up to the table gauge
direction (alpha + c, beta - c)), so damped Newton converges
quadratically; a coordinate-bisection fallback covers ill-conditioned
starts.  The fitted mu is unique either way.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve
from scipy.special import expit

from .errors import InfeasibleMargins, MaxEntBoundary, NoConvergence

__all__ = [
    "MarginSpec",
    "DegreeSpec",
    "GeometricFit",
    "BernoulliFit",
    "fit_table",
    "fit_graph",
    "entropy_table",
    "entropy_graph",
]

# Dual parameters past this magnitude (or mu outside these brackets) are
# treated as divergence to the boundary of the model.
ALPHA_CAP = 40.0
MU_TABLE_BRACKET = (1e-12, 1e12)
MU_GRAPH_BRACKET = (1e-12, 1.0 - 1e-12)


@dataclass(frozen=True)
class MarginSpec:
    """Target row sums and column sums of a table instance."""

    rows: np.ndarray
    cols: np.ndarray

    def __post_init__(self) -> None:
        rows = np.array(self.rows, dtype=float)
        cols = np.array(self.cols, dtype=float)
        if rows.ndim != 1 or cols.ndim != 1 or rows.size < 1 or cols.size < 1:
            raise InfeasibleMargins("rows and cols must be non-empty 1-d vectors")
        if not (np.all(np.isfinite(rows)) and np.all(np.isfinite(cols))):
            raise InfeasibleMargins("margins must be finite")
        if np.any(rows <= 0.0) or np.any(cols <= 0.0):
            raise InfeasibleMargins("margins must be strictly positive")
        total = float(rows.sum())
        if abs(total - float(cols.sum())) > 1e-9 * total:
            raise InfeasibleMargins(
                f"sum(rows) = {total:g} does not match sum(cols) = {float(cols.sum()):g}"
            )
        rows.setflags(write=False)
        cols.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)

    @property
    def m(self) -> int:
        return self.rows.size

    @property
    def n(self) -> int:
        return self.cols.size

    @property
    def total(self) -> float:
        return float(self.rows.sum())


@dataclass(frozen=True)
class DegreeSpec:
    """Target degree sequence of a graph instance."""

    degrees: np.ndarray

    def __post_init__(self) -> None:
        deg = np.array(self.degrees, dtype=float)
        if deg.ndim != 1:
            raise InfeasibleMargins("degrees must be a 1-d vector")
        if deg.size < 3:
            # the degree covariance is singular for n <= 2
            raise InfeasibleMargins("need at least 3 vertices")
        if not np.all(np.isfinite(deg)):
            raise InfeasibleMargins("degrees must be finite")
        if np.any(deg < 0.0) or np.any(deg > deg.size - 1.0):
            raise InfeasibleMargins("degrees must lie in [0, n-1]")
        deg.setflags(write=False)
        object.__setattr__(self, "degrees", deg)

    @property
    def n(self) -> int:
        return self.degrees.size


@dataclass(frozen=True)
class GeometricFit:
    """Fitted table dual parameters, cell expectations, and entropy."""

    alpha: np.ndarray
    beta: np.ndarray
    mu: np.ndarray
    entropy: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class BernoulliFit:
    """Fitted graph dual parameters on the peeled core.

    Vertices with degree 0 or degree n-1 are forced (no free edges touch a
    degree-0 vertex; a degree-(n-1) vertex neighbors everyone), so the count
    on the original sequence equals the count on the core exactly.
    ``core_index`` holds the original indices of the surviving vertices.
    """

    alpha: np.ndarray
    mu: np.ndarray
    entropy: float
    iterations: int
    residual: float
    core_degrees: np.ndarray
    core_index: np.ndarray
    n_original: int


def _xlogx(t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    pos = t > 0.0
    out[pos] = t[pos] * np.log(t[pos])
    return out


def _entropy_table_mu(mu: np.ndarray) -> float:
    # I(P) = sum (1+mu) log(1+mu) - mu log mu, in nats
    return float(np.sum((1.0 + mu) * np.log1p(mu) - mu * np.log(mu)))


def _entropy_graph_mu(mu: np.ndarray) -> float:
    iu = np.triu_indices(mu.shape[0], 1)
    p = mu[iu]
    return -float(np.sum(_xlogx(p) + _xlogx(1.0 - p))) + 0.0


def entropy_table(fit: GeometricFit) -> float:
    """I(P) of the fitted geometric product distribution (always >= 0)."""
    return _entropy_table_mu(fit.mu)


def entropy_graph(fit: BernoulliFit) -> float:
    """I(P) of the fitted Bernoulli edge distribution on the core."""
    return _entropy_graph_mu(fit.mu)


# ---------------------------------------------------------------------------
# tables


def _mu_table(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    # mu = 1 / (exp(alpha_j + beta_k) - 1), valid on alpha_j + beta_k > 0
    return 1.0 / np.expm1(alpha[:, None] + beta[None, :])


def _margin_residual(mu: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> float:
    r = np.max(np.abs(mu.sum(axis=1) - rows))
    c = np.max(np.abs(mu.sum(axis=0) - cols))
    return float(max(r, c))


def _table_dual(alpha: np.ndarray, beta: np.ndarray, rows: np.ndarray, cols: np.ndarray) -> float:
    s = alpha[:, None] + beta[None, :]
    if s.min() <= 0.0:
        return np.inf
    # F = sum -log(1 - e^{-s}) + alpha.r + beta.c, strictly convex in the
    # direction complement of (1_m, -1_n)
    val = -np.sum(np.log(-np.expm1(-s)))
    return float(val + alpha @ rows + beta @ cols)


def _table_init(rows: np.ndarray, cols: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # additive least-squares projection of log(1 + 1/mu_independence)
    total = rows.sum()
    x = np.log1p(total / np.outer(rows, cols))
    grand = x.mean()
    alpha = x.mean(axis=1) - 0.5 * grand
    beta = x.mean(axis=0) - 0.5 * grand
    if (alpha[:, None] + beta[None, :]).min() <= 0.0:
        flat = np.log1p(rows.size * cols.size / total)
        alpha = np.full(rows.size, 0.5 * flat)
        beta = np.full(cols.size, 0.5 * flat)
    return alpha, beta


def _row_margin(y: float, offsets: np.ndarray) -> float:
    with np.errstate(divide="ignore", over="ignore"):
        return float(np.sum(1.0 / np.expm1(y + offsets)))


def _bisect_dual_table(target: float, offsets: np.ndarray) -> float:
    # sum_k 1/(e^{y+off_k} - 1) is strictly decreasing on y > -min(offsets)
    lo = -float(np.min(offsets))
    hi = lo + 1.0
    while _row_margin(hi, offsets) > target and hi - lo < 1e6:
        hi = lo + 2.0 * (hi - lo)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if _row_margin(mid, offsets) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_table(spec: MarginSpec, *, tol: float = 1e-10, max_iter: int = 200) -> GeometricFit:
    """Fit the geometric maximum-entropy table model for the given margins.

    Damped Newton on the convex dual; falls back to coordinate-wise
    bisection sweeps if Newton stalls.  The result is independent of the
    starting point (unique mu) and gauge-fixed to mean(beta) = 0.
    """
    rows, cols = spec.rows, spec.cols
    m, n = spec.m, spec.n
    alpha, beta = _table_init(rows, cols)
    iterations = 0

    fcur = _table_dual(alpha, beta, rows, cols)
    while iterations < max_iter:
        mu = _mu_table(alpha, beta)
        if _margin_residual(mu, rows, cols) <= tol:
            break
        lam = mu * (1.0 + mu)
        grad = np.concatenate([rows - mu.sum(axis=1), cols - mu.sum(axis=0)])
        hess = np.zeros((m + n, m + n))
        hess[np.arange(m), np.arange(m)] = lam.sum(axis=1)
        hess[np.arange(m, m + n), np.arange(m, m + n)] = lam.sum(axis=0)
        hess[:m, m:] = lam
        hess[m:, :m] = lam.T
        # rank-1 gauge regularizer; the gradient is orthogonal to the null
        # direction q = (1_m, -1_n) so the step is unbiased
        q = np.concatenate([np.ones(m), -np.ones(n)])
        eps = 1e-8 * np.mean(np.diagonal(hess))
        hess += eps * np.outer(q, q)
        try:
            step = -cho_solve(cho_factor(hess, lower=True), grad)
        except np.linalg.LinAlgError:
            break
        t, improved = 1.0, False
        for _ in range(60):
            cand_a = alpha + t * step[:m]
            cand_b = beta + t * step[m:]
            fnew = _table_dual(cand_a, cand_b, rows, cols)
            if fnew < fcur:
                improved = True
                break
            t *= 0.5
        if not improved:
            break
        alpha, beta, fcur = cand_a, cand_b, fnew
        iterations += 1

    mu = _mu_table(alpha, beta)
    if _margin_residual(mu, rows, cols) > tol:
        # coordinate fallback: exact one-dimensional solves, unconditionally
        # stable because each margin equation is monotone in its parameter
        for _ in range(max_iter):
            for j in range(m):
                alpha[j] = _bisect_dual_table(rows[j], beta)
            for k in range(n):
                beta[k] = _bisect_dual_table(cols[k], alpha)
            iterations += 1
            mu = _mu_table(alpha, beta)
            if _margin_residual(mu, rows, cols) <= tol:
                break
        else:
            raise NoConvergence(
                f"table dual residual {_margin_residual(mu, rows, cols):.3e} "
                f"exceeds tol={tol:g} after {iterations} iterations"
            )
        mu = _mu_table(alpha, beta)

    if not np.all(np.isfinite(mu)) or mu.min() < MU_TABLE_BRACKET[0] or mu.max() > MU_TABLE_BRACKET[1]:
        raise MaxEntBoundary("fitted cell expectations left the admissible bracket")

    # gauge: mean(beta) = 0, then rebuild mu so the dual identity holds
    # to roundoff in the reported parameters
    shift = float(beta.mean())
    alpha = alpha + shift
    beta = beta - shift
    mu = _mu_table(alpha, beta)
    alpha.setflags(write=False)
    beta.setflags(write=False)
    mu.setflags(write=False)
    return GeometricFit(
        alpha=alpha,
        beta=beta,
        mu=mu,
        entropy=_entropy_table_mu(mu),
        iterations=iterations,
        residual=_margin_residual(mu, rows, cols),
    )


# ---------------------------------------------------------------------------
# graphs


def _peel(degrees: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Iteratively strip forced vertices (degree 0 and degree n-1).

    Returns the residual core degrees and their original indices; raises
    MaxEntBoundary when peeling exposes a contradiction.
    """
    deg = degrees.astype(float).copy()
    idx = np.arange(deg.size)
    while deg.size:
        if np.any(deg < 0.0):
            raise MaxEntBoundary("peeling exposed a negative residual degree")
        nonzero = deg > 0.0
        if not np.all(nonzero):
            deg, idx = deg[nonzero], idx[nonzero]
            continue
        n = deg.size
        if np.any(deg > n - 1.0):
            raise MaxEntBoundary("peeling exposed a degree above n-1")
        full = np.nonzero(deg == n - 1.0)[0]
        if full.size == 0:
            break
        # one full vertex per round (lowest index) keeps the order fixed
        i = full[0]
        deg = np.delete(deg, i) - 1.0
        idx = np.delete(idx, i)
    return deg, idx


def _mu_graph(alpha: np.ndarray) -> np.ndarray:
    mu = expit(alpha[:, None] + alpha[None, :])
    np.fill_diagonal(mu, 0.0)
    return mu


def _graph_dual(alpha: np.ndarray, deg: np.ndarray) -> float:
    s = alpha[:, None] + alpha[None, :]
    off = np.sum(np.logaddexp(0.0, s)) - np.sum(np.logaddexp(0.0, 2.0 * alpha))
    return float(0.5 * off - alpha @ deg)


def _degree_margin(y: float, others: np.ndarray) -> float:
    return float(np.sum(expit(y + others)))


def _bisect_dual_graph(target: float, others: np.ndarray) -> float:
    lo, hi = -ALPHA_CAP, ALPHA_CAP
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if _degree_margin(mid, others) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_graph(spec: DegreeSpec, *, tol: float = 1e-10, max_iter: int = 200) -> BernoulliFit:
    """Fit the Bernoulli maximum-entropy graph model on the peeled core."""
    core_deg, core_idx = _peel(spec.degrees)
    n0 = spec.n
    if core_deg.size == 0:
        empty = np.zeros(0)
        return BernoulliFit(
            alpha=empty,
            mu=np.zeros((0, 0)),
            entropy=0.0,
            iterations=0,
            residual=0.0,
            core_degrees=empty,
            core_index=core_idx,
            n_original=n0,
        )

    n = core_deg.size
    alpha = np.log(core_deg / (n - 1.0) / (1.0 - core_deg / (n - 1.0))) * 0.5
    iterations = 0
    fcur = _graph_dual(alpha, core_deg)
    while iterations < max_iter:
        if np.max(np.abs(alpha)) > ALPHA_CAP:
            raise MaxEntBoundary("graph dual parameters diverged")
        mu = _mu_graph(alpha)
        if float(np.max(np.abs(mu.sum(axis=1) - core_deg))) <= tol:
            break
        v = mu * (1.0 - mu)
        np.fill_diagonal(v, 0.0)
        hess = v.copy()
        hess[np.arange(n), np.arange(n)] = v.sum(axis=1)
        grad = mu.sum(axis=1) - core_deg
        try:
            step = -cho_solve(cho_factor(hess, lower=True), grad)
        except np.linalg.LinAlgError:
            break
        t, improved = 1.0, False
        for _ in range(60):
            cand = alpha + t * step
            fnew = _graph_dual(cand, core_deg)
            if fnew < fcur:
                improved = True
                break
            t *= 0.5
        if not improved:
            break
        alpha, fcur = cand, fnew
        iterations += 1

    mu = _mu_graph(alpha)
    if float(np.max(np.abs(mu.sum(axis=1) - core_deg))) > tol:
        for _ in range(max_iter):
            for i in range(n):
                others = np.delete(alpha, i)
                alpha[i] = _bisect_dual_graph(core_deg[i], others)
            iterations += 1
            mu = _mu_graph(alpha)
            if float(np.max(np.abs(mu.sum(axis=1) - core_deg))) <= tol:
                break
        else:
            if np.max(np.abs(alpha)) > ALPHA_CAP - 1e-3:
                raise MaxEntBoundary("graph dual parameters diverged")
            raise NoConvergence(
                f"graph dual residual {float(np.max(np.abs(mu.sum(axis=1) - core_deg))):.3e} "
                f"exceeds tol={tol:g} after {iterations} iterations"
            )

    if np.max(np.abs(alpha)) > ALPHA_CAP:
        raise MaxEntBoundary("graph dual parameters diverged")
    off = mu[np.triu_indices(n, 1)]
    if off.size and (off.min() < MU_GRAPH_BRACKET[0] or off.max() > MU_GRAPH_BRACKET[1]):
        raise MaxEntBoundary("fitted edge probabilities left the open interval (0, 1)")

    alpha = alpha.copy()
    alpha.setflags(write=False)
    mu.setflags(write=False)
    core_deg.setflags(write=False)
    core_idx.setflags(write=False)
    return BernoulliFit(
        alpha=alpha,
        mu=mu,
        entropy=_entropy_graph_mu(mu),
        iterations=iterations,
        residual=float(np.max(np.abs(mu.sum(axis=1) - core_deg))),
        core_degrees=core_deg,
        core_index=core_idx,
        n_original=n0,
    )

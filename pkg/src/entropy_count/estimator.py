"""Count estimates.

The number of witnesses with the prescribed margins is

    #instances = P{S = 0} * e^{I(P)}

exactly, where S is the centered margin-sum vector under the fitted
product model and I(P) its entropy.  The Gaussian local limit gives

    ln #  ~=  lattice_log_det + I(P) - (d/2) ln 2pi - (1/2) ln det V,

and the fourth-order correction subtracts kappa3/72 and adds kappa4/24.
The lattice factor is ln 2 for graphs (degree sums move in steps of 2)
and 0 for tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import moments
from .maxent import DegreeSpec, MarginSpec, fit_graph, fit_table

__all__ = [
    "CountReport",
    "estimate_table",
    "estimate_graph",
    "closed_form_table_report",
    "gaussian_only",
    "validity_diagnostics",
]

LN_2PI = math.log(2.0 * math.pi)
LN_2 = math.log(2.0)
LN_10 = math.log(10.0)


@dataclass(frozen=True)
class CountReport:
    """Everything the estimate is built from, plus the two estimates.

    Invariant:  ln_gauss == lattice_log_det + entropy - d/2 * ln(2 pi)
    - log_det_V / 2  and  ln_edgeworth == ln_gauss - kappa3/72 + kappa4/24,
    evaluated on the stored fields in exactly that arithmetic.
    """

    model: str
    d: int
    entropy: float
    log_det_V: float
    kappa3: float
    kappa4: float
    lattice_log_det: float
    ln_gauss: float
    ln_edgeworth: float
    diagnostics: tuple[str, ...]
    ln_exact: float | None = None
    exact_value: int | None = None

    @property
    def log10_gauss(self) -> float:
        return self.ln_gauss / LN_10

    @property
    def log10_edgeworth(self) -> float:
        return self.ln_edgeworth / LN_10

    def with_exact(self, value: int) -> "CountReport":
        ln = math.log(value) if value > 0 else -math.inf
        return replace(self, ln_exact=ln, exact_value=value)


def _assemble(model: str, d: int, entropy: float, log_det_v: float, k3: float,
              k4: float, lattice: float, diagnostics: tuple[str, ...]) -> CountReport:
    ln_gauss = lattice + entropy - 0.5 * d * LN_2PI - 0.5 * log_det_v
    ln_edgeworth = ln_gauss - k3 / 72.0 + k4 / 24.0
    return CountReport(
        model=model,
        d=d,
        entropy=entropy,
        log_det_V=log_det_v,
        kappa3=k3,
        kappa4=k4,
        lattice_log_det=lattice,
        ln_gauss=ln_gauss,
        ln_edgeworth=ln_edgeworth,
        diagnostics=diagnostics,
    )


def estimate_table(spec: MarginSpec, *, tol: float = 1e-10, max_iter: int = 200) -> CountReport:
    """Gaussian and Edgeworth estimates of the table count for `spec`."""
    fit = fit_table(spec, tol=tol, max_iter=max_iter)
    model = moments.build_table_covariance(fit)
    coeffs = moments.table_edge_coefficients(fit)
    pair = moments.edge_pair_covariances(model)
    return _assemble(
        "table",
        model.d,
        fit.entropy,
        moments.log_det(model),
        moments.kappa3(coeffs, pair),
        moments.kappa4(coeffs, pair),
        0.0,
        validity_diagnostics(spec, fit=fit),
    )


def estimate_graph(spec: DegreeSpec, *, tol: float = 1e-10, max_iter: int = 200) -> CountReport:
    """Gaussian and Edgeworth estimates of the labeled-graph count.

    Integer sequences with odd total degree have no realization; the
    report then carries ln = -inf and an explaining diagnostic.  A core
    emptied by peeling means the sequence forces a unique graph.
    """
    deg = spec.degrees
    integral = bool(np.all(deg == np.round(deg)))
    if integral and int(round(float(deg.sum()))) % 2 == 1:
        return CountReport(
            model="graph",
            d=spec.n,
            entropy=0.0,
            log_det_V=0.0,
            kappa3=0.0,
            kappa4=0.0,
            lattice_log_det=LN_2,
            ln_gauss=-math.inf,
            ln_edgeworth=-math.inf,
            diagnostics=("degree total is odd: no graph realizes this sequence, exact count 0",),
            ln_exact=-math.inf,
            exact_value=0,
        )

    fit = fit_graph(spec, tol=tol, max_iter=max_iter)
    diags = validity_diagnostics(spec, fit=fit)
    if fit.core_index.size < spec.n:
        removed = spec.n - fit.core_index.size
        diags = diags + (
            f"peeled {removed} forced vertex(es) with degree 0 or n-1; "
            "the count on the core equals the original count",
        )
    if fit.mu.size == 0:
        # fully forced sequence: exactly one graph
        return CountReport(
            model="graph",
            d=0,
            entropy=0.0,
            log_det_V=0.0,
            kappa3=0.0,
            kappa4=0.0,
            lattice_log_det=0.0,
            ln_gauss=0.0,
            ln_edgeworth=0.0,
            diagnostics=diags + ("peeling removed every vertex: the sequence forces a unique graph",),
            ln_exact=0.0,
            exact_value=1,
        )
    model = moments.build_graph_covariance(fit)
    coeffs = moments.graph_edge_coefficients(fit)
    pair = moments.edge_pair_covariances(model)
    return _assemble(
        "graph",
        model.d,
        fit.entropy,
        moments.log_det(model),
        moments.kappa3(coeffs, pair),
        moments.kappa4(coeffs, pair),
        LN_2,
        diags,
    )


def closed_form_table_report(m: int, n: int, mu: float) -> CountReport:
    """Equal-margin table estimate assembled from the closed-form cumulants.

    Must agree with estimate_table on rows = n mu, cols = m mu to solver
    precision; the generic path is never bypassed, this is the cross-check.
    """
    summary = moments.closed_form_equal_margins(m, n, mu)
    cell = (1.0 + mu) * math.log1p(mu) - mu * math.log(mu)
    spec = MarginSpec(rows=np.full(m, n * mu), cols=np.full(n, m * mu))
    return _assemble(
        "table",
        summary.d,
        m * n * cell,
        summary.log_det_V,
        summary.kappa3,
        summary.kappa4,
        0.0,
        validity_diagnostics(spec, mu_range=(mu, mu)),
    )


def gaussian_only(report: CountReport) -> float:
    """The uncorrected Gaussian estimate of ln #."""
    return report.ln_gauss


def _table_diagnostics(spec: MarginSpec, mu_range: tuple[float, float] | None) -> tuple[str, ...]:
    warns: list[str] = []
    m, n = spec.m, spec.n
    shape = max(m / n, n / m)
    if shape > 3.0:
        warns.append(
            f"heuristic: aspect ratio {shape:.3g} > 3; the local limit degrades for long thin tables"
        )
    rows, cols = spec.rows, spec.cols
    spread = max(float(rows.max() / rows.min()), float(cols.max() / cols.min()))
    if spread > 3.0:
        warns.append(
            f"heuristic: margin spread {spread:.3g} > 3; strongly uneven margins weaken the estimate"
        )
    dense = (1.0 + n / float(rows.max())) * (1.0 + m / float(cols.max())) / (
        1.0 + m * n / spec.total
    )
    if dense < 1.05:
        warns.append(
            f"heuristic: density ratio {dense:.4g} < 1.05; the table is dense enough that the "
            "correction terms are unreliable"
        )
    if mu_range is not None:
        lo, hi = mu_range
        if lo < 0.05 or hi > 20.0:
            warns.append(
                f"heuristic: cell expectations span [{lo:.3g}, {hi:.3g}] outside [0.05, 20]"
            )
    if not (np.all(rows == np.round(rows)) and np.all(cols == np.round(cols))):
        warns.append("margins are not integers; only the real-valued relaxation is being counted")
    return tuple(warns)


def _graph_diagnostics(spec: DegreeSpec, mu_range: tuple[float, float] | None) -> tuple[str, ...]:
    warns: list[str] = []
    deg = spec.degrees
    pos = deg[deg > 0]
    if pos.size and float(pos.max() / pos.min()) > 3.0:
        warns.append(
            f"heuristic: degree spread {float(pos.max() / pos.min()):.3g} > 3; strongly uneven "
            "degrees weaken the estimate"
        )
    if mu_range is not None:
        lo, hi = mu_range
        if lo < 0.05 or hi > 0.95:
            warns.append(
                f"heuristic: edge probabilities span [{lo:.3g}, {hi:.3g}] outside [0.05, 0.95]"
            )
    if not np.all(deg == np.round(deg)):
        warns.append("degrees are not integers; only the real-valued relaxation is being counted")
    return tuple(warns)


def validity_diagnostics(spec, *, fit=None, mu_range=None) -> tuple[str, ...]:
    """Heuristic applicability warnings for an instance.

    All thresholds are rules of thumb, not error bounds; an empty tuple
    means none of them fired, not that the estimate is certified.
    """
    if fit is not None and mu_range is None and fit.mu.size:
        if spec.__class__ is MarginSpec:
            mu_range = (float(fit.mu.min()), float(fit.mu.max()))
        else:
            off = fit.mu[np.triu_indices(fit.mu.shape[0], 1)]
            if off.size:
                mu_range = (float(off.min()), float(off.max()))
    if isinstance(spec, MarginSpec):
        return _table_diagnostics(spec, mu_range)
    if isinstance(spec, DegreeSpec):
        return _graph_diagnostics(spec, mu_range)
    raise TypeError(f"expected MarginSpec or DegreeSpec, got {type(spec).__name__}")

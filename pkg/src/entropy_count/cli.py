"""Command-line front end.

Subcommands: `count` (estimate one instance, optionally with the exact
oracle), `oracle` (exact count only), `diag` (validity diagnostics plus
an optional Monte Carlo cumulant cross-check), `repro` (recompute the
published benchmark tables and compare).

Exit codes: 0 success, 1 usage error, 2 infeasible instance, 3 solver
failure, 4 repro mismatch, 5 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import estimator, moments, oracle, refdata
from .errors import (
    BudgetExceeded,
    InfeasibleMargins,
    MaxEntBoundary,
    NoConvergence,
    NotPositiveDefinite,
    SingularCovariance,
)
from .kernels import BACKEND
from .maxent import DegreeSpec, MarginSpec, fit_graph, fit_table

__all__ = ["main", "cmd_count", "cmd_oracle", "cmd_diag", "cmd_repro"]

LN_10 = math.log(10.0)


class _UsageError(Exception):
    """Bad flag combination or malformed instance file (exit 1)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract says 1
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def _vector(text: str) -> tuple[float, ...]:
    try:
        values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated number list: {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("empty number list")
    return values


def _round6(x: float | None) -> float | None:
    if x is None or not math.isfinite(x):
        return None
    return float(f"{x:.6g}")


def _fmt(x: float | None) -> str:
    if x is None:
        return "-"
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return f"{x:.6g}"


def count_string(ln: float) -> str:
    """Render exp(ln) as the 3-significant-figure form X.XXeNN."""
    if ln == -math.inf:
        return "0"
    if not math.isfinite(ln):
        return "nan"
    exp10 = math.floor(ln / LN_10)
    mantissa = round(math.exp(ln - exp10 * LN_10), 2)
    if mantissa >= 10.0:
        mantissa /= 10.0
        exp10 += 1
    return f"{mantissa:.2f}e{exp10}"


def _emit_json(doc: dict) -> None:
    print(json.dumps(doc, sort_keys=True, separators=(",", ":")))


# ---------------------------------------------------------------------------
# instance parsing


def _load_instance_file(path: str) -> tuple[object, dict]:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise _UsageError("instance file must hold a JSON object")
    options = doc.get("options", {})
    if not isinstance(options, dict):
        raise _UsageError("'options' must be a JSON object")
    has_table = "rows" in doc or "cols" in doc
    has_graph = "degrees" in doc
    if has_table == has_graph:
        raise _UsageError("instance file needs either rows+cols or degrees, not both")
    if has_table:
        if "rows" not in doc or "cols" not in doc:
            raise _UsageError("table instance needs both rows and cols")
        return MarginSpec(rows=np.asarray(doc["rows"], float), cols=np.asarray(doc["cols"], float)), options
    return DegreeSpec(degrees=np.asarray(doc["degrees"], float)), options


def _instance_from_args(args) -> tuple[object, dict]:
    sources = sum([args.input is not None, args.rows is not None or args.cols is not None,
                   args.degrees is not None])
    if sources != 1:
        raise _UsageError("give exactly one of --input, --rows/--cols, or --degrees")
    if args.input is not None:
        return _load_instance_file(args.input)
    if args.degrees is not None:
        return DegreeSpec(degrees=np.asarray(args.degrees, float)), {}
    if args.rows is None or args.cols is None:
        raise _UsageError("--rows and --cols must be given together")
    return MarginSpec(rows=np.asarray(args.rows, float), cols=np.asarray(args.cols, float)), {}


def _solver_opts(args, options: dict) -> dict:
    tol = args.tol if args.tol is not None else options.get("tol", 1e-10)
    max_iter = args.max_iter if args.max_iter is not None else options.get("max_iter", 200)
    return {"tol": float(tol), "max_iter": int(max_iter)}


def _run_oracle(spec) -> oracle.ExactCount:
    if isinstance(spec, MarginSpec):
        return oracle.exact_count_tables(spec.rows, spec.cols)
    return oracle.exact_count_graphs(spec.degrees)


# ---------------------------------------------------------------------------
# count


def _report_doc(report: estimator.CountReport) -> dict:
    doc = {
        "model": report.model,
        "backend": BACKEND,
        "d": report.d,
        "entropy": _round6(report.entropy),
        "log_det_V": _round6(report.log_det_V),
        "kappa3": _round6(report.kappa3),
        "kappa4": _round6(report.kappa4),
        "lattice_log_det": _round6(report.lattice_log_det),
        "ln_gauss": _round6(report.ln_gauss),
        "ln_edgeworth": _round6(report.ln_edgeworth),
        "log10_gauss": _round6(report.log10_gauss),
        "log10_edgeworth": _round6(report.log10_edgeworth),
        "count_gauss": count_string(report.ln_gauss),
        "count_edgeworth": count_string(report.ln_edgeworth),
        "diagnostics": list(report.diagnostics),
    }
    if report.exact_value is not None:
        doc["exact_value"] = report.exact_value
        doc["ln_exact"] = _round6(report.ln_exact)
        if report.ln_exact is not None and math.isfinite(report.ln_exact) and math.isfinite(report.ln_edgeworth):
            doc["error_edgeworth"] = _round6(report.ln_edgeworth - report.ln_exact)
    return doc


def _print_report(report: estimator.CountReport) -> None:
    print(f"model            {report.model}")
    print(f"backend          {BACKEND}")
    print(f"d                {report.d}")
    print(f"entropy          {_fmt(report.entropy)}")
    print(f"log_det_V        {_fmt(report.log_det_V)}")
    print(f"kappa3           {_fmt(report.kappa3)}")
    print(f"kappa4           {_fmt(report.kappa4)}")
    print(f"lattice_log_det  {_fmt(report.lattice_log_det)}")
    print(f"ln_gauss         {_fmt(report.ln_gauss)}  (log10 {_fmt(report.log10_gauss)})")
    print(f"ln_edgeworth     {_fmt(report.ln_edgeworth)}  (log10 {_fmt(report.log10_edgeworth)})")
    print(f"count_gauss      {count_string(report.ln_gauss)}")
    print(f"count_edgeworth  {count_string(report.ln_edgeworth)}")
    if report.exact_value is not None:
        print(f"exact            {report.exact_value}  (ln {_fmt(report.ln_exact)})")
        if report.ln_exact is not None and math.isfinite(report.ln_exact) and math.isfinite(report.ln_edgeworth):
            print(f"error_edgeworth  {_fmt(report.ln_edgeworth - report.ln_exact)}")
    for diag in report.diagnostics:
        print(f"  - {diag}")


def cmd_count(args) -> int:
    spec, options = _instance_from_args(args)
    opts = _solver_opts(args, options)
    if isinstance(spec, MarginSpec):
        report = estimator.estimate_table(spec, **opts)
    else:
        report = estimator.estimate_graph(spec, **opts)
    if (args.exact or options.get("oracle", False)) and report.exact_value is None:
        report = report.with_exact(_run_oracle(spec).value)
    if args.json:
        _emit_json(_report_doc(report))
    else:
        _print_report(report)
    return 0


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args) -> int:
    spec, _ = _instance_from_args(args)
    result = _run_oracle(spec)
    if args.json:
        _emit_json({
            "instance": result.instance,
            "count": result.value,
            "ln": _round6(result.ln_value),
        })
    else:
        print(f"instance  {result.instance}")
        print(f"count     {result.value}")
        print(f"ln        {_fmt(result.ln_value)}")
    return 0


# ---------------------------------------------------------------------------
# diag


def cmd_diag(args) -> int:
    spec, options = _instance_from_args(args)
    opts = _solver_opts(args, options)
    if isinstance(spec, MarginSpec):
        fit = fit_table(spec, **opts)
        model = moments.build_table_covariance(fit)
        coeffs = moments.table_edge_coefficients(fit)
    else:
        fit = fit_graph(spec, **opts)
        model = None
        if fit.mu.size:
            model = moments.build_graph_covariance(fit)
            coeffs = moments.graph_edge_coefficients(fit)
    warnings = estimator.validity_diagnostics(spec, fit=fit)
    doc = {"warnings": list(warnings), "iterations": fit.iterations,
           "residual": _round6(fit.residual)}

    samples = args.mc_samples if args.mc_samples is not None else options.get("mc_samples")
    if samples is not None and model is not None:
        seed = args.seed if args.seed is not None else options.get("seed", 0)
        pair = moments.edge_pair_covariances(model)
        k3 = moments.kappa3(coeffs, pair)
        k4 = moments.kappa4(coeffs, pair)
        mc = oracle.mc_gaussian_moments(model, coeffs, samples=int(samples), seed=int(seed))
        doc["mc"] = {
            "kappa3": _round6(k3),
            "kappa3_hat": _round6(mc.kappa3_hat),
            "se3": _round6(mc.se3),
            "kappa4": _round6(k4),
            "kappa4_hat": _round6(mc.kappa4_hat),
            "se4": _round6(mc.se4),
            "samples": mc.samples,
            "seed": mc.seed,
        }

    if args.json:
        _emit_json(doc)
    else:
        print(f"iterations  {fit.iterations}")
        print(f"residual    {_fmt(fit.residual)}")
        if warnings:
            for warning in warnings:
                print(f"  - {warning}")
        else:
            print("no warnings")
        if "mc" in doc:
            mc_doc = doc["mc"]
            print(f"kappa3      {mc_doc['kappa3']}  mc {mc_doc['kappa3_hat']} +- {mc_doc['se3']}")
            print(f"kappa4      {mc_doc['kappa4']}  mc {mc_doc['kappa4_hat']} +- {mc_doc['se4']}")
    return 0


# ---------------------------------------------------------------------------
# repro


def _repro_table1() -> tuple[list[dict], bool]:
    rows = []
    all_ok = True
    for row in refdata.TABLE1:
        spec = MarginSpec(rows=np.full(row.m, row.n * row.mean),
                          cols=np.full(row.n, row.m * row.mean))
        rep = estimator.estimate_table(spec)
        closed = estimator.closed_form_table_report(row.m, row.n, row.mean)
        pub = refdata.published_ln(row.edgeworth)
        delta = rep.ln_edgeworth - pub
        ok = abs(delta) <= refdata.TOLERANCES["count_ratio"]
        if row.excluded:
            status = "flagged"
        elif ok:
            status = "ok"
        else:
            status = "FAIL"
            all_ok = False
        rows.append({
            "m": row.m,
            "n": row.n,
            "mean": _round6(row.mean),
            "published_exact": f"{row.exact[0]:.2f}e{row.exact[1]}",
            "published_edgeworth": f"{row.edgeworth[0]:.2f}e{row.edgeworth[1]}",
            "computed_edgeworth": count_string(rep.ln_edgeworth),
            "delta_ln": _round6(delta),
            "paths_delta_ln": _round6(rep.ln_edgeworth - closed.ln_edgeworth),
            "flagged": bool(rep.diagnostics),
            "status": status,
        })
    return rows, all_ok


def _repro_table2() -> tuple[list[dict], bool]:
    rows = []
    all_ok = True
    for row in refdata.TABLE2:
        spec = DegreeSpec(degrees=np.full(row.n, float(row.d)))
        rep = estimator.estimate_graph(spec)
        entry = {
            "n": row.n,
            "d": row.d,
            "published_ln_exact": _round6(row.ln_exact),
            "published_err": _round6(row.err) if not math.isnan(row.err) else None,
            "ln_edgeworth": _round6(rep.ln_edgeworth),
        }
        if row.estimated_only:
            entry["status"] = "reference-only"
        elif row.n <= 10:
            exact = oracle.exact_count_graphs(spec.degrees)
            err = rep.ln_edgeworth - exact.ln_value
            ok = (abs(exact.ln_value - row.ln_exact) <= refdata.TOLERANCES["exact_ln"]
                  and abs(err - row.err) <= refdata.TOLERANCES["ln_delta"])
            entry["oracle_ln"] = _round6(exact.ln_value)
            entry["err"] = _round6(err)
            entry["status"] = "ok" if ok else "FAIL"
            all_ok = all_ok and ok
        else:
            err = rep.ln_edgeworth - row.ln_exact
            ok = abs(err - row.err) <= refdata.TOLERANCES["ln_delta"]
            entry["err"] = _round6(err)
            entry["status"] = "ok" if ok else "FAIL"
            all_ok = all_ok and ok
        rows.append(entry)
    return rows, all_ok


def _repro_table3() -> tuple[list[dict], bool]:
    rows = []
    all_ok = True
    for row in refdata.TABLE3:
        spec = DegreeSpec(degrees=np.asarray(row.degrees, float))
        rep = estimator.estimate_graph(spec)
        ok = (abs(rep.ln_gauss - row.ln_gauss) <= refdata.TOLERANCES["ln_delta"]
              and abs(rep.ln_edgeworth - row.ln_edgeworth) <= refdata.TOLERANCES["ln_delta"])
        all_ok = all_ok and ok
        rows.append({
            "degrees": "".join(str(v) for v in row.degrees),
            "published_gauss": _round6(row.ln_gauss),
            "computed_gauss": _round6(rep.ln_gauss),
            "published_edgeworth": _round6(row.ln_edgeworth),
            "computed_edgeworth": _round6(rep.ln_edgeworth),
            "status": "ok" if ok else "FAIL",
        })
    return rows, all_ok


def cmd_repro(args) -> int:
    builder = {1: _repro_table1, 2: _repro_table2, 3: _repro_table3}[args.table]
    rows, all_ok = builder()
    if args.json:
        _emit_json({"table": args.table, "rows": rows, "pass": all_ok})
    else:
        keys = list(rows[0].keys())
        widths = {k: max(len(k), *(len(str(r.get(k, "-"))) for r in rows)) for k in keys}
        print("  ".join(k.ljust(widths[k]) for k in keys))
        for r in rows:
            print("  ".join(str(r.get(k, "-")).ljust(widths[k]) for k in keys))
        print(f"result: {'pass' if all_ok else 'FAIL'}")
    return 0 if all_ok else 4


# ---------------------------------------------------------------------------
# parser


def _add_instance_flags(sub) -> None:
    sub.add_argument("--rows", type=_vector, default=None, help="comma-separated row sums")
    sub.add_argument("--cols", type=_vector, default=None, help="comma-separated column sums")
    sub.add_argument("--degrees", type=_vector, default=None, help="comma-separated degree sequence")
    sub.add_argument("--input", default=None, help="JSON instance file")
    sub.add_argument("--json", action="store_true", help="emit a single-line JSON document")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entropy-count",
                     description="approximate counts of margin-constrained tables and graphs")
    subs = parser.add_subparsers(dest="command", required=True)

    p_count = subs.add_parser("count", help="estimate one instance")
    _add_instance_flags(p_count)
    p_count.add_argument("--exact", action="store_true", help="also run the exact oracle")
    p_count.add_argument("--tol", type=float, default=None, help="solver margin tolerance")
    p_count.add_argument("--max-iter", type=int, default=None, help="solver iteration cap")
    p_count.set_defaults(func=cmd_count)

    p_oracle = subs.add_parser("oracle", help="exact count only")
    _add_instance_flags(p_oracle)
    p_oracle.set_defaults(func=cmd_oracle)

    p_diag = subs.add_parser("diag", help="validity diagnostics and MC cumulant cross-check")
    _add_instance_flags(p_diag)
    p_diag.add_argument("--tol", type=float, default=None, help="solver margin tolerance")
    p_diag.add_argument("--max-iter", type=int, default=None, help="solver iteration cap")
    p_diag.add_argument("--mc-samples", type=int, default=None,
                        help="Monte Carlo sample count for the cumulant cross-check")
    p_diag.add_argument("--seed", type=int, default=None, help="Monte Carlo seed")
    p_diag.set_defaults(func=cmd_diag)

    p_repro = subs.add_parser("repro", help="recompute a published benchmark table")
    p_repro.add_argument("table", type=int, choices=(1, 2, 3),
                         help="which benchmark table to recompute")
    p_repro.add_argument("--json", action="store_true", help="emit a single-line JSON document")
    p_repro.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InfeasibleMargins as exc:
        print(f"infeasible instance: {exc}", file=sys.stderr)
        return 2
    except (NoConvergence, MaxEntBoundary, SingularCovariance, NotPositiveDefinite) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 5
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Covariance assembly, Wick cumulants, and the closed forms."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entropy_count import (
    DegreeSpec,
    MarginSpec,
    SingularCovariance,
    build_graph_covariance,
    build_table_covariance,
    closed_form_equal_margins,
    closed_form_regular_graph,
    closed_form_two_class_log_det,
    edge_pair_covariances,
    fit_graph,
    fit_table,
    graph_edge_coefficients,
    kappa3,
    kappa4,
    log_det,
    table_edge_coefficients,
)
from tests.conftest import random_degree_sequence, random_margin_spec


def table_parts(rows, cols):
    fit = fit_table(MarginSpec(rows=rows, cols=cols))
    model = build_table_covariance(fit)
    return fit, model, table_edge_coefficients(fit), edge_pair_covariances(model)


def graph_parts(degrees):
    fit = fit_graph(DegreeSpec(degrees=degrees))
    model = build_graph_covariance(fit)
    return fit, model, graph_edge_coefficients(fit), edge_pair_covariances(model)


class TestCovariance:
    def test_table_2x2_matrix(self):
        _, model, _, _ = table_parts([2.0, 2.0], [2.0, 2.0])
        expect = np.array([[4.0, 0.0, 2.0], [0.0, 4.0, 2.0], [2.0, 2.0, 4.0]])
        assert model.d == 3
        assert np.array_equal(model.V, expect)

    def test_table_incidence_sentinel(self):
        _, model, _, _ = table_parts([2.0, 2.0], [2.0, 2.0])
        # row-major cells; the last column keeps only its row coordinate
        assert model.incidence.tolist() == [[0, 2], [0, -1], [1, 2], [1, -1]]

    def test_single_row_table(self):
        _, model, _, _ = table_parts([2.0], [1.0, 1.0])
        assert model.d == 2
        assert abs(log_det(model) - math.log(4.0 * 2.0 - 2.0 * 2.0)) <= 1e-12

    def test_graph_covariance_is_dual_hessian(self):
        fit, model, _, _ = graph_parts([3.0] * 8)
        v = fit.mu * (1.0 - fit.mu)
        np.fill_diagonal(v, 0.0)
        expect = v.copy()
        expect[np.arange(8), np.arange(8)] = v.sum(axis=1)
        assert np.allclose(model.V, expect, atol=0.0)

    def test_graph_rejects_small_core(self):
        fit = fit_graph(DegreeSpec(degrees=[0.9, 0.9, 0.9]))
        assert fit.mu.shape == (3, 3)
        tiny = fit_graph(DegreeSpec(degrees=[1.5, 1.5, 1.5]))
        object.__setattr__(tiny, "mu", np.zeros((2, 2)))
        with pytest.raises(SingularCovariance):
            build_graph_covariance(tiny)

    def test_log_det_matches_slogdet(self):
        for seed, m, n in [(1, 3, 4), (2, 2, 5), (3, 4, 4)]:
            rows, cols = random_margin_spec(np.random.default_rng(seed), m, n)
            _, model, _, _ = table_parts(rows, cols)
            sign, expect = np.linalg.slogdet(model.V)
            assert sign > 0
            assert abs(log_det(model) - expect) <= 1e-9 * max(1.0, abs(expect))


class TestPairCovariances:
    def test_sigma2_is_diagonal_cov(self):
        _, _, _, pair = table_parts([7.0, 2.0, 5.0], [3.0, 3.0, 8.0])
        for e in range(pair.sigma2.size):
            assert pair.cov(e, e) == pytest.approx(pair.sigma2[e], rel=0.0, abs=0.0)

    def test_cov_symmetric_bitwise(self):
        _, _, _, pair = graph_parts([4.0, 4.0, 3.0, 3.0, 3.0, 3.0, 2.0, 2.0])
        n_edges = pair.sigma2.size
        for e in range(0, n_edges, 5):
            for f in range(0, n_edges, 7):
                assert pair.cov(e, f) == pair.cov(f, e)

    def test_quadratic_form_identity(self):
        # t'Vt == sum_e lam_e (t_e)^2 for the incidence-lifted t_e
        rng = np.random.default_rng(42)
        for builder, instance in [
            (table_parts, ([7.0, 2.0, 5.0], [3.0, 3.0, 8.0])),
            (graph_parts, ([4.0, 4.0, 4.0, 3.0, 3.0, 3.0, 3.0, 2.0],)),
        ]:
            _, model, coeffs, _ = builder(*instance)
            i1 = model.incidence[:, 0]
            i2 = np.where(model.incidence[:, 1] < 0, model.d, model.incidence[:, 1])
            for _ in range(20):
                t = rng.standard_normal(model.d)
                t_pad = np.append(t, 0.0)
                t_e = t_pad[i1] + t_pad[i2]
                lhs = float(t @ model.V @ t)
                rhs = float(np.sum(coeffs.lam * t_e * t_e))
                assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


class TestKappas:
    def test_one_cell_table_anchors(self):
        # mu = 1: V = [2], W = [1/2]; b = 6, a = 26
        _, _, coeffs, pair = table_parts([1.0], [1.0])
        assert kappa3(coeffs, pair) == pytest.approx(67.5, rel=1e-12)
        assert kappa4(coeffs, pair) == pytest.approx(19.5, rel=1e-12)

    def test_equal_margin_closed_vs_generic(self):
        for m, n, mu in [(2, 2, 1.0), (3, 3, 100.0 / 3.0), (3, 9, 11.0), (5, 7, 0.4)]:
            _, model, coeffs, pair = table_parts([n * mu] * m, [m * mu] * n)
            summary = closed_form_equal_margins(m, n, mu)
            assert summary.kappa3 == pytest.approx(kappa3(coeffs, pair), rel=1e-9)
            assert summary.kappa4 == pytest.approx(kappa4(coeffs, pair), rel=1e-9)
            assert summary.log_det_V == pytest.approx(log_det(model), rel=1e-9)
            assert summary.edge_sigma2[0] == pytest.approx(pair.sigma2[0], rel=1e-9)

    def test_equal_margin_2x2_values(self):
        summary = closed_form_equal_margins(2, 2, 1.0)
        assert summary.kappa3 == pytest.approx(138.375, rel=1e-12)
        assert summary.kappa4 == pytest.approx(43.875, rel=1e-12)
        assert summary.log_det_V == pytest.approx(math.log(32.0), rel=1e-12)

    def test_regular_graph_wick_cross_check(self):
        for n, d in [(8, 3), (10, 3), (12, 5), (9, 4)]:
            _, model, coeffs, pair = graph_parts([float(d)] * n)
            summary = closed_form_regular_graph(n, d)
            assert summary.cross_checks["kappa3_wick"] == pytest.approx(
                kappa3(coeffs, pair), rel=1e-9
            )
            assert summary.kappa4 == pytest.approx(kappa4(coeffs, pair), rel=1e-9)
            assert summary.log_det_V == pytest.approx(log_det(model), rel=1e-9)
            assert summary.edge_sigma2[0] == pytest.approx(pair.sigma2[0], rel=1e-9)

    def test_regular_graph_published_forms_disagree(self):
        # the published closed forms do not reduce to the definition; both
        # values are carried so the gap stays visible
        summary = closed_form_regular_graph(8, 3)
        assert summary.kappa3 == pytest.approx(870.0 / 32928.0, rel=1e-9)
        assert abs(summary.kappa3 - summary.cross_checks["kappa3_wick"]) > 1.0
        assert abs(summary.kappa4 - summary.cross_checks["kappa4_published"]) > 1.0

    def test_half_density_regular_kappa3_vanishes(self):
        # mu = 1/2 makes every b_e zero
        _, _, coeffs, pair = graph_parts([1.5] * 4)
        assert kappa3(coeffs, pair) == 0.0
        assert kappa4(coeffs, pair) == pytest.approx(-16.0, rel=1e-12)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**9))
    def test_kappa3_nonnegative_tables(self, seed):
        rng = np.random.default_rng(seed)
        rows, cols = random_margin_spec(rng, int(rng.integers(2, 5)), int(rng.integers(2, 5)))
        _, _, coeffs, pair = table_parts(rows, cols)
        k3 = kappa3(coeffs, pair)
        assert k3 >= -1e-9 * max(1.0, abs(k3))


class TestTwoClass:
    def test_matches_dense(self):
        for n1, n2, d1, d2 in [(4, 4, 3, 4), (6, 6, 5, 6), (4, 6, 2, 3)]:
            fit, model, _, _ = graph_parts([float(d1)] * n1 + [float(d2)] * n2)
            v = fit.mu * (1.0 - fit.mu)
            closed = closed_form_two_class_log_det(
                n1, n2, float(v[0, 1]), float(v[0, n1]), float(v[n1, n1 + 1])
            )
            assert closed == pytest.approx(log_det(model), rel=1e-9)

    def test_reduces_to_regular(self):
        n, d = 10, 4
        v = (d / (n - 1.0)) * (1.0 - d / (n - 1.0))
        closed = closed_form_two_class_log_det(5, 5, v, v, v)
        assert closed == pytest.approx(closed_form_regular_graph(n, d).log_det_V, rel=1e-12)

    def test_rejects_tiny_classes(self):
        with pytest.raises(ValueError):
            closed_form_two_class_log_det(1, 5, 0.2, 0.2, 0.2)


class TestValidation:
    def test_closed_form_regular_rejects_boundary(self):
        with pytest.raises(ValueError):
            closed_form_regular_graph(8, 0)
        with pytest.raises(ValueError):
            closed_form_regular_graph(8, 7)

    def test_closed_form_equal_margins_rejects_bad(self):
        with pytest.raises(ValueError):
            closed_form_equal_margins(0, 3, 1.0)
        with pytest.raises(ValueError):
            closed_form_equal_margins(3, 3, -1.0)

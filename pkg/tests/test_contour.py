"""Tests for contours and quadrature rules."""

import numpy as np
import pytest

from rsrr import (EllipseContour, RectangleContour, ellipse_trapezoid,
                  rectangle_gauss, scaled_basis_value)
from rsrr.errors import InvalidParameter


def cauchy_sum(quad, pole):
    return np.sum(quad.weights / (quad.nodes - pole))


class TestEllipseTrapezoid:
    def test_unit_circle_midpoint_nodes(self):
        quad = ellipse_trapezoid(0.0, 1.0, 1.0, 4)
        expected = np.exp(1j * np.pi * np.array([1, 3, 5, 7]) / 4)
        assert np.allclose(quad.nodes, expected, atol=1e-15)

    def test_cauchy_interior_center(self):
        quad = ellipse_trapezoid(1.5 + 0.5j, 1.2, 0.9, 32)
        assert abs(cauchy_sum(quad, 1.5 + 0.5j) - 1.0) <= 1e-12

    def test_cauchy_exterior_zero(self):
        gamma, a, b = 0.2 + 0.1j, 1.3, 0.8
        quad = ellipse_trapezoid(gamma, a, b, 64)
        pole = gamma + 2.0 * max(a, b)
        assert abs(cauchy_sum(quad, pole)) <= 1e-10

    def test_exponential_convergence(self):
        # trapezoid error for the scalar Cauchy test squares when the node
        # count doubles; the midpoint shift makes the prefactor 1/(1 + p^N),
        # hence the O(err^3) relative slack
        gamma = 0.4 + 0.1j
        pole = gamma + 0.45
        for n in (8, 16, 32):
            err_n = abs(cauchy_sum(ellipse_trapezoid(gamma, 1.0, 1.0, n), pole) - 1.0)
            err_2n = abs(cauchy_sum(ellipse_trapezoid(gamma, 1.0, 1.0, 2 * n), pole) - 1.0)
            assert err_2n <= err_n ** 2 * (1.0 + 4.0 * err_n) + 1e-14

    def test_counterclockwise_orientation(self):
        quad = ellipse_trapezoid(0.0, 2.0, 1.0, 48)
        winding = cauchy_sum(quad, 0.3 + 0.2j)
        assert winding.real > 0.9
        assert abs(winding - 1.0) < 1e-8

    def test_nodes_on_curve(self):
        gamma, a, b = 3.0 - 1.0j, 2.5, 0.4
        quad = ellipse_trapezoid(gamma, a, b, 37)
        on_curve = (((quad.nodes.real - gamma.real) / a) ** 2
                    + ((quad.nodes.imag - gamma.imag) / b) ** 2)
        assert np.max(np.abs(on_curve - 1.0)) <= 1e-12

    def test_invalid_parameters(self):
        with pytest.raises(InvalidParameter):
            ellipse_trapezoid(0.0, -1.0, 1.0, 8)
        with pytest.raises(InvalidParameter):
            ellipse_trapezoid(0.0, 1.0, 1.0, 1)


class TestRectangleGauss:
    def test_unit_square_cauchy(self):
        # 12-point Gauss per side: the Bernstein bound for the center pole is
        # ~7e-10, so 1e-10 is out of reach at this count; 18 points get there
        quad = rectangle_gauss(0.0 + 0.0j, 1.0 + 1.0j, 12, 12)
        assert abs(cauchy_sum(quad, 0.5 + 0.5j) - 1.0) <= 2e-9
        fine = rectangle_gauss(0.0 + 0.0j, 1.0 + 1.0j, 18, 18)
        assert abs(cauchy_sum(fine, 0.5 + 0.5j) - 1.0) <= 1e-12

    def test_ten_five_node_count(self):
        quad = rectangle_gauss(140.0 + 0.0j, 335.4 + 50.0j, 10, 5)
        assert quad.count == 30

    def test_exterior_zero(self):
        quad = rectangle_gauss(-1.0 - 1.0j, 1.0 + 1.0j, 12, 12)
        assert abs(cauchy_sum(quad, 3.0 + 2.5j)) <= 1e-8

    def test_long_side_gets_long_count(self):
        # width 10, height 1: horizontal sides carry n_long nodes
        quad = rectangle_gauss(0.0 + 0.0j, 10.0 + 1.0j, 7, 3)
        assert quad.count == 20
        bottom = quad.nodes[:7]
        assert np.allclose(bottom.imag, 0.0)

    def test_invalid(self):
        with pytest.raises(InvalidParameter):
            rectangle_gauss(1.0 + 0.0j, 0.0 + 1.0j, 5, 5)
        with pytest.raises(InvalidParameter):
            rectangle_gauss(0.0 + 0.0j, 1.0 + 1.0j, 0, 5)


class TestScaledBasisValue:
    def test_order_zero(self):
        assert scaled_basis_value(123.4 - 5j, 1.0, 2.0, 0) == 1.0

    def test_unit_offset(self):
        gamma, rho = 2.0 + 1.0j, 1.7
        assert abs(scaled_basis_value(gamma + rho, gamma, rho, 5) - 1.0) <= 1e-14

    def test_magnitude_bound(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            z = complex(rng.standard_normal(), rng.standard_normal())
            gamma = complex(rng.standard_normal(), rng.standard_normal())
            rho = float(rng.uniform(0.5, 2.0))
            alpha = int(rng.integers(0, 8))
            value = scaled_basis_value(z, gamma, rho, alpha)
            assert abs(value) <= (abs(z - gamma) / rho) ** alpha + 1e-14

    def test_invalid(self):
        with pytest.raises(InvalidParameter):
            scaled_basis_value(1.0, 0.0, -1.0, 2)
        with pytest.raises(InvalidParameter):
            scaled_basis_value(1.0, 0.0, 1.0, -1)


class TestContourObjects:
    def test_ellipse_shift_scale(self):
        c = EllipseContour(2.0 + 1.0j, 3.0, 0.5)
        assert c.gamma == 2.0 + 1.0j
        assert c.rho == 3.0
        assert c.real_interval() == (-1.0, 5.0)

    def test_ellipse_contains_margin(self):
        c = EllipseContour(0.0 + 0.0j, 2.0, 1.0)
        assert c.contains(1.0 + 0.0j)
        assert not c.contains(2.5 + 0.0j)
        # margin shrinks the acceptance region
        edge = 1.999 + 0.0j
        assert c.contains(edge)
        assert not c.contains(edge, margin=0.01)

    def test_rectangle_shift_scale_contains(self):
        c = RectangleContour(140.0 + 0.0j, 335.4 + 50.0j, n_long=10, n_short=5)
        assert c.gamma == pytest.approx(237.7 + 25.0j)
        assert c.rho == pytest.approx((335.4 - 140.0) / 2)
        assert c.contains(200.0 + 10.0j)
        assert not c.contains(100.0 + 10.0j)
        assert c.total_nodes == 30
        assert c.real_interval() == (140.0, 335.4)

    def test_rectangle_quadrature_scaling(self):
        c = RectangleContour(0.0 + 0.0j, 4.0 + 1.0j, n_long=10, n_short=5)
        assert c.quadrature(30).count == 30
        assert c.quadrature(60).count == 60

    def test_ellipse_quadrature_matches_function(self):
        c = EllipseContour(1.0 + 2.0j, 2.0, 1.0)
        q1 = c.quadrature(16)
        q2 = ellipse_trapezoid(1.0 + 2.0j, 2.0, 1.0, 16)
        assert np.array_equal(q1.nodes, q2.nodes)
        assert np.array_equal(q1.weights, q2.weights)

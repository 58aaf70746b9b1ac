"""
Test the contact scale, mollified rate, jump functionals and ball averages.
"""

import math

import numpy as np
import pytest

from cloudrain.kernels import (
    ball_average,
    ball_average_error,
    contact_scale,
    j_phi_local,
    j_phi_nonlocal,
    local_limit_kernel,
    normalization_ratio,
    t_delta_kernel,
)

UNIT_BALL = 4.0 / 3.0 * math.pi


def gaussian_bump(points, w):
    points = np.atleast_2d(points)
    return np.exp(-np.sum(points**2, axis=1) / (2 * 0.5**2))


class TestContactScale:
    """Test cases for contact_scale and t_delta_kernel."""

    def test_unit_spheres(self):
        assert contact_scale(UNIT_BALL, UNIT_BALL) == pytest.approx(2.0, rel=1e-12)

    def test_symmetric(self):
        assert contact_scale(1.0, 3.0) == contact_scale(3.0, 1.0)

    def test_coincident_rate(self):
        assert t_delta_kernel([0, 0], 1.0, [0, 0], 1.0, delta=1.0) == 0.5

    def test_out_of_range_rate(self):
        assert t_delta_kernel([0, 0], UNIT_BALL, [1.5, 1.5], UNIT_BALL, delta=1.0) == 0.0

    def test_boundary_is_inclusive(self):
        edge = 0.5 * contact_scale(UNIT_BALL, UNIT_BALL)
        assert t_delta_kernel([0, 0], UNIT_BALL, [edge, 0], UNIT_BALL, delta=0.5) > 0

    def test_delta_scaling(self):
        rate = t_delta_kernel([0, 0], 1.0, [0, 0], 1.0, delta=0.5)
        assert rate == pytest.approx(0.5 * 8.0)

    def test_exponent_parameter(self):
        rate = t_delta_kernel([0, 0], 1.0, [0, 0], 1.0, delta=0.5, exponent=2)
        assert rate == pytest.approx(0.5 * 4.0)

    def test_efficiency_applied(self):
        rate = t_delta_kernel(
            [0, 0], 1.0, [0, 0], 2.0, delta=1.0, efficiency=lambda v, w: v * w
        )
        assert rate == pytest.approx(1.0)


class TestJumpFunctionals:
    """Test cases for J^phi and the local kernel."""

    def test_mass_is_conserved(self):
        assert j_phi_local(lambda x, v: v, None, 0.3, 0.7) == pytest.approx(0.0, abs=1e-15)

    def test_square_moment_grows(self):
        assert j_phi_local(lambda x, v: v**2, None, 2.0, 3.0) == pytest.approx(12.0)

    def test_nonlocal_keeps_larger_position(self):
        phi = lambda x, v: x * v  # noqa: E731
        assert j_phi_nonlocal(phi, 1.0, 2.0, 5.0, 1.0) == pytest.approx(1.0 * 3.0 - 2.0 - 5.0)
        assert j_phi_nonlocal(phi, 1.0, 1.0, 5.0, 2.0) == pytest.approx(5.0 * 3.0 - 1.0 - 10.0)

    def test_local_kernel_homogeneous(self):
        v, w, c = 0.4, 1.7, 3.0
        assert local_limit_kernel(c * v, c * w) == pytest.approx(c * local_limit_kernel(v, w))

    def test_local_kernel_unit_spheres(self):
        assert local_limit_kernel(UNIT_BALL, UNIT_BALL) == pytest.approx(8.0, rel=1e-12)

    def test_normalization_ratio(self):
        assert normalization_ratio() == pytest.approx(2.0 * math.pi**2 / 3.0)


class TestBallAverage:
    """Test cases for ball_average and ball_average_error."""

    def test_constant_density(self):
        avg = ball_average(lambda p, w: np.full(len(p), 3.0), [0.2, -0.1], 1.0, 0.3)
        assert avg == pytest.approx(3.0, abs=1e-10)

    def test_linear_density_averages_to_centre(self):
        rho = lambda p, w: 1.0 + 2.0 * p[:, 0] - p[:, 1]  # noqa: E731
        avg = ball_average(rho, [0.5, 0.25], 1.0, 0.2)
        assert avg == pytest.approx(1.75, abs=1e-10)

    def test_too_few_nodes(self):
        with pytest.raises(ValueError, match="at least 64 nodes"):
            ball_average(gaussian_bump, [0, 0], 1.0, 0.1, n_radial=4, n_angular=8)

    def test_second_order_convergence(self):
        phi = lambda x, v: v**2  # noqa: E731
        errors = ball_average_error(gaussian_bump, phi, [0.2, 0.1], 1.0, [0.1, 0.05, 0.025])
        ratios = [errors[i + 1] / errors[i] for i in range(len(errors) - 1)]
        for ratio in ratios:
            assert 0.15 <= ratio <= 0.45

    def test_delta_list_must_decrease(self):
        with pytest.raises(ValueError, match="decreasing"):
            ball_average_error(gaussian_bump, lambda x, v: v, [0, 0], 1.0, [0.05, 0.1])

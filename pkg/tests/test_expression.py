"""Tests for switching functions and the constrained expression."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bvp8.basis import ChebyshevBasis, DomainMap
from bvp8.errors import ConfigurationError
from bvp8.expression import (
    BoundaryConditions,
    ConstrainedExpression,
    SwitchingFunctions,
    constraint_locations,
    support_matrix,
)

# Monomial coefficients (ascending degree) of the eight switching functions
# on [0, 1].  Every entry is an exactly representable rational.
UNIT_COEFFS = np.array([
    [1.0, 0.0, 0.0, 0.0, -35.0, 84.0, -70.0, 20.0],
    [0.0, 0.0, 0.0, 0.0, 35.0, -84.0, 70.0, -20.0],
    [0.0, 1.0, 0.0, 0.0, -20.0, 45.0, -36.0, 10.0],
    [0.0, 0.0, 0.0, 0.0, -15.0, 39.0, -34.0, 10.0],
    [0.0, 0.0, 0.5, 0.0, -5.0, 10.0, -7.5, 2.0],
    [0.0, 0.0, 0.0, 0.0, 2.5, -7.0, 6.5, -2.0],
    [0.0, 0.0, 0.0, 1 / 6, -2 / 3, 1.0, -2 / 3, 1 / 6],
    [0.0, 0.0, 0.0, 0.0, -1 / 6, 0.5, -0.5, 1 / 6],
])


def unit_bc(left=(1.0, 0.0, 0.0, 0.0), right=(0.0, 0.0, 0.0, 0.0)):
    return BoundaryConditions(0.0, 1.0, tuple(left), tuple(right))


class TestSwitchingClosedForm:
    def test_unit_domain_coefficients(self):
        sw = SwitchingFunctions.closed_form(0.0, 1.0)
        assert_allclose(sw.coeffs, UNIT_COEFFS, rtol=1e-15, atol=0)

    def test_degenerate_domain_rejected(self):
        with pytest.raises(ConfigurationError):
            SwitchingFunctions.closed_form(1.0, 0.5)

    def test_kronecker_values_on_unit_domain(self):
        sw = SwitchingFunctions.closed_form(0.0, 1.0)
        row = sw.eval(0.0, 0)
        assert row[0] == 1.0 and np.all(row[1:] == 0.0)
        assert sw.eval(1.0, 0)[0] == 0.0
        assert sw.eval(0.0, 1)[0] == 0.0

    @pytest.mark.parametrize("x_i,x_f", [(0.0, 1.0), (0.0, np.expm1(0.5)), (-2.0, 3.0)])
    def test_kronecker_matrix_near_identity(self, x_i, x_f):
        sw = SwitchingFunctions.closed_form(x_i, x_f)
        tol = 1e-10 * np.max(np.abs(sw.coeffs))
        assert np.max(np.abs(sw.kronecker_matrix() - np.eye(8))) <= tol


class TestSwitchingLinearSolve:
    def test_agrees_with_closed_form_on_unit_domain(self):
        a = SwitchingFunctions.closed_form(0.0, 1.0)
        b = SwitchingFunctions.from_linear_solve(0.0, 1.0)
        assert_allclose(b.coeffs, a.coeffs, rtol=1e-10, atol=1e-10)

    def test_kronecker_matrix_on_offset_domain(self):
        sw = SwitchingFunctions.from_linear_solve(0.0, np.expm1(0.5))
        tol = 1e-10 * np.max(np.abs(sw.coeffs))
        assert np.max(np.abs(sw.kronecker_matrix() - np.eye(8))) <= tol

    def test_symmetric_domain_seventh_function(self):
        # On [-1, 1] the factored form reduces to (x-1)^4 (x+1)^3 / 96.
        expected = np.array([1, -1, -3, 3, 3, -3, -1, 1]) / 96.0
        sw = SwitchingFunctions.from_linear_solve(-1.0, 1.0)
        assert_allclose(sw.coeffs[6], expected, atol=1e-12)

    def test_support_matrix_first_rows(self):
        mat = support_matrix(0.0, 2.0)
        assert_allclose(mat[0], [1, 0, 0, 0, 0, 0, 0, 0], atol=0)
        assert_allclose(mat[1], [1, 2, 4, 8, 16, 32, 64, 128], atol=0)
        # row 6: third derivative of the monomials at x_i = 0
        assert_allclose(mat[6], [0, 0, 0, 6, 0, 0, 0, 0], atol=0)

    def test_mode_equivalence_on_random_domains(self):
        # Widths below ~0.5 make the monomial system too ill-conditioned to
        # compare coefficients at this tolerance.
        rng = np.random.default_rng(11)
        for _ in range(20):
            x_i = rng.uniform(-3.0, 3.0)
            x_f = x_i + rng.uniform(0.5, 5.0)
            a = SwitchingFunctions.closed_form(x_i, x_f)
            b = SwitchingFunctions.from_linear_solve(x_i, x_f)
            scale = np.max(np.abs(a.coeffs))
            assert np.max(np.abs(a.coeffs - b.coeffs)) <= 1e-9 * scale


class TestSwitchingEval:
    def test_symmetry_midpoint(self):
        sw = SwitchingFunctions.closed_form(0.0, 1.0)
        assert sw.eval(0.5, 0)[1] == pytest.approx(0.5, abs=1e-15)

    def test_order_eight_is_zero(self):
        sw = SwitchingFunctions.closed_form(-0.4, 1.7)
        assert np.all(sw.eval(0.3, 8) == 0.0)

    def test_endpoint_rows_are_exact_units(self):
        sw = SwitchingFunctions.closed_form(0.0, np.expm1(0.5))
        for k, (x, d) in enumerate(constraint_locations(sw.x_i, sw.x_f)):
            row = sw.eval(x, d)
            expected = np.zeros(8)
            expected[k] = 1.0
            assert np.all(row == expected)

    def test_array_evaluation_matches_scalar(self):
        sw = SwitchingFunctions.closed_form(0.0, 1.0)
        xs = np.array([0.0, 0.3, 1.0])
        batch = sw.eval(xs, 1)
        for k, x in enumerate(xs):
            assert_allclose(batch[k], sw.eval(float(x), 1), atol=0)

    def test_order_out_of_range_rejected(self):
        sw = SwitchingFunctions.closed_form(0.0, 1.0)
        with pytest.raises(ValueError):
            sw.eval(0.5, 9)


class TestBoundaryConditions:
    def test_interleaved_order(self):
        bc = BoundaryConditions(0.0, 1.0, (10.0, 11.0, 12.0, 13.0), (20.0, 21.0, 22.0, 23.0))
        assert_allclose(bc.interleaved(), [10, 20, 11, 21, 12, 22, 13, 23], atol=0)

    def test_from_callable(self):
        bc = BoundaryConditions.from_callable(0.0, 1.0, lambda x, d: x + d)
        assert bc.left_values == (0.0, 1.0, 2.0, 3.0)
        assert bc.right_values == (1.0, 2.0, 3.0, 4.0)

    def test_wrong_arity_rejected(self):
        with pytest.raises(ConfigurationError):
            BoundaryConditions(0.0, 1.0, (1.0, 2.0), (0.0, 0.0, 0.0, 0.0))

    def test_degenerate_domain_rejected(self):
        with pytest.raises(ConfigurationError):
            BoundaryConditions(1.0, 1.0, (0.0,) * 4, (0.0,) * 4)


def build_unit_ce(m=10, bc=None, mode="closed_form"):
    bc = bc if bc is not None else unit_bc()
    basis = ChebyshevBasis(m, DomainMap(bc.x_i, bc.x_f))
    return ConstrainedExpression.build(basis, bc, mode)


class TestConstrainedExpression:
    def test_domain_mismatch_rejected(self):
        basis = ChebyshevBasis(10, DomainMap(0.0, 2.0))
        with pytest.raises(ConfigurationError):
            ConstrainedExpression.build(basis, unit_bc())

    def test_unknown_switching_mode_rejected(self):
        basis = ChebyshevBasis(10, DomainMap(0.0, 1.0))
        with pytest.raises(ConfigurationError):
            ConstrainedExpression.build(basis, unit_bc(), "fancy")

    def test_a_row_vanishes_at_constraints(self):
        ce = build_unit_ce()
        assert np.all(ce.a_row(0.0, 0) == 0.0)
        assert np.all(ce.a_row(1.0, 3) == 0.0)

    def test_constraints_hold_for_random_coefficients(self):
        rng = np.random.default_rng(5)
        bc = BoundaryConditions(0.0, 1.0, (1.0, -2.0, 0.5, 3.0), (0.25, 1.5, -1.0, 2.0))
        ce = build_unit_ce(bc=bc)
        values = bc.interleaved()
        locs = constraint_locations(0.0, 1.0)
        for _ in range(100):
            xi = rng.uniform(-1.0, 1.0, size=10)
            for k, (x, d) in enumerate(locs):
                got = ce.eval(x, d, xi)
                assert abs(got - values[k]) <= 1e-12 * (1.0 + abs(values[k]))

    def test_zero_coefficients_reduce_to_interpolant(self):
        """y(x, 0) is the degree-7 interpolant: its 9th difference vanishes."""
        bc = BoundaryConditions(0.0, 1.0, (1.0, 2.0, -1.0, 0.5), (-0.5, 1.0, 2.0, -3.0))
        ce = build_unit_ce(bc=bc)
        xs = np.linspace(0.0, 1.0, 12)
        samples = np.array([ce.eval(x, 0, np.zeros(10)) for x in xs])
        ninth = np.diff(samples, n=9)
        assert np.max(np.abs(ninth)) <= 1e-9 * np.max(np.abs(samples))

    def test_linearity_in_coefficients(self):
        ce = build_unit_ce(m=6)
        x = 0.37
        zero = np.zeros(6)
        base = ce.eval(x, 2, zero)
        row = ce.a_row(x, 2)
        for j in range(6):
            unit = np.zeros(6)
            unit[j] = 1.0
            assert ce.eval(x, 2, unit) - base == pytest.approx(row[j], abs=1e-12)

    def test_eval_is_a_row_plus_b_value(self):
        ce = build_unit_ce(m=7)
        rng = np.random.default_rng(9)
        xi = rng.standard_normal(7)
        for x in (0.1, 0.55, 0.98):
            for order in (0, 1, 4, 8):
                direct = ce.eval(x, order, xi)
                split = ce.a_row(x, order) @ xi + ce.b_value(x, order)
                assert direct == split

    @pytest.mark.parametrize("order", range(1, 9))
    def test_derivative_chain(self, order):
        """Order-p evaluation matches a central difference of order p-1."""
        bc = BoundaryConditions(0.0, 1.0, (1.0, 0.5, -0.25, 2.0), (0.0, -1.0, 1.5, 0.75))
        ce = build_unit_ce(bc=bc)
        rng = np.random.default_rng(order)
        xi = rng.standard_normal(10)
        xs = np.linspace(0.1, 0.9, 10)
        step = 1e-5
        fd = np.array([
            (ce.eval(x + step, order - 1, xi) - ce.eval(x - step, order - 1, xi)) / (2 * step)
            for x in xs
        ])
        exact = np.array([ce.eval(x, order, xi) for x in xs])
        scale = np.max(np.abs(exact))
        assert_allclose(fd, exact, rtol=1e-5, atol=1e-5 * scale)

    def test_switching_modes_agree(self):
        bc = BoundaryConditions(0.0, 1.0, (1.0, 2.0, 3.0, 4.0), (4.0, 3.0, 2.0, 1.0))
        a = build_unit_ce(bc=bc, mode="closed_form")
        b = build_unit_ce(bc=bc, mode="linear_solve")
        xs = np.linspace(0.0, 1.0, 13)
        xi = np.full(10, 0.1)
        for order in (0, 3, 8):
            va = np.array([a.eval(x, order, xi) for x in xs])
            vb = np.array([b.eval(x, order, xi) for x in xs])
            assert_allclose(vb, va, rtol=1e-9, atol=1e-9 * max(1.0, np.max(np.abs(va))))

    def test_wrong_coefficient_shape_rejected(self):
        ce = build_unit_ce(m=5)
        with pytest.raises(ValueError):
            ce.eval(0.5, 0, np.zeros(6))

import numpy as np
import pytest

from bohrlab.radii import (
    RadiusEquation,
    equation_derivative,
    equation_value,
    maximal_root,
    star_equivalence_check,
    unique_root,
)


class TestEquationValue:
    def test_refined_lacunary_collapses_to_square(self):
        # p=1, m=0: 5r^2 - 2r + 1 + 4r^2 - 4r = (3r - 1)^2
        eq = RadiusEquation.refined_lacunary(1, 0)
        for r in (0.1, 1 / 3, 0.5, 0.9):
            assert equation_value(eq, r) == pytest.approx((3 * r - 1) ** 2, abs=1e-14)

    def test_limit_kind_at_one_third(self):
        eq = RadiusEquation.rogosinski_limit(1, 1.0)
        assert equation_value(eq, 1 / 3) == pytest.approx(0.0, abs=1e-15)

    def test_gap_equation_factorization(self):
        # N=2, m=1: 5r^3 + 2r^2 - 3r = r (5r - 3)(r + 1)
        eq = RadiusEquation.gap(2, 1)
        for r in (0.2, 0.6, 0.8):
            assert equation_value(eq, r) == pytest.approx(
                r * (5 * r - 3) * (r + 1), abs=1e-13
            )
        assert equation_value(eq, 0.6) == pytest.approx(0.0, abs=1e-14)

    def test_rejects_out_of_range(self):
        eq = RadiusEquation.lacunary(1, 0)
        for r in (0.0, 1.0, -0.2, 1.4):
            with pytest.raises(ValueError):
                equation_value(eq, r)

    def test_derivative_matches_difference_quotient(self):
        eqs = [
            RadiusEquation.refined_lacunary(3, 2),
            RadiusEquation.gap(4, 2),
            RadiusEquation.rogosinski(3, 1.5, 2),
            RadiusEquation.rogosinski_limit(2, 0.7),
        ]
        h = 1e-7
        for eq in eqs:
            for r in (0.2, 0.5, 0.8):
                fd = (equation_value(eq, r + h) - equation_value(eq, r - h)) / (2 * h)
                assert equation_derivative(eq, r) == pytest.approx(fd, rel=1e-5, abs=1e-5)


class TestMaximalRoot:
    def test_perfect_square_roots(self):
        for p in range(1, 11):
            root = maximal_root(RadiusEquation.refined_lacunary(p, 0))
            assert abs(root - 3.0 ** (-1.0 / p)) <= 1e-10

    def test_piecewise_gap_goldens(self):
        assert abs(maximal_root(RadiusEquation.gap_piecewise(1, 0)) - 1 / 3) <= 1e-10
        assert abs(maximal_root(RadiusEquation.gap_piecewise(2, 1)) - 3 / 5) <= 1e-10

    def test_refined_interval_claim(self):
        # for 1 <= m <= p the refined root sits strictly above 3^(-1/p)
        for p in range(1, 7):
            for m in range(1, p + 1):
                root = maximal_root(RadiusEquation.refined_lacunary(p, m))
                assert 3.0 ** (-1.0 / p) < root < 1.0

    def test_residual_certificates(self):
        eqs = [RadiusEquation.lacunary(p, m) for p in range(1, 7) for m in range(0, p + 1)]
        eqs += [RadiusEquation.refined_lacunary(p, m) for p in range(1, 7) for m in range(0, p + 1)]
        eqs += [RadiusEquation.gap(n, m) for m in range(0, 4) for n in range(m + 1, 8)]
        for eq in eqs:
            root = maximal_root(eq)
            assert 0.0 < root < 1.0
            assert abs(equation_value(eq, root)) <= 1e-10

    def test_maximality_no_sign_change_above(self):
        for eq in (RadiusEquation.gap(3, 1), RadiusEquation.refined_lacunary(2, 1)):
            root = maximal_root(eq)
            grid = np.arange(root + 1e-4, 1.0, 1e-4)
            vals = equation_value(eq, grid)
            signs = np.sign(vals[vals != 0.0])
            assert np.all(signs == signs[0])

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            RadiusEquation.refined_lacunary(2, 3)  # m > p
        with pytest.raises(ValueError):
            RadiusEquation.gap(2, 2)  # N < m + 1
        with pytest.raises(ValueError):
            RadiusEquation.lacunary(65, 0)  # cap
        with pytest.raises(ValueError):
            RadiusEquation.rogosinski(2, 2.5, 1)  # exponent range


class TestUniqueRoot:
    def test_limit_goldens(self):
        assert abs(unique_root(RadiusEquation.rogosinski_limit(1, 1.0)) - 1 / 3) <= 1e-10
        assert abs(unique_root(RadiusEquation.rogosinski_limit(1, 2.0)) - 1 / 2) <= 1e-10

    def test_composed_tends_to_limit(self):
        # growing the inner order recovers the limit equation's root
        limit = unique_root(RadiusEquation.rogosinski_limit(2, 1.0))
        composed = unique_root(RadiusEquation.rogosinski(2, 1.0, 64))
        assert abs(composed - limit) <= 1e-8

    def test_roots_grow_with_tail_start(self):
        # starting the tail later (larger N) leaves less mass, so the
        # admissible radius grows; shrinking N forces a smaller radius
        prev = 0.0
        for n in range(1, 8):
            root = unique_root(RadiusEquation.rogosinski_limit(n, 1.0))
            assert root > prev
            prev = root

    def test_composed_root_shrinks_with_smaller_n(self):
        r3 = unique_root(RadiusEquation.rogosinski(3, 1.0, 2))
        r1 = unique_root(RadiusEquation.rogosinski(1, 1.0, 2))
        assert r1 < r3

    def test_residuals(self):
        for n in (1, 2, 5, 17):
            for p_exp in (0.3, 1.0, 2.0):
                for m in (1, 2, 8):
                    eq = RadiusEquation.rogosinski(n, p_exp, m)
                    root = unique_root(eq)
                    assert abs(equation_value(eq, root)) <= 1e-10

    def test_wrong_kind_rejected(self):
        with pytest.raises(ValueError):
            unique_root(RadiusEquation.gap(2, 1))


class TestStarEquivalence:
    def test_known_pairs_tight(self):
        assert star_equivalence_check(1, 0) <= 1e-12
        assert star_equivalence_check(2, 1) <= 1e-12

    def test_parameter_sweep(self):
        for m in range(0, 5):
            for n in range(m + 1, 9):
                assert star_equivalence_check(n, m) <= 1e-10

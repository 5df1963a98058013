import random
from fractions import Fraction

import pytest

from wpvol.qseries import (
    Series,
    bessel_x_of_y,
    double_factorial,
    factorial,
    first_mismatch,
    format_rational,
    parse_rational,
    revert_lagrange,
)

F = Fraction


def S(*coeffs):
    return Series(coeffs)


def random_series(rng, order, unit_constant=False, zero_constant=False, unit_linear=False):
    coeffs = [F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(order + 1)]
    if unit_constant:
        coeffs[0] = F(rng.randint(1, 5), rng.randint(1, 3))
    if zero_constant:
        coeffs[0] = F(0)
    if unit_linear:
        coeffs[1] = F(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 3))
    return Series(coeffs)


class TestScalars:
    def test_format(self):
        assert format_rational(F(1, 24)) == "1/24"
        assert format_rational(F(-5, 12)) == "-5/12"
        assert format_rational(F(3)) == "3"
        assert format_rational(7) == "7"

    def test_parse(self):
        assert parse_rational("1/24") == F(1, 24)
        assert parse_rational("-61") == F(-61)
        with pytest.raises(ValueError):
            parse_rational("1/0")
        with pytest.raises(ValueError):
            parse_rational("0.5")
        with pytest.raises(ValueError):
            parse_rational("1 / 2")

    def test_double_factorial(self):
        assert double_factorial(-1) == 1
        assert double_factorial(1) == 1
        assert double_factorial(5) == 15
        assert double_factorial(9) == 945
        with pytest.raises(ValueError):
            double_factorial(-3)

    def test_factorial_negative(self):
        with pytest.raises(ValueError):
            factorial(-1)


class TestConstruction:
    def test_float_rejected(self):
        with pytest.raises(TypeError):
            Series([0.5])
        with pytest.raises(TypeError):
            S(1, 2) + 0.5

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Series([])

    def test_order(self):
        assert S(1, 2, 3).order == 2
        assert Series.identity(5).order == 5
        assert Series.constant(7, 3).coeffs == (7, 0, 0, 0)

    def test_coefficient_bounds(self):
        s = S(1, 2)
        assert s[1] == 2
        with pytest.raises(IndexError):
            s[2]

    def test_truncate_never_extends(self):
        s = S(1, 2, 3)
        assert s.truncate(1) == S(1, 2)
        with pytest.raises(ValueError):
            s.truncate(5)


class TestRingOps:
    def test_add(self):
        assert S(1, 1) + S(2, -1) == S(3, 0)
        a = S(0, 1, F(1, 2))
        assert a + Series.zero(2) == a
        assert S(0, 1, F(1, 2)) + S(0, 0, F(1, 2)) == S(0, 1, 1)

    def test_add_min_order(self):
        assert (S(1, 2, 3) + S(1, 1)).order == 1

    def test_mul(self):
        assert S(1, 1, 0) * S(1, -1, 0) == S(1, 0, -1)
        a = S(2, 3, 5)
        assert a * Series.constant(1, 2) == a
        # x * x at order 1: the x^2 term is beyond order
        x = Series.identity(1)
        assert x * x == S(0, 0)

    def test_scalar_ops(self):
        assert 1 - S(0, 1) == S(1, -1)
        assert S(0, 1) * F(1, 2) == S(0, F(1, 2))
        assert S(1, 2) / 2 == S(F(1, 2), 1)

    def test_pow(self):
        x = Series.identity(4)
        assert (1 + x) ** 3 == S(1, 3, 3, 1, 0)
        assert x**0 == Series.constant(1, 4)
        with pytest.raises(ValueError):
            x ** (-1)

    def test_mul_commutes_randomized(self):
        rng = random.Random(7)
        for _ in range(25):
            a = random_series(rng, rng.randint(0, 8))
            b = random_series(rng, rng.randint(0, 8))
            assert a * b == b * a


class TestCalculus:
    def test_derivative_examples(self):
        assert S(0, 1, F(1, 2), F(5, 12)).derivative() == S(1, 1, F(5, 4))
        assert Series.constant(9, 3).derivative() == Series.zero(2)
        k = 6
        s = Series([0] * k + [F(1, factorial(k))])
        assert s.derivative() == Series([0] * (k - 1) + [F(1, factorial(k - 1))])

    def test_derivative_order_zero_rejected(self):
        with pytest.raises(ValueError):
            S(3).derivative()

    def test_antiderivative_examples(self):
        assert Series.constant(1, 0).antiderivative() == S(0, 1)
        assert Series.identity(1).antiderivative(1) == S(1, 0, F(1, 2))

    def test_antiderivative_inverts_derivative(self):
        rng = random.Random(11)
        for _ in range(20):
            a = random_series(rng, rng.randint(1, 8), zero_constant=True)
            assert a.derivative().antiderivative(0) == a

    def test_reciprocal_geometric(self):
        assert S(1, -1, 0, 0).reciprocal() == S(1, 1, 1, 1)
        assert Series.constant(1, 0).reciprocal() == S(1)
        assert S(1, 1, F(5, 4)).reciprocal() == S(1, -1, F(-1, 4))

    def test_reciprocal_zero_rejected(self):
        with pytest.raises(ValueError):
            S(0, 1).reciprocal()

    def test_mul_reciprocal_randomized(self):
        rng = random.Random(13)
        for _ in range(25):
            a = random_series(rng, rng.randint(0, 8), unit_constant=True)
            assert a * a.reciprocal() == Series.constant(1, a.order)


class TestCompose:
    def test_identity_inner(self):
        outer = S(1, 1, 1)
        assert outer.compose(Series.identity(2)) == outer

    def test_square_inner(self):
        outer = S(0, 0, 1, 0)  # y^2
        inner = S(0, 1, 1, 0)  # x + x^2
        assert outer.compose(inner) == S(0, 0, 1, 2)

    def test_nonzero_constant_rejected(self):
        with pytest.raises(ValueError):
            S(0, 1).compose(S(1, 1))

    def test_chain_rule_randomized(self):
        rng = random.Random(17)
        for _ in range(20):
            f = random_series(rng, rng.randint(2, 8))
            g = random_series(rng, f.order, zero_constant=True)
            lhs = f.compose(g).derivative()
            rhs = f.derivative().compose(g) * g.derivative()
            assert lhs == rhs


class TestRevert:
    def test_identity(self):
        x = Series.identity(6)
        assert x.revert() == x

    def test_linear(self):
        assert S(0, 2).revert() == S(0, F(1, 2))

    def test_bessel_inverse_low_order(self):
        y = bessel_x_of_y(3).revert()
        assert y == S(0, 1, F(1, 2), F(5, 12))

    def test_round_trip_bessel(self):
        a = bessel_x_of_y(12)
        b = a.revert()
        assert a.compose(b) == Series.identity(12)
        assert b.compose(a) == Series.identity(12)

    def test_round_trip_randomized(self):
        rng = random.Random(19)
        for _ in range(15):
            a = random_series(rng, rng.randint(1, 10), zero_constant=True, unit_linear=True)
            b = a.revert()
            ident = Series.identity(a.order)
            assert a.compose(b) == ident
            assert b.compose(a) == ident

    def test_preconditions(self):
        with pytest.raises(ValueError):
            S(1, 1).revert()
        with pytest.raises(ValueError):
            S(0, 0, 1).revert()
        with pytest.raises(ValueError):
            S(3).revert()

    def test_newton_agrees_with_lagrange(self):
        rng = random.Random(23)
        assert bessel_x_of_y(20).revert() == revert_lagrange(bessel_x_of_y(20))
        for _ in range(10):
            a = random_series(rng, rng.randint(1, 12), zero_constant=True, unit_linear=True)
            assert a.revert() == revert_lagrange(a)


class TestBesselSeries:
    def test_low_order(self):
        assert bessel_x_of_y(3) == S(0, 1, F(-1, 2), F(1, 12))

    def test_single_coefficients(self):
        s = bessel_x_of_y(4)
        assert s[1] == 1
        assert s[4] == F(-1, 144)

    def test_order_validation(self):
        with pytest.raises(ValueError):
            bessel_x_of_y(0)


class TestSerialization:
    def test_json_round_trip(self):
        s = S(0, 1, F(-1, 2), F(1, 12))
        d = s.to_json_dict()
        assert d == {"order": 3, "coeffs": ["0", "1", "-1/2", "1/12"]}
        assert Series.from_json_dict(d) == s

    def test_json_validates_order(self):
        with pytest.raises(ValueError):
            Series.from_json_dict({"order": 2, "coeffs": ["1"]})


class TestFirstMismatch:
    def test_none_when_equal(self):
        assert first_mismatch(S(1, 2), S(1, 2, 99)) is None

    def test_reports_power(self):
        assert first_mismatch(S(1, 2, 3), S(1, 2, 4)) == (2, 3, 4)
        assert first_mismatch(S(1, 2, 3), S(1, 0, 4), upto=0) is None

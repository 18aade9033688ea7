import random
from fractions import Fraction as F

import pytest

from ellprym.errors import (DivisionByZeroSeries, InsufficientPrecision,
                            NonDivisibleValuation, NotAnNthPower,
                            SingularJacobian, ValuationError)
from ellprym.scalars import FieldSpec
from ellprym.series import (TruncatedSeries, newton_solve, series_arith,
                            transform_form)

Q = FieldSpec(1)
Q3 = FieldSpec(3)


def S(start, coeffs, prec=None, field=Q):
    return TruncatedSeries.from_coefficients(field, start, coeffs, prec)


def test_product_of_binomials():
    out = series_arith(S(0, [1, 1], 10), S(0, [1, -1], 10), "mul")
    assert out == S(0, [1, 0, -1], 10)


def test_laurent_quotient():
    out = series_arith(S(2, [1], 10), S(3, [1], 10), "div")
    assert out.valuation == -1
    assert out.coefficient(-1) == Q.one()


def test_geometric_series():
    out = series_arith(S(0, [1], 8), S(0, [1, -1], 8), "div")
    assert out == S(0, [1] * 8, 8)


def test_division_by_zero_series():
    with pytest.raises(DivisionByZeroSeries):
        series_arith(S(0, [1], 5), TruncatedSeries.zero(Q, 5), "div")


def test_precision_propagation_rules():
    a = S(0, [1, 2, 3], 3)
    b = S(1, [4, 5], 9)
    assert (a + b).prec == 3
    assert (a * b).prec == min(0 + 9, 1 + 3)
    q = a / b
    assert q.valuation == -1
    # relative precision of a quotient is the min of the operands'
    assert q.prec - q.valuation == min(3 - 0, 9 - 1)


def test_zero_series_tracks_precision():
    z = TruncatedSeries.zero(Q, 6)
    assert z.is_zero() and z.prec == 6
    assert (z * S(2, [1], 10)).prec == 8


def test_residue_examples():
    assert S(-1, [1, 2, 1], 5).residue() == Q.one()
    assert S(-2, [1], 5).residue() == Q.zero()   # window includes -1
    # (z^2 u)/(z^3) with u = 3 + z
    f = (S(2, [1], 12) * S(0, [3, 1], 12)) / S(3, [1], 12)
    assert f.residue() == Q.scalar(3)


def test_residue_requires_window():
    bad = S(-4, [1, 1], -1)
    with pytest.raises(InsufficientPrecision):
        bad.residue()


def test_coefficient_outside_window():
    with pytest.raises(InsufficientPrecision):
        S(0, [1], 3).coefficient(5)


def test_nth_root_perfect_cube():
    assert S(0, [1, 3, 3, 1], 10).nth_root(3) == S(0, [1, 1], 10)


def test_nth_root_monomial():
    out = S(2, [1], 10).nth_root(2)
    assert out.valuation == 1 and out.coefficient(1) == Q.one()


def test_nth_root_derived_oracle():
    """Cube the result and compare coefficients: the independent check."""
    f = S(0, [8, 1], 6, field=Q3)
    r = f.nth_root(3)
    assert r.coefficient(0) == Q3.scalar(2)
    assert r.coefficient(1) == Q3.scalar(F(1, 12))
    cube = r * r * r
    assert (cube - f).truncate(min(cube.prec, f.prec)).is_zero()


def test_nth_root_errors():
    with pytest.raises(NonDivisibleValuation):
        S(1, [1], 5).nth_root(2)
    with pytest.raises(NotAnNthPower):
        S(0, [2, 1], 5).nth_root(3)
    with pytest.raises(NotAnNthPower):
        TruncatedSeries.from_coefficients(Q3, 0, [Q3.zeta()], 5).nth_root(3)


def test_nth_root_property_randomized():
    rng = random.Random(4242)
    leads = {2: [1, 4, 9], 3: [1, 8, 27], 5: [1, 32]}
    for _ in range(20):
        n = rng.choice([2, 3, 5])
        lead = F(rng.choice(leads[n]))
        coeffs = [lead] + [F(rng.randint(-5, 5), rng.randint(1, 4))
                           for _ in range(7)]
        f = S(0, coeffs, 8)
        g = f.nth_root(n)
        power = g
        for _ in range(n - 1):
            power = power * g
        assert (power - f).truncate(min(power.prec, f.prec)).is_zero()


def test_newton_binomial_series():
    big = 12
    coeffs = [S(0, [-1, -1], big), TruncatedSeries.zero(Q, big), S(0, [1], big)]
    y = newton_solve(coeffs, S(0, [1], 1), 6)
    assert y.coefficient(0) == Q.one()
    assert y.coefficient(1) == Q.scalar(F(1, 2))
    assert y.coefficient(2) == Q.scalar(F(-1, 8))


def test_newton_linear():
    big = 8
    coeffs = [S(1, [-1], big), S(0, [1], big)]   # y - z = 0
    y = newton_solve(coeffs, TruncatedSeries.zero(Q, 1), 6)
    assert y == S(1, [1], 6)


def test_newton_on_curve_derived():
    """y on y^2 = x^3 + 1 at (2, 3), t = x - 2; substitute back to check."""
    big = 12
    x = S(0, [2, 1], big)
    rhs = x * x * x + S(0, [1], big)
    coeffs = [-rhs, TruncatedSeries.zero(Q, big), S(0, [1], big)]
    y = newton_solve(coeffs, S(0, [3], 1), 8)
    assert y.coefficient(0) == Q.scalar(3)
    assert y.coefficient(1) == Q.scalar(2)     # 3x^2/(2y) at (2,3)
    assert ((y * y) - rhs).truncate(8).is_zero()


def test_newton_singular_jacobian():
    big = 8
    coeffs = [S(2, [-1], big), TruncatedSeries.zero(Q, big), S(0, [1], big)]
    with pytest.raises(SingularJacobian):
        newton_solve(coeffs, TruncatedSeries.zero(Q, 1), 6)


def test_reversion_identity():
    f = S(1, [1], 7)
    assert f.reversion() == S(1, [1], 7)


def test_reversion_scaling():
    g = S(1, [2], 7).reversion()
    assert g.coefficient(1) == Q.scalar(F(1, 2))


def test_reversion_against_lagrange_inversion():
    """Independent oracle: g_n = [z^(n-1)] (z/f)^n / n."""
    f = S(1, [1, 1], 9)  # z + z^2
    g = f.reversion()
    unit = f / S(1, [1], 12)       # f/z
    for n in range(1, 8):
        power = S(0, [1], 10)
        for _ in range(n):
            power = power / unit
        expect = power.coefficient(n - 1) * F(1, n)
        assert g.coefficient(n) == expect
    assert g.coefficient(1) == Q.one()
    assert g.coefficient(2) == Q.scalar(-1)
    assert g.coefficient(3) == Q.scalar(2)


def test_reversion_requires_valuation_one():
    with pytest.raises(ValuationError):
        S(2, [1], 6).reversion()


def test_reversion_round_trip():
    rng = random.Random(99)
    for _ in range(10):
        coeffs = [F(rng.choice([1, 2, 3]))] + \
            [F(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(6)]
        f = S(1, coeffs, 8)
        assert (f.reversion().reversion() - f).truncate(8).is_zero()


def test_residue_reparametrization_invariance():
    """Residues survive unit substitutions z = u(1 + c1 u + ...)."""
    rng = random.Random(20250809)
    for _ in range(100):
        coeffs = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(9)]
        if coeffs[0] == 0:
            coeffs[0] = F(1)
        pole = rng.choice([-1, -2, -3])
        f = TruncatedSeries.from_coefficients(Q3, pole, coeffs, pole + 9)
        subst = [F(1)] + [F(rng.randint(-3, 3), rng.randint(1, 3))
                          for _ in range(10)]
        phi = TruncatedSeries.from_coefficients(Q3, 1, subst, 12)
        assert transform_form(f, phi).residue() == f.residue()


def test_series_json_round_trip():
    f = TruncatedSeries.from_coefficients(
        Q3, -2, [Q3.zeta(), Q3.one(), Q3.scalar(F(5, 7))], 4)
    assert TruncatedSeries.from_json(Q3, f.to_json()) == f

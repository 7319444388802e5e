from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from nagraded.field import INF, FieldElem, rat, rat_text, t, u

from strategies import field_elems

U = sympy.Symbol("u")


def to_sympy(x: FieldElem):
    """Independent rendering of an element as a sympy rational function in u."""
    if x.is_zero:
        return sympy.Integer(0)
    num = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * U ** (i + x.k)
              for i, c in enumerate(x.num))
    den = sum(sympy.Rational(int(c.numerator), int(c.denominator)) * U ** i
              for i, c in enumerate(x.den))
    return num / den


def sympy_val(expr, N) -> Fraction:
    """Valuation via sympy: order of the numerator minus order of the denominator."""
    n, d = sympy.fraction(sympy.cancel(sympy.together(expr)))
    def order(p):
        poly = sympy.Poly(sympy.expand(p * U ** 20), U)
        return min(m[0] for m in poly.monoms()) - 20
    return Fraction(order(n) - order(d), N)


def test_val_of_t_is_one():
    assert t().val() == 1


def test_val_of_zero_is_inf():
    assert FieldElem.zero().val() == INF


def test_val_of_rational_function_example():
    x = FieldElem.from_laurent({2: 1, 3: 1}, [1, -1])
    assert x.val() == 2
    assert sympy_val(to_sympy(x), 1) == 2


def test_add_inverse_is_zero():
    assert (t() + (-t())).is_zero


def test_sqrt_t_squared_is_t():
    h = FieldElem.tpow(Fraction(1, 2), 1, 2)
    assert h * h == t(2)
    assert (h * h).val() == 1


def test_inverse_of_one_minus_t():
    x = (FieldElem.one() - t()).inv()
    assert x.val() == 0
    assert x * (FieldElem.one() - t()) == FieldElem.one()


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        FieldElem.zero().inv()


def test_ramify_examples():
    x = t().ramify(2)
    assert x.N == 2 and x.k == 2 and x.val() == 1
    assert FieldElem.one().ramify(5) == FieldElem.one()


@given(field_elems(), st.integers(1, 4))
def test_ramify_keeps_valuation(x, M):
    assert x.ramify(M).val() == x.val()
    assert x.ramify(M) == x
    assert hash(x.ramify(M)) == hash(x)


@given(field_elems(N=1), field_elems(N=1))
def test_arithmetic_matches_sympy(x, y):
    X, Y = to_sympy(x), to_sympy(y)
    assert sympy.simplify(to_sympy(x + y) - (X + Y)) == 0
    assert sympy.simplify(to_sympy(x * y) - X * Y) == 0
    assert sympy.simplify(to_sympy(x - y) - (X - Y)) == 0
    if not y.is_zero:
        assert sympy.simplify(to_sympy(x / y) - X / Y) == 0


@given(field_elems(N=1, nonzero=True))
def test_valuation_matches_sympy(x):
    assert x.val() == sympy_val(to_sympy(x), 1)


@given(field_elems(), field_elems())
def test_ultrametric(x, y):
    s = x + y
    assert s.val() >= min(x.val(), y.val())
    if x.val() != y.val():
        assert s.val() == min(x.val(), y.val())


@given(field_elems(), field_elems())
def test_multiplicative(x, y):
    assert (x * y).val() == x.val() + y.val()


@given(field_elems())
def test_canonical_form(x):
    if not x.is_zero:
        assert x.num[0] != 0 and x.den[0] == 1


@given(field_elems())
def test_text_round_trip(x):
    y = FieldElem.from_text(x.to_text(), x.N)
    assert y == x and y.to_text() == x.to_text()


def test_text_format():
    x = FieldElem.from_laurent({1: 2}, [1, Fraction(-1, 2)])
    assert x.to_text() == "(2/1*u^1)/(1/1*u^0 + -1/2*u^1)"
    assert FieldElem.zero().to_text() == "0"


def test_mixed_ramification_is_lifted():
    assert (u(2) * u(3)).val() == Fraction(1, 2) + Fraction(1, 3)


def test_rat_helpers():
    assert rat("3/6") == Fraction(1, 2)
    assert rat_text(Fraction(-4, 6)) == "-2/3"
    with pytest.raises(TypeError):
        rat(0.5)


@pytest.mark.parametrize("text,expr", [
    ("1", "1"), ("u^2", "U**2"), ("-u + 3/2", "-U + 3/2"), ("2u^-1", "2/U"),
    ("(1 + 2*u)/(1 - u)", "(1 + 2*U)/(1 - U)"), ("1 - -u", "1 + U"),
])
def test_from_text_shorthand(text, expr):
    U = sympy.Symbol("U")
    got = to_sympy(FieldElem.from_text(text))
    assert sympy.simplify(got.subs(sympy.Symbol("u"), U) - sympy.sympify(expr, locals={"U": U})) == 0


@pytest.mark.parametrize("text", ["", "1*", "u^", "+", "2 x", "(1)/(0)"])
def test_from_text_rejects(text):
    with pytest.raises((ValueError, ZeroDivisionError)):
        FieldElem.from_text(text)

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from qradial.coeff import (
    ONE,
    Q,
    T,
    ZERO,
    PoleError,
    RatFunc,
    eval_rational,
    q_fact,
    q_int,
    specialize_t,
)

sq, st_ = sp.symbols("q t")


def to_sympy(a: RatFunc):
    return sp.sympify(str(a).replace("^", "**"), locals={"q": sq, "t": st_})


def test_cancellation_to_polynomial():
    assert (Q**2 - 1) / (Q - 1) == Q + 1
    assert str((Q**2 - 1) / (Q - 1)) == "1 + q"


def test_one_minus_t_squared_over_one_minus_t():
    assert (1 - T**2) / (1 - T) * ONE == 1 + T


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        Q / ZERO


def test_canonical_string_form():
    a = (1 - T**2) / (1 - Q**2 * T**2)
    assert str(a) == "(1 - t^2)/(1 - q^2*t^2)"
    assert RatFunc.parse(str(a)) == a
    assert str(Q**-1) == "q^-1"


def test_sign_normalization_is_structural():
    assert (T - 1) / (Q - 1) == (1 - T) / (1 - Q)
    assert hash((T - 1) / (Q - 1)) == hash((1 - T) / (1 - Q))


def test_parser_accepts_caret_and_star():
    assert RatFunc.parse("2*q^2 - t*q + 3") == 2 * Q**2 - T * Q + 3
    assert RatFunc("q^-2*t") == T / Q**2


def test_q_int_examples():
    assert q_int(2, "t2") == 1 + T**2
    assert q_int(0, "q") == ZERO
    assert q_fact(2, "t2") == 1 + T**2
    assert q_int(-2, "q") == (1 - Q**-2) / (1 - Q**-1)


def test_specialize_examples():
    assert specialize_t((1 - T**2) / (1 - T), 2) == 1 + Q**2
    assert specialize_t(T * Q, 1) == Q**2
    with pytest.raises(PoleError):
        specialize_t(1 / (T - Q**2), 2)


def test_eval_examples():
    assert eval_rational(Q + T, 2, 3) == 5
    assert eval_rational((Q**2 - 1) / (Q - 1), 2, Fraction(7, 5)) == 3
    with pytest.raises(PoleError):
        eval_rational(1 / (Q - 1), 1, 1)


# random rational functions built from small polynomials
small_poly = st.lists(
    st.tuples(st.integers(-2, 3), st.integers(0, 3), st.integers(-4, 4)), min_size=1, max_size=4
).map(lambda ts: sum((c * Q**a * T**b for a, b, c in ts), ZERO))
nonzero_poly = small_poly.filter(lambda p: not p.is_zero())
ratfuncs = st.tuples(small_poly, nonzero_poly).map(lambda nd: nd[0] / nd[1])
points = st.tuples(
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
    st.fractions(min_value=-5, max_value=5, max_denominator=7),
)


@settings(max_examples=200, deadline=None)
@given(ratfuncs, ratfuncs, points)
def test_eval_is_a_homomorphism(a, b, pt):
    q0, t0 = pt
    try:
        va, vb = eval_rational(a, q0, t0), eval_rational(b, q0, t0)
    except PoleError:
        return
    for op in ("add", "sub", "mul"):
        lhs = {"add": a + b, "sub": a - b, "mul": a * b}[op]
        rhs = {"add": va + vb, "sub": va - vb, "mul": va * vb}[op]
        try:
            assert eval_rational(lhs, q0, t0) == rhs
        except PoleError:
            pass
    if vb != 0 and not b.is_zero():
        try:
            assert eval_rational(a / b, q0, t0) == va / vb
        except PoleError:
            pass


@settings(max_examples=100, deadline=None)
@given(ratfuncs, ratfuncs)
def test_arithmetic_matches_sympy(a, b):
    lhs = to_sympy(a * b + a - b)
    rhs = to_sympy(a) * to_sympy(b) + to_sympy(a) - to_sympy(b)
    assert sp.simplify(lhs - rhs) == 0


@settings(max_examples=100, deadline=None)
@given(ratfuncs)
def test_normalization_idempotent(a):
    again = RatFunc.parse(str(a))
    assert again == a
    assert str(again) == str(a)
    assert again.num == a.num and again.den == a.den


@settings(max_examples=100, deadline=None)
@given(ratfuncs.filter(lambda a: not a.is_zero()))
def test_inverse(a):
    assert a * a.inverse() == ONE


@settings(max_examples=80, deadline=None)
@given(ratfuncs, ratfuncs, st.integers(1, 3))
def test_specialize_multiplicative(a, b, k):
    try:
        sa, sb = specialize_t(a, k), specialize_t(b, k)
    except PoleError:
        return
    assert specialize_t(a * b, k) == sa * sb
    assert not sa.involves_t()

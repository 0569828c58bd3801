"""Function-field tests: canonical forms, evaluation, derivatives, valuations."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyreg.funcfield import (
    PoleError,
    Valuation,
    const,
    one_minus,
    ord_at,
    parse_function,
    rf_arith,
    rf_dir_derivative,
    rf_eval,
    unit_part,
    var,
)

t = var("t")


def test_one_minus():
    assert one_minus(t) == parse_function("1-t")


def test_field_axiom_inverse():
    f = parse_function("(t^2+1)/(t-1)")
    assert rf_arith("mul", f, rf_arith("div", const(1), f)) == const(1)


def test_cancellation_with_eval_certificate():
    f = parse_function("(t+1)/(t-1)")
    g = parse_function("(t-1)/(t+2)")
    h = f * g
    assert h == parse_function("(t+1)/(t+2)")
    rng = random.Random(11)
    for _ in range(5):
        z = complex(rng.uniform(2, 4), rng.uniform(1, 3))
        assert abs(rf_eval(h, z) - rf_eval(f, z) * rf_eval(g, z)) < 1e-12


def test_univariate_canonical_monic_gcd():
    f = parse_function("(2*t^2-2)/(4*t-4)")  # reduces to (t+1)/2
    assert str(f.den) == "1"
    assert f == parse_function("(t+1)/2")


def test_eval_examples():
    assert abs(rf_eval(parse_function("t^2+1"), 1j)) < 1e-15
    with pytest.raises(PoleError):
        rf_eval(parse_function("1/t"), 0)
    assert rf_eval(parse_function("(2+t)/(1+t)"), 1) == pytest.approx(1.5)


def test_dir_derivative_examples():
    assert rf_dir_derivative(parse_function("t^2"), 3, 1) == pytest.approx(6)
    assert rf_dir_derivative(const(7), {"_": 2.0}, {"_": 1.0}) == 0
    assert rf_dir_derivative(parse_function("1/t"), 2, 1) == pytest.approx(-0.25)


def test_dir_derivative_vs_central_difference():
    rng = random.Random(5)
    fs = [
        parse_function("(t^2+1)/(t-1)"),
        parse_function("(t^3-2*t)/(t^2+3)"),
        parse_function("(x*y-1)/(x+y)"),
    ]
    for f in fs:
        names = f.variables()
        for _ in range(10):
            x = {n: complex(rng.uniform(2, 3), rng.uniform(1, 2)) for n in names}
            v = {n: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for n in names}
            h = 1e-6
            plus = rf_eval(f, {n: x[n] + h * v[n] for n in names})
            minus = rf_eval(f, {n: x[n] - h * v[n] for n in names})
            fd = (plus - minus) / (2 * h)
            exact = rf_dir_derivative(f, x, v)
            assert abs(fd - exact) <= 1e-6 * (1 + abs(exact))


def test_ord_examples():
    v0 = Valuation.finite(0)
    assert ord_at(parse_function("t^3/(1+t)"), v0) == 3
    assert ord_at(t, Valuation.finite(1)) == 0
    assert ord_at(parse_function("(t^2+1)/t^5"), Valuation.infinity()) == 3


def test_unit_part_examples():
    v0 = Valuation.finite(0)
    assert unit_part(parse_function("t^2*(2+t)"), v0) == 2
    assert unit_part(parse_function("(2+t)/(1+t)"), v0) == 2
    assert unit_part(parse_function("t^3"), Valuation.infinity()) == 1


POOL = ["t", "1-t", "t+2", "(t-1)/(t+1)", "t^2", "(2+t)/(1+t)", "t-3", "2", "1/2"]
PLACES = [Valuation.finite(0), Valuation.finite(1), Valuation.finite(-1),
          Valuation.finite(Fraction(1, 2)), Valuation.infinity()]


@given(st.lists(st.sampled_from(POOL), min_size=2, max_size=4),
       st.sampled_from(range(len(PLACES))))
@settings(max_examples=80, deadline=None)
def test_ord_is_additive_and_unit_multiplicative(names, vi):
    v = PLACES[vi]
    fs = [parse_function(s) for s in names]
    prod = fs[0]
    for f in fs[1:]:
        prod = prod * f
    assert ord_at(prod, v) == sum(ord_at(f, v) for f in fs)
    u = Fraction(1)
    for f in fs:
        u *= unit_part(f, v)
    assert unit_part(prod, v) == u


def test_ord_ultrametric():
    v = Valuation.finite(0)
    f = parse_function("t^2")
    g = parse_function("t^3+t^2")
    assert ord_at(f + g, v) >= min(ord_at(f, v), ord_at(g, v))
    h = parse_function("t^5")
    assert ord_at(f + h, v) == min(ord_at(f, v), ord_at(h, v))  # distinct orders


def test_zero_function_errors():
    with pytest.raises(ValueError):
        ord_at(const(0), Valuation.finite(0))
    with pytest.raises(ZeroDivisionError):
        rf_arith("div", t, const(0))


def test_parser_precedence_and_errors():
    assert parse_function("1+2*t^2") == const(1) + const(2) * t * t
    assert parse_function("-t^2") == -(t * t)
    assert parse_function("(x*y - 1)/(x + y)").variables() == ("x", "y")
    with pytest.raises(ValueError):
        parse_function("t +")
    with pytest.raises(ValueError):
        parse_function("(t")


def test_multivariate_equality_by_cross_multiplication():
    f = parse_function("(x^2-y^2)/(x-y)")
    g = parse_function("x+y")
    assert f.equals(g)
    assert f != g  # canonical forms differ (no multivariate gcd)


def test_key_is_total_order_on_canonical_forms():
    fs = [parse_function(s) for s in POOL]
    keys = [f.key() for f in fs]
    assert len(set(keys)) == len(set(fs))
    assert sorted(keys) == sorted(keys, key=str)

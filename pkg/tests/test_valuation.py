from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from daggerlim.valuation import (
    LogValue,
    Mode,
    PolyRadius,
    as_fraction,
    fmt_rational,
    logval_mul,
    monomial_log_norm,
    padic_valuation,
)

from .conftest import rationals

INF = LogValue.inf()


@pytest.mark.parametrize(
    "a, b, expected",
    [
        (LogValue(1), LogValue(2), LogValue(3)),
        (INF, LogValue(-3), INF),
        (LogValue(F(1, 2)), LogValue(F(-1, 3)), LogValue(F(1, 6))),
    ],
)
def test_logval_mul_examples(a, b, expected):
    assert logval_mul(a, b) == expected


@pytest.mark.parametrize(
    "v, exps, e, expected",
    [
        (0, (1, 0), (1, 0), 1),
        (1, (2, 0), (F(1, 2), 0), 2),
        (-2, (3, 3), (F(1, 3), F(1, 3)), 0),
    ],
)
def test_monomial_log_norm_examples(v, exps, e, expected):
    assert monomial_log_norm(LogValue(v), exps, PolyRadius.closed(*e)) == LogValue(expected)


def test_infinity_orders_last_and_means_smallest_absolute_value():
    assert LogValue(10**9) < INF
    assert not INF < INF
    assert LogValue(0).abs_less(LogValue(-1))
    assert INF.abs_less(LogValue(5))


@given(rationals(), rationals(), rationals())
def test_logval_mul_associative_commutative(a, b, c):
    a, b, c = LogValue(a), LogValue(b), LogValue(c)
    assert logval_mul(logval_mul(a, b), c) == logval_mul(a, logval_mul(b, c))
    assert logval_mul(a, b) == logval_mul(b, a)


@given(rationals(), st.integers(0, 20), st.integers(0, 20), rationals(), rationals())
def test_monomial_log_norm_affine(v, i, j, ex, ey):
    r = PolyRadius.closed(ex, ey)
    f = lambda v, i, j: monomial_log_norm(LogValue(v), (i, j), r).v
    # exact first differences are constant in each argument
    assert f(v + 1, i, j) - f(v, i, j) == 1
    assert f(v, i + 1, j) - f(v, i, j) == ex
    assert f(v, i, j + 1) - f(v, i, j) == ey
    assert f(v, i + 2, j) - 2 * f(v, i + 1, j) + f(v, i, j) == 0


@given(rationals(), st.integers(0, 20), st.integers(0, 20), rationals(), rationals(), rationals().map(abs))
def test_monomial_log_norm_monotone_in_radius_exponent(v, i, j, ex, ey, bump):
    lo = monomial_log_norm(LogValue(v), (i, j), PolyRadius.closed(ex, ey))
    assert monomial_log_norm(LogValue(v), (i, j), PolyRadius.closed(ex + bump, ey)) >= lo
    assert monomial_log_norm(LogValue(v), (i, j), PolyRadius.closed(ex, ey + bump)) >= lo


@pytest.mark.parametrize("q, p, v", [(F(12), 2, 2), (F(3, 8), 2, -3), (F(-45, 7), 3, 2), (F(5), 5, 1), (F(1, 10), 5, -1)])
def test_padic_valuation(q, p, v):
    assert padic_valuation(q, p) == LogValue(v)


def test_padic_valuation_of_zero_is_inf():
    assert padic_valuation(0, 2).is_inf


def test_rational_serialization_is_canonical():
    assert fmt_rational(F(6, -4)) == "-3/2"
    assert fmt_rational(3) == "3/1"
    assert LogValue(F(2, 4)).to_json() == "1/2"
    assert INF.to_json() == "inf"
    assert LogValue.from_json("inf") == INF
    assert LogValue.from_json("-3/2") == LogValue(F(-3, 2))


@pytest.mark.parametrize("bad", ["0.5", "1e3", "", "x"])
def test_as_fraction_refuses_inexact_text(bad):
    with pytest.raises(ValueError):
        as_fraction(bad)


def test_as_fraction_refuses_floats():
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_polyradius_json_round_trip_and_hull():
    r = PolyRadius((F(1, 3), F(0)), (Mode.DAGGER, Mode.OPEN))
    assert PolyRadius.from_json(r.to_json()) == r
    assert r.closed_hull().is_closed() and r.closed_hull().exps == r.exps
    assert r.radii()[0].inverse().e == F(-1, 3)

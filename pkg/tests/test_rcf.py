from fractions import Fraction

import pytest
from hypothesis import given

from parity_cf.errors import PrecisionExhausted, RationalInputError
from parity_cf.exact_arith import QuadraticSurd, floor_surd
from parity_cf.rcf import DecimalInterval, RcfStream, convergents, intermediates, rcf_expand

from conftest import surds


def test_known_expansions(rt2m1, phi):
    assert rcf_expand(rt2m1).terms(6) == [0, 2, 2, 2, 2, 2]
    assert rcf_expand(phi).terms(5) == [1, 1, 1, 1, 1]
    assert rcf_expand(QuadraticSurd.sqrt(7)).terms(9) == [2, 1, 1, 1, 4, 1, 1, 1, 4]
    assert rcf_expand(QuadraticSurd(3, -7, 5, 13)).terms(4) == [-5, 1, 1, 4]


def test_period(rt2m1):
    assert RcfStream(rt2m1).period == (1, 1)
    assert RcfStream(QuadraticSurd.sqrt(7)).period == (1, 4)


@given(surds())
def test_regenerate_from_period(x):
    s = RcfStream(x)
    start, length = s.period
    n = start + 3 * length
    assert s.regenerate(n) == RcfStream(x).terms(n)


@given(surds())
def test_terms_are_floors(x):
    s = RcfStream(x)
    y = x
    for n in range(8):
        a = floor_surd(y)
        assert s[n] == a
        if n:
            assert a >= 1
        y = 1 / (y - a)


@given(surds())
def test_determinant_identity(x):
    s = RcfStream(x)
    for n in range(0, 12):
        c1, c0 = s.convergent(n), s.convergent(n - 1)
        assert c1.p * c0.q - c0.p * c1.q == (-1) ** (n + 1)


@given(surds())
def test_convergents_alternate_and_improve(x):
    s = RcfStream(x)
    prev = None
    for n in range(10):
        c = s.convergent(n)
        err = c.q * x - c.p
        assert (err > 0) == (n % 2 == 0)
        if prev is not None:
            assert abs(err) < abs(prev)
        prev = err


def test_intermediates(rt2m1):
    s = RcfStream(rt2m1)
    assert [r.value for r in intermediates(s, 3)] == [Fraction(1), Fraction(1, 3), Fraction(3, 7)]
    with pytest.raises(IndexError):
        s.intermediate(1, 2)
    assert convergents(s, 1)[0].p == 1 and convergents(s, 1)[0].q == 0


def test_rational_rejected():
    with pytest.raises(RationalInputError):
        RcfStream(QuadraticSurd(1, 1, 1, 9))
    with pytest.raises(RationalInputError):
        RcfStream(DecimalInterval.parse("0.5"))


def test_decimal_interval(rt2m1):
    s = rcf_expand("0.4142135")
    exact = RcfStream(rt2m1)
    n = s.certified
    assert n >= 5
    assert s.terms(n) == exact.terms(n)
    with pytest.raises(PrecisionExhausted) as info:
        s[n]
    assert info.value.certified == n
    assert s.period is None


def test_negative_decimal():
    s = rcf_expand("-1.41421356")
    assert s.terms(4) == [-2, 1, 1, 2]


def test_bad_decimal():
    assert not DecimalInterval.looks_like("sqrt(2)")
    with pytest.raises(ValueError):
        DecimalInterval.parse("1.2.3")

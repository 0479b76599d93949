from fractions import Fraction

import pytest
from hypothesis import given

from parity_cf.exact_arith import SYMBOLS, Sym, third
from parity_cf.parity_best import (
    PAIRS, Limit, as_limit, best_alpha, best_alpha_beta, best_class, best_set,
    intermediate_memberships, iter_signed_records, p0_memberships, parity_of,
    s_alpha_classify, s_alpha_set, signed_best_set,
)
from parity_cf.rcf import RcfStream

from conftest import surds

Z, O, I = Sym.ZERO, Sym.ONE, Sym.INF


def vals(recs):
    return [r.value for r in recs]


def fr(*xs):
    return [Fraction(x) for x in xs]


def test_golden_rt2(rt2m1):
    s = RcfStream(rt2m1)
    assert vals(best_set(s, "n:4")) == fr(0, "1/2", "2/5", "5/12")
    assert vals(signed_best_set(s, "q:7")) == fr(0, 1, "1/2", "1/3", "2/5", "3/7")
    assert vals(s_alpha_set(s, Z, "n:3")) == fr(1, "3/7", "17/41")
    assert vals(s_alpha_set(s, I, "n:2")) == fr("1/3", "7/17")
    assert vals(s_alpha_set(s, O, "q:10000")) == []
    assert vals(best_alpha(s, Z, "n:3")) == fr(0, "2/5", "12/29")
    assert vals(best_alpha(s, O, "n:3")) == fr(1, "1/3", "3/7")
    assert vals(best_alpha(s, I, "n:2")) == fr("1/2", "5/12")
    assert vals(best_alpha_beta(s, {Z, O}, "n:3")) == fr(0, "1/3", "2/5")
    assert vals(best_alpha_beta(s, {Z, I}, "n:3")) == fr(0, "1/2", "2/5")
    assert vals(best_alpha_beta(s, {O, I}, "n:3")) == fr(1, "1/2", "3/7")


def test_golden_phi(phi):
    s = RcfStream(phi)
    assert vals(best_set(s, "n:4")) == fr(2, "3/2", "5/3", "8/5")
    recs = signed_best_set(s, "n:4")
    assert vals(recs) == fr(1, 2, "3/2", "5/3")
    p0 = recs[0]
    # p0 = a0 is signed-best but not best, classed by the parity of a0 + 1
    assert not p0.in_B and p0.s_class is Z
    assert p0.memberships == p0_memberships(s)


def test_counterexample_pair(rt2m1):
    s = RcfStream(rt2m1)
    r = next(r for r in signed_best_set(s, "q:7") if r.value == Fraction(3, 7))
    assert r.parity is O and not r.in_best({Z, O})
    assert abs(5 * rt2m1 - 2) < abs(7 * rt2m1 - 3)


def test_limit_parsing():
    assert Limit.parse("q:50") == Limit(max_den=50)
    assert Limit.parse(" n : 3 ") == Limit(count=3)
    assert Limit.parse("") == Limit(count=0)
    assert as_limit(12) == Limit(max_den=12)
    with pytest.raises(ValueError):
        Limit.parse("z:3")
    assert str(Limit(max_den=5)) == "q:5"
    assert Limit(max_den=3, count=2).take(fr(1, "1/2", "1/3", "1/4")) == fr(1, "1/2")


def test_empty_limit(rt2m1):
    assert best_set(RcfStream(rt2m1), "") == []


@given(surds())
def test_denominators_increase(x):
    recs = signed_best_set(RcfStream(x), "q:2000")
    qs = [r.q for r in recs]
    assert qs[:2] == [1, 1] or qs[0] == 1
    assert all(a < b for a, b in zip(qs[1:], qs[2:]))
    assert all(r.value.denominator == r.q for r in recs)


@given(surds())
def test_partition_by_class(x):
    s = RcfStream(x)
    S = set(vals(signed_best_set(s, "q:3000")))
    parts = [set(vals(best_alpha(s, a, "q:3000"))) for a in SYMBOLS]
    assert set().union(*parts) == S
    assert sum(map(len, parts)) == len(S)


@given(surds())
def test_pair_intersections(x):
    s = RcfStream(x)
    B = set(vals(best_set(s, "q:3000")))
    for a in SYMBOLS:
        b, c = [t for t in SYMBOLS if t is not a]
        lhs = set(vals(best_alpha_beta(s, {a, b}, "q:3000"))) & set(
            vals(best_alpha_beta(s, {a, c}, "q:3000")))
        assert lhs == {v for v in B if parity_of(v) is a}


@given(surds())
def test_s_alpha_partition_of_s_minus_b(x):
    s = RcfStream(x)
    S = set(vals(signed_best_set(s, "q:3000")))
    B = set(vals(best_set(s, "q:3000")))
    parts = [set(vals(s_alpha_set(s, a, "q:3000"))) for a in SYMBOLS]
    assert set().union(*parts) == S - B
    assert sum(map(len, parts)) == len(S - B)


@given(surds())
def test_pair_is_b_part_plus_third_s_class(x):
    s = RcfStream(x)
    B = vals(best_set(s, "q:2000"))
    for pair in PAIRS:
        gamma = third(*pair)
        expect = {v for v in B if parity_of(v) in pair} | set(vals(s_alpha_set(s, gamma, "q:2000")))
        assert set(vals(best_class(s, pair, "q:2000"))) == expect


@given(surds())
def test_local_membership_rules(x):
    s = RcfStream(x)
    for rec in iter_signed_records(s, 500):
        assert s_alpha_classify(rec, s) is rec.s_class
        if rec.kind == "intermediate":
            assert rec.memberships == intermediate_memberships(*rec.index, s)


def test_best_class_dispatch(rt2m1):
    s = RcfStream(rt2m1)
    assert vals(best_class(s, set(SYMBOLS), "n:3")) == vals(best_set(s, "n:3"))
    assert vals(best_class(s, O, "n:3")) == vals(best_alpha(s, O, "n:3"))
    with pytest.raises(ValueError):
        best_alpha_beta(s, {O}, "n:1")


def test_p0_rule_requires_a1_one(rt2m1):
    with pytest.raises(ValueError):
        p0_memberships(RcfStream(rt2m1))

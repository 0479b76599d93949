from fractions import Fraction

from hypothesis import given, settings

from parity_cf.exact_arith import SYMBOLS, QuadraticSurd, Sym
from parity_cf.oracle import (
    DEFAULT_SEED, PKind, ParallelogramSpec, ParityLattice, Vec2, _Errors,
    brute_best, brute_best_class, brute_s_alpha, brute_signed, default_seed,
    definitional_best, definitional_s_alpha, definitional_signed, geometric_best_check,
    lattice_points, lemma21_property, parallelogram_contains, sample_surds, vector_report,
)
from parity_cf.parity_best import PAIRS

from conftest import surds

Z, O, I = Sym.ZERO, Sym.ONE, Sym.INF


def fr(*xs):
    return [Fraction(x) for x in xs]


def test_golden_rt2(rt2m1):
    x = rt2m1
    assert brute_best(x, 12) == fr(0, "1/2", "2/5", "5/12")
    assert brute_signed(x, 7) == fr(0, 1, "1/2", "1/3", "2/5", "3/7")
    assert brute_best_class(x, 5, {Z, O}) == fr(0, "1/3", "2/5")
    assert brute_best_class(x, 7, O) == fr(1, "1/3", "3/7")
    assert brute_best_class(x, 12, "inf") == fr("1/2", "5/12")
    assert brute_s_alpha(x, 41, Z) == fr(1, "3/7", "17/41")
    assert brute_s_alpha(x, 17, I) == fr("1/3", "7/17")
    assert brute_s_alpha(x, 500, O) == []


def test_a1_one(phi):
    assert brute_best(phi - 1, 1) == fr(1)
    assert brute_signed(phi, 2) == fr(1, 2, "3/2")


@settings(max_examples=15)
@given(surds(max_coef=12))
def test_definitional_scans_agree(x):
    Q = 12
    assert definitional_best(x, Q) == brute_best(x, Q)
    assert definitional_signed(x, Q) == brute_signed(x, Q)
    for cls in [*SYMBOLS, *PAIRS]:
        assert definitional_best(x, Q, cls) == brute_best_class(x, Q, cls)
    for a in SYMBOLS:
        assert definitional_s_alpha(x, Q, a) == brute_s_alpha(x, Q, a)


def test_sampling_is_deterministic(monkeypatch):
    monkeypatch.delenv("PARITY_CF_SEED", raising=False)
    assert default_seed() == DEFAULT_SEED
    a = sample_surds(8)
    assert a == sample_surds(8) and len(set(a)) == 8
    assert all(not x.is_rational() for x in a)
    monkeypatch.setenv("PARITY_CF_SEED", "7")
    assert default_seed() == 7
    assert sample_surds(8) == sample_surds(8, 7) != a


def test_lattices():
    assert ParityLattice.of(Z).contains(Vec2(2, 1))
    assert not ParityLattice.of(Z).contains(Vec2(1, 1))
    assert ParityLattice.of(I).contains(Vec2(1, 2))
    assert Vec2(2, 4).is_primitive() is False
    assert -Vec2(3, 7) == Vec2(-3, -7)


def test_parallelograms(rt2m1):
    E = _Errors(rt2m1)
    v = Vec2(2, 5)
    ps = ParallelogramSpec(rt2m1, v, PKind.PB)
    pts = lattice_points(E, v)
    assert Vec2(0, 0) in pts or all(not p.is_zero() for p in pts)
    assert all(parallelogram_contains(ps, p) for p in pts)
    rep = vector_report(E, v)
    assert rep.pb_primitive_free([ParityLattice.of(Z)])


@settings(max_examples=10)
@given(surds(max_coef=15))
def test_geometry_agrees_with_scans(x):
    for rep in geometric_best_check(x, 60):
        assert rep.agree, rep


def test_lemma21_runs():
    rep = lemma21_property(sample_surds(5), 300)
    assert rep.ok and rep.samples == 300
    assert rep.hyp_i > 0 and rep.hyp_ii > 0


def test_negative_inputs():
    x = QuadraticSurd(3, -7, 5, 13)
    assert brute_best(x, 30)[0] == -4

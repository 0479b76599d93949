"""Exit criteria of the build, one test per criterion.

Each test prints a PASS/FAIL line (also collected into the terminal summary)
and asserts both correctness and its runtime limit.
"""

import time
from contextlib import contextmanager
from fractions import Fraction

import pytest
from click.testing import CliRunner

from parity_cf import cli
from parity_cf.cfmaps import (
    CfMapKind, DeltaView, even_inverse_orbit, fractional_part, gauss_equals_farey_power,
    map_step, oddodd_inverse_orbit, symbolic_step,
)
from parity_cf.delta import (
    DeltaStream, cylinder, delta_expand_geometric, factorization_holds, s_alpha_words,
    theorem2_set,
)
from parity_cf.errors import InputParseError, RationalInputError
from parity_cf.exact_arith import H, SYMBOLS, Mat2, QuadraticSurd, Sym, third
from parity_cf.oracle import (
    DEFAULT_SEED, brute_best, brute_best_class, brute_s_alpha, brute_signed,
    geometric_best_check, lemma21_property, sample_surds,
)
from parity_cf.parity_best import (
    PAIRS, best_alpha, best_alpha_beta, best_class, best_set, parity_of, s_alpha_set,
    signed_best_set,
)
from parity_cf.rcf import DecimalInterval, RcfStream

from conftest import ACCEPTANCE

pytestmark = pytest.mark.acceptance

Z, O, I = Sym.ZERO, Sym.ONE, Sym.INF
RT2 = QuadraticSurd(-1, 1, 1, 2)
PHI = QuadraticSurd(1, 1, 2, 5)
SAMPLE = sample_surds(50, DEFAULT_SEED)


@contextmanager
def criterion(n: int, note: str, limit_s: float | None):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        secs = time.perf_counter() - t0
        if ok and limit_s is not None and secs >= limit_s:
            ok = False
            note += f"; over the {limit_s:g} s limit"
        ACCEPTANCE[n] = (ok, secs, note)
        print(f"{'PASS' if ok else 'FAIL'} criterion {n}: {note} ({secs:.2f} s)")
    assert secs < (limit_s or float("inf")), f"criterion {n} took {secs:.2f} s"


def fr(*xs):
    return [Fraction(x) for x in xs]


def vals(items):
    return [r.value for r in items]


def test_1_golden_examples():
    with criterion(1, "golden sets for sqrt(2)-1", 1.0):
        s, d, x = RcfStream(RT2), DeltaStream(RcfStream(RT2)), RT2
        cases = [
            (best_set(s, "n:4"), theorem2_set(d, "B", "n:4"), brute_best(x, 12),
             fr(0, "1/2", "2/5", "5/12")),
            (s_alpha_set(s, Z, "n:3"), s_alpha_words(d, Z, "n:3"), brute_s_alpha(x, 41, Z),
             fr(1, "3/7", "17/41")),
            (s_alpha_set(s, I, "n:2"), s_alpha_words(d, I, "n:2"), brute_s_alpha(x, 17, I),
             fr("1/3", "7/17")),
            (s_alpha_set(s, O, "q:1000"), s_alpha_words(d, O, "q:1000"),
             brute_s_alpha(x, 1000, O), []),
            (best_alpha(s, Z, "n:3"), theorem2_set(d, Z, "n:3"), brute_best_class(x, 29, Z),
             fr(0, "2/5", "12/29")),
            (best_alpha(s, O, "n:3"), theorem2_set(d, O, "n:3"), brute_best_class(x, 7, O),
             fr(1, "1/3", "3/7")),
            (best_alpha(s, I, "n:2"), theorem2_set(d, I, "n:2"), brute_best_class(x, 12, I),
             fr("1/2", "5/12")),
            (best_alpha_beta(s, {Z, O}, "n:3"), theorem2_set(d, {Z, O}, "n:3"),
             brute_best_class(x, 5, {Z, O}), fr(0, "1/3", "2/5")),
            (best_alpha_beta(s, {Z, I}, "n:3"), theorem2_set(d, {Z, I}, "n:3"),
             brute_best_class(x, 5, {Z, I}), fr(0, "1/2", "2/5")),
            (best_alpha_beta(s, {O, I}, "n:3"), theorem2_set(d, {O, I}, "n:3"),
             brute_best_class(x, 7, {O, I}), fr(1, "1/2", "3/7")),
        ]
        for rcf_route, delta_route, oracle_route, expect in cases:
            assert vals(rcf_route) == expect
            assert vals(delta_route) == expect
            assert oracle_route == expect


def pell(n: int) -> int:
    a, b = 1, 0  # P_{-1}, P_0
    if n == -1:
        return a
    for _ in range(n):
        a, b = b, 2 * b + a
    return b


def test_2_pell_identity_and_cylinders():
    with criterion(2, "Pell products k <= 50, cylinder families k <= 20", 1.0):
        P = pell
        block = H[I] @ H[O] @ H[Z] @ H[O]
        for k in range(1, 51):
            assert block ** k == Mat2(P(2 * k - 1), P(2 * k), P(2 * k), P(2 * k + 1))
        d = DeltaStream(RcfStream(RT2))
        for k in range(0, 21):
            families = {
                4 * k + 1: (Fraction(P(2 * k), P(2 * k + 1)),
                            Fraction(P(2 * k - 1) + P(2 * k), P(2 * k) + P(2 * k + 1))),
                4 * k + 2: (Fraction(P(2 * k), P(2 * k + 1)), Fraction(P(2 * k + 1), P(2 * k + 2))),
                4 * k + 3: (Fraction(P(2 * k) + P(2 * k + 1), P(2 * k + 1) + P(2 * k + 2)),
                            Fraction(P(2 * k + 1), P(2 * k + 2))),
                4 * k + 4: (Fraction(P(2 * k + 2), P(2 * k + 3)),
                            Fraction(P(2 * k + 1), P(2 * k + 2))),
            }
            for m, (lo, hi) in families.items():
                c = cylinder(d, m)
                assert c.bounds() == (min(lo, hi), max(lo, hi))
                assert c.contains(RT2)


def _route_sets(x, Q):
    s, d = RcfStream(x), DeltaStream(RcfStream(x))
    lim = f"q:{Q}"
    yield "B", brute_best(x, Q), vals(best_set(s, lim)), vals(theorem2_set(d, "B", lim))
    yield "S", brute_signed(x, Q), vals(signed_best_set(s, lim)), vals(theorem2_set(d, "S", lim))
    for cls in [*SYMBOLS, *PAIRS]:
        yield (cls, brute_best_class(x, Q, cls), vals(best_class(s, cls, lim)),
               vals(theorem2_set(d, cls, lim)))
    for a in SYMBOLS:
        yield (("S", a), brute_s_alpha(x, Q, a), vals(s_alpha_set(s, a, lim)),
               vals(s_alpha_words(d, a, lim)))


def test_3_route_equivalence():
    with criterion(3, "oracle = RCF = Delta routes, 50 surds, Qmax 1000", 60.0):
        bad = []
        for x in SAMPLE:
            for key, brute, rcf_route, delta_route in _route_sets(x, 1000):
                if not brute == rcf_route == delta_route:
                    bad.append((str(x), key))
        assert not bad, bad[:5]


def test_4_identities():
    with criterion(4, "partition and intersection identities, counterexample", None):
        lim = "q:1000"
        for x in SAMPLE:
            s = RcfStream(x)
            S = set(vals(signed_best_set(s, lim)))
            B = set(vals(best_set(s, lim)))
            singles = {a: set(vals(best_alpha(s, a, lim))) for a in SYMBOLS}
            assert set().union(*singles.values()) == S
            assert sum(map(len, singles.values())) == len(S)
            for a in SYMBOLS:
                b, c = [t for t in SYMBOLS if t is not a]
                both = set(vals(best_alpha_beta(s, {a, b}, lim))) & set(
                    vals(best_alpha_beta(s, {a, c}, lim)))
                assert both == {v for v in B if parity_of(v) is a}
            parts = [set(vals(s_alpha_set(s, a, lim))) for a in SYMBOLS]
            for i in range(3):
                for j in range(i + 1, 3):
                    assert not parts[i] & parts[j]
            assert set().union(*parts) == S - B
        s = RcfStream(RT2)
        assert Fraction(3, 7) in vals(signed_best_set(s, "q:7"))
        assert parity_of(Fraction(3, 7)) in {Z, O}
        assert Fraction(3, 7) not in vals(best_alpha_beta(s, {Z, O}, "q:100"))
        assert abs(5 * RT2 - 2) < abs(7 * RT2 - 3)


def test_5_delta_machinery():
    with criterion(5, "factorization m <= 1e4, bookkeeping, geometric = symbolic 1e3", 30.0):
        for x in SAMPLE[:10]:
            d = DeltaStream(RcfStream(x))
            assert factorization_holds(d, 10 ** 4)
            a = d.prefix(10 ** 4 + 1)
            for m in range(1, 10 ** 4 + 1):
                assert a[m - 1] is not a[m]
                assert d.delta(m + 1) is third(a[m - 1], a[m])
        for x in SAMPLE[:20]:
            assert DeltaStream(RcfStream(x)).prefix(1000) == delta_expand_geometric(x, 1000)


def test_6_maps():
    with criterion(6, "six maps numeric = symbolic 1e3 steps x 20, recovery i <= 12 x 50", 60.0):
        for x in SAMPLE[:20]:
            u = fractional_part(x)
            for kind in CfMapKind:
                v, y = DeltaView(DeltaStream(RcfStream(u))), u
                for _ in range(1000):
                    st = map_step(kind, y)
                    sym = symbolic_step(kind, v)
                    assert sym.branch() == st.branch
                    assert sym.output.prefix(4) == delta_expand_geometric(st.output, 4)
                    v, y = sym.output, st.output
            assert all(ok for _, ok in gauss_equals_farey_power(u, 20))
        for x in SAMPLE:
            u = fractional_part(x)
            s = RcfStream(u)
            assert even_inverse_orbit(u, 12) == vals(best_alpha_beta(s, {Z, I}, "n:12"))
            assert oddodd_inverse_orbit(u, 12) == vals(best_alpha(s, O, "n:12"))


def test_7_geometry():
    with criterion(7, "parallelogram criteria Qmax 200 x 20, lattice lemma on 1e3 pairs", 60.0):
        for x in SAMPLE[:20]:
            reports = geometric_best_check(x, 200)
            assert all(r.agree for r in reports), [r for r in reports if not r.agree]
        rep = lemma21_property(SAMPLE[:20], 1000, DEFAULT_SEED)
        assert rep.samples == 1000 and rep.ok, rep.failures[:3]


def test_8_special_cases():
    with criterion(8, "a1 = 1, negative x, rational rejection", None):
        s = RcfStream(PHI)
        recs = signed_best_set(s, "n:3")
        assert recs[0].value == 1 and not recs[0].in_B and recs[0].s_class is Z
        assert vals(best_set(s, "n:2")) == fr(2, "3/2")
        assert brute_best(PHI, 2) == fr(2, "3/2")
        assert vals(s_alpha_words(DeltaStream(RcfStream(PHI)), Z, "n:1")) == fr(1)

        x = QuadraticSurd(3, -7, 5, 13)
        d = DeltaStream(RcfStream(x))
        assert d.a0 < 0 and d.letter(1) == "Linv"
        assert d.prefix(200) == delta_expand_geometric(x, 200)
        for key, brute, rcf_route, delta_route in _route_sets(x, 2000):
            assert brute == rcf_route == delta_route, key

        for bad in [QuadraticSurd(4, 0, 3), QuadraticSurd(1, 1, 1, 9)]:
            with pytest.raises(RationalInputError):
                RcfStream(bad)
            with pytest.raises(RationalInputError):
                brute_best(bad, 5)
            with pytest.raises(RationalInputError):
                delta_expand_geometric(bad, 3)
            with pytest.raises(RationalInputError):
                map_step("gauss", bad)
        with pytest.raises(RationalInputError):
            RcfStream(DecimalInterval.parse("0.5"))
        for text in ["sqrt(4)", "2/3"]:
            with pytest.raises(RationalInputError):
                cli.parse_input(text)
        with pytest.raises(InputParseError):
            cli.parse_input("sqrt(2")
        result = CliRunner().invoke(cli.main, ["best", "sqrt(9)"])
        assert result.exit_code == 2 and "rational" in result.stderr

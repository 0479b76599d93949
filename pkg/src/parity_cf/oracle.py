"""Ground truth straight from the definitions, plus the lattice-parallelogram view.

Every rational that can matter for x satisfies |qx - p| < 2: a competitor
with denominator at most 2 (an integer of either parity, or odd/2) always
does better than that.  So per denominator only the numerators
floor(qx) - 1 ... floor(qx) + 2 are ever looked at.

Comparisons are exact.  Errors bx - a are kept as integer pairs (u, v)
meaning (u + v sqrt(d)) / c; a float screen answers the easy cases and
anything within 1e-9 falls back to integer sign tests.
"""

from __future__ import annotations

import enum
import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .errors import RationalInputError
from .exact_arith import SYMBOLS, QuadraticSurd, Sym, _sign_ab, as_surd, parity_class

DEFAULT_SEED = 20240607
RADICANDS = (2, 3, 5, 6, 7, 10)
_SCREEN = 1e-9


def default_seed() -> int:
    """Seed for sampled runs; PARITY_CF_SEED overrides the built-in default."""
    raw = os.environ.get("PARITY_CF_SEED")
    return int(raw) if raw not in (None, "") else DEFAULT_SEED


def sample_surds(n: int, seed: int | None = None) -> list[QuadraticSurd]:
    """n distinct irrationals (a + b sqrt(d))/c with |a|, |b|, c <= 20."""
    rng = random.Random(default_seed() if seed is None else seed)
    out, seen = [], set()
    while len(out) < n:
        a, b, c = rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(1, 20)
        d = rng.choice(RADICANDS)
        if b == 0:
            continue
        x = QuadraticSurd(a, b, c, d)
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


# -- exact errors -------------------------------------------------------------

class _Errors:
    """bx - a for one fixed x, exact with a float fast path."""

    def __init__(self, x):
        x = as_surd(x)
        if x.is_rational():
            raise RationalInputError(f"{x} is rational")
        self.x = x
        self.A, self.B, self.C, self.d = x.a, x.b, x.c, x.d
        self.xf = float(x.decimal(30))

    def floor_bx(self, b: int) -> int:
        N = b * b * self.B * self.B * self.d
        s = math.isqrt(N)
        top = b * self.A + (s if (self.B >= 0) == (b >= 0) else -s - 1)
        if b == 0:
            return 0
        return top // self.C

    def pair(self, b: int, a: int) -> tuple[int, int]:
        return b * self.A - a * self.C, b * self.B

    def value(self, b: int, a: int) -> float:
        return b * self.xf - a

    def sign(self, b: int, a: int) -> int:
        f = self.value(b, a)
        if abs(f) > _SCREEN:
            return 1 if f > 0 else -1
        u, v = self.pair(b, a)
        return _sign_ab(u, v, self.d)

    def cmp_abs(self, e1: tuple[int, int], e2: tuple[int, int]) -> int:
        """sign(|b1 x - a1| - |b2 x - a2|) for e = (b, a)."""
        f = abs(self.value(*e1)) - abs(self.value(*e2))
        if abs(f) > _SCREEN:
            return 1 if f > 0 else -1
        (u1, v1), (u2, v2) = self.pair(*e1), self.pair(*e2)
        return (_sign_ab(u1 - u2, v1 - v2, self.d)
                * _sign_ab(u1 + u2, v1 + v2, self.d))

    def window(self, b: int) -> range:
        f = self.floor_bx(b)
        return range(f - 1, f + 3)


def _allowed(cls: frozenset, a: int, b: int) -> bool:
    """Raw-parity test: does a/b (not necessarily reduced) fall in a class of cls?"""
    if b % 2 == 0:
        return a % 2 == 1 and Sym.INF in cls
    return (Sym.ZERO if a % 2 == 0 else Sym.ONE) in cls


def _as_class(cls) -> frozenset:
    if isinstance(cls, Sym):
        return frozenset([cls])
    if isinstance(cls, str):
        return frozenset(Sym.parse(t) for t in cls.split(","))
    return frozenset(cls)


def _sorted(rs: Iterable[Fraction]) -> list[Fraction]:
    return sorted(set(rs), key=lambda r: (r.denominator, r.numerator))


# -- fast scans -----------------------------------------------------------------

def _nearest(E: _Errors, b: int, ok=lambda a, b: True, skip: int | None = None):
    best = None
    for a in E.window(b):
        if a == skip or not ok(a, b):
            continue
        if best is None or E.cmp_abs((b, a), (b, best)) < 0:
            best = a
    return best


def brute_best_class(x, Qmax: int, cls=SYMBOLS) -> list[Fraction]:
    """Best approximations among rationals of the given class (or union of classes)."""
    E = _Errors(x)
    cls = _as_class(cls)
    ok = lambda a, b: _allowed(cls, a, b)  # noqa: E731
    out, record = [], None  # record = (b, a) with the least error so far
    for q in range(1, Qmax + 1):
        p = _nearest(E, q, ok)
        if p is None:
            continue
        if record is None or E.cmp_abs((q, p), record) < 0:
            if math.gcd(p, q) == 1:
                out.append(Fraction(p, q))
            record = (q, p)
    return out


def brute_best(x, Qmax: int) -> list[Fraction]:
    return brute_best_class(x, Qmax, SYMBOLS)


def brute_signed(x, Qmax: int) -> list[Fraction]:
    """Best one-sided approximations: below and above x separately."""
    E = _Errors(x)
    out = []
    low = high = None  # best (b, a) with bx - a > 0, resp. < 0
    for q in range(1, Qmax + 1):
        f = E.floor_bx(q)
        if low is None or E.cmp_abs((q, f), low) < 0:
            if math.gcd(f, q) == 1:
                out.append(Fraction(f, q))
            low = (q, f)
        if high is None or E.cmp_abs((q, f + 1), high) < 0:
            if math.gcd(f + 1, q) == 1:
                out.append(Fraction(f + 1, q))
            high = (q, f + 1)
    return _sorted(out)


def brute_s_alpha(x, Qmax: int, alpha: Sym) -> list[Fraction]:
    """Signed-best, not best, and matched or beaten by a class-alpha rational of no larger denominator."""
    E = _Errors(x)
    signed = brute_signed(x, Qmax)
    best = set(brute_best(x, Qmax))
    ok = lambda a, b: _allowed(frozenset([alpha]), a, b)  # noqa: E731
    prefix = [None]  # prefix[b] = least class-alpha error (b', a') with b' <= b
    for b in range(1, Qmax + 1):
        a = _nearest(E, b, ok)
        cur = prefix[-1]
        if a is not None and (cur is None or E.cmp_abs((b, a), cur) < 0):
            cur = (b, a)
        prefix.append(cur)
    out = []
    for r in signed:
        if r in best:
            continue
        p, q = r.numerator, r.denominator
        witness = prefix[q - 1]
        if witness is not None and E.cmp_abs(witness, (q, p)) <= 0:
            out.append(r)
            continue
        a = _nearest(E, q, ok, skip=p)
        if a is not None and E.cmp_abs((q, a), (q, p)) <= 0:
            out.append(r)
    return out


# -- definitional scans (small Qmax) --------------------------------------------------

def _reduced_candidates(E: _Errors, Qmax: int) -> list[tuple[int, int]]:
    return [(b, a) for b in range(1, Qmax + 1) for a in E.window(b) if math.gcd(a, b) == 1]


def _class_of(b: int, a: int) -> Sym:
    return parity_class(a, b)


def definitional_best(x, Qmax: int, cls=SYMBOLS) -> list[Fraction]:
    """Pairwise comparison against every reduced competitor; quadratic, for small Qmax."""
    E = _Errors(x)
    cls = _as_class(cls)
    pts = [v for v in _reduced_candidates(E, Qmax) if _class_of(*v) in cls]
    out = []
    for q, p in pts:
        if all(E.cmp_abs((q, p), (b, a)) < 0
               for b, a in pts if b <= q and (b, a) != (q, p)):
            out.append(Fraction(p, q))
    return _sorted(out)


def definitional_signed(x, Qmax: int) -> list[Fraction]:
    E = _Errors(x)
    pts = _reduced_candidates(E, Qmax)
    out = []
    for q, p in pts:
        s = E.sign(q, p)
        if all(E.cmp_abs((q, p), (b, a)) < 0
               for b, a in pts if b <= q and (b, a) != (q, p) and E.sign(b, a) == s):
            out.append(Fraction(p, q))
    return _sorted(out)


def definitional_s_alpha(x, Qmax: int, alpha: Sym) -> list[Fraction]:
    E = _Errors(x)
    pts = _reduced_candidates(E, Qmax)
    best = set(definitional_best(x, Qmax))
    out = []
    for r in definitional_signed(x, Qmax):
        if r in best:
            continue
        p, q = r.numerator, r.denominator
        if any(_class_of(b, a) is alpha and E.cmp_abs((b, a), (q, p)) <= 0
               for b, a in pts if b <= q and (b, a) != (q, p)):
            out.append(r)
    return out


# -- lattice geometry ------------------------------------------------------------------

@dataclass(frozen=True)
class Vec2:
    p: int
    q: int

    def __neg__(self) -> "Vec2":
        return Vec2(-self.p, -self.q)

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def is_primitive(self) -> bool:
        return not self.is_zero() and math.gcd(self.p, self.q) == 1


class ParityLattice(enum.Enum):
    L0 = Sym.ZERO
    L1 = Sym.ONE
    LINF = Sym.INF

    def contains(self, u: Vec2) -> bool:
        if self is ParityLattice.L0:
            return u.p % 2 == 0
        if self is ParityLattice.L1:
            return (u.p + u.q) % 2 == 0
        return u.q % 2 == 0

    @classmethod
    def of(cls, alpha: Sym) -> "ParityLattice":
        return cls(alpha)


class PKind(enum.Enum):
    PS = "PS"
    PB = "PB"


@dataclass(frozen=True)
class ParallelogramSpec:
    """P_S(x, v) or P_B(x, v), spanned by (p - qx, 0) and (qx, q)."""

    x: QuadraticSurd
    v: Vec2
    kind: PKind

    def __post_init__(self):
        if self.v.q < 1:
            raise ValueError("the spanning vector needs q >= 1")


def _coords_sign(E: _Errors, v: Vec2, u: Vec2) -> tuple[int, int, int]:
    """(sign of a, sign of 1 - |a|, sign of u1 - u2 x) for u = a X + b Y (b = u2/q)."""
    s_num = E.sign(u.q, u.p)  # sign(u2 x - u1)
    s_den = E.sign(v.q, v.p)  # sign(qx - p)
    # a = (u1 - u2 x)/(p - qx) = (u2 x - u1)/(qx - p)
    sign_a = s_num * s_den
    room = -E.cmp_abs((u.q, u.p), (v.q, v.p))  # sign(|p - qx| - |u1 - u2 x|)
    return sign_a, room, s_num


def parallelogram_contains(ps: ParallelogramSpec, u: Vec2) -> bool:
    """Closed-parallelogram membership, decided by exact signs."""
    E = _Errors(ps.x)
    v = ps.v
    sign_a, room, _ = _coords_sign(E, v, u)
    if room < 0:
        return False
    if ps.kind is PKind.PB:
        return abs(u.q) <= v.q
    return 0 <= u.q <= v.q and sign_a >= 0


def lattice_points(E: _Errors, v: Vec2) -> list[Vec2]:
    """Every integer vector of P_B(x, v), both signs, zero included."""
    err_v = abs(E.value(v.q, v.p))
    out = []
    for u2 in range(0, v.q + 1):
        centre = u2 * E.xf
        lo = math.floor(centre - err_v - _SCREEN)
        hi = math.ceil(centre + err_v + _SCREEN)
        for u1 in range(lo, hi + 1):
            if abs(u1 - centre) > err_v + _SCREEN:
                continue
            if abs(abs(u1 - centre) - err_v) <= _SCREEN and E.cmp_abs((u2, u1), (v.q, v.p)) > 0:
                continue
            out.append(Vec2(u1, u2))
            if u2 > 0:
                out.append(Vec2(-u1, -u2))
    return out


def _in_ps(E: _Errors, v: Vec2, u: Vec2) -> bool:
    if not 0 <= u.q <= v.q:
        return False
    if u.p == 0 and u.q == 0:
        return True
    sign_a, room, _ = _coords_sign(E, v, u)
    return room >= 0 and sign_a >= 0


@dataclass
class VectorReport:
    v: Vec2
    pb: list  # integer vectors of P_B other than 0, v, -v
    ps: list  # integer vectors of P_S other than 0, v

    def pb_primitive_free(self, lattices=None) -> bool:
        for u in self.pb:
            if not u.is_primitive():
                continue
            if lattices is None or any(L.contains(u) for L in lattices):
                return False
        return True

    @property
    def ps_empty(self) -> bool:
        return not self.ps

    def pb_collinear(self) -> bool:
        rest = [u for u in self.pb if not u.is_zero()]
        return all(u.p * w.q == u.q * w.p for u in rest for w in rest)


def vector_report(E: _Errors, v: Vec2) -> VectorReport:
    pts = [u for u in lattice_points(E, v) if not u.is_zero()]
    pb = [u for u in pts if u != v and u != -v]
    ps = [u for u in pb if _in_ps(E, v, u)]
    return VectorReport(v, pb, ps)


def geometric_sets(x, Qmax: int) -> dict:
    """B, S and the class-restricted sets recomputed from parallelogram emptiness."""
    E = _Errors(x)
    keys = [frozenset(SYMBOLS)] + [frozenset([a]) for a in SYMBOLS] + [
        frozenset(pair) for pair in ((Sym.ZERO, Sym.ONE), (Sym.ZERO, Sym.INF), (Sym.ONE, Sym.INF))]
    out = {"S": []}
    out.update({k: [] for k in keys})
    for q in range(1, Qmax + 1):
        for p in E.window(q):
            if math.gcd(p, q) != 1:
                continue
            rep = vector_report(E, Vec2(p, q))
            r = Fraction(p, q)
            if rep.ps_empty:
                out["S"].append(r)
            cls = parity_class(p, q)
            for k in keys:
                if cls in k and rep.pb_primitive_free([ParityLattice.of(a) for a in k]):
                    out[k].append(r)
    return {k: _sorted(v) for k, v in out.items()}


@dataclass
class CheckReport:
    name: str
    agree: bool
    detail: str = ""


def geometric_best_check(x, Qmax: int) -> list[CheckReport]:
    """Parallelogram criteria against the scan oracles, one line per set."""
    geo = geometric_sets(x, Qmax)
    reports = [CheckReport("S", geo["S"] == brute_signed(x, Qmax))]
    for k, v in geo.items():
        if k == "S":
            continue
        scan = brute_best_class(x, Qmax, k)
        name = "B" if len(k) == 3 else ",".join(str(a) for a in sorted(k, key=lambda s: s.rank))
        diff = "" if v == scan else f"geometric={v[:6]} scan={scan[:6]}"
        reports.append(CheckReport(name, v == scan, diff))
    return reports


@dataclass
class Lemma21Report:
    samples: int = 0
    hyp_i: int = 0
    hyp_ii: int = 0
    failures: list = None

    def __post_init__(self):
        if self.failures is None:
            self.failures = []

    @property
    def ok(self) -> bool:
        return not self.failures


def lemma21_property(xs, samples: int, seed: int | None = None, max_q: int = 40) -> Lemma21Report:
    """Sample (x, v) with v primitive near the line through (x, 1) and check both directions."""
    rng = random.Random(default_seed() if seed is None else seed)
    xs = list(xs)
    Es = [_Errors(x) for x in xs]
    rep = Lemma21Report()
    while rep.samples < samples:
        E = rng.choice(Es)
        q = rng.randint(1, max_q)
        p = E.floor_bx(q) + rng.randint(-1, 2)
        v = Vec2(p, q)
        if not v.is_primitive():
            continue
        rep.samples += 1
        lat = ParityLattice.of(parity_class(p, q))
        vr = vector_report(E, v)
        hyp_i = vr.pb_primitive_free([lat])
        if hyp_i:
            rep.hyp_i += 1
            if not vr.ps_empty:
                rep.failures.append(("i", E.x, v))
        if vr.ps_empty:
            rep.hyp_ii += 1
            if not hyp_i or not vr.pb_collinear():
                rep.failures.append(("ii", E.x, v))
    return rep


__all__ = [
    "DEFAULT_SEED", "default_seed", "sample_surds", "brute_best", "brute_signed",
    "brute_best_class", "brute_s_alpha", "definitional_best", "definitional_signed",
    "definitional_s_alpha", "Vec2", "ParityLattice", "PKind", "ParallelogramSpec",
    "parallelogram_contains", "lattice_points", "vector_report", "geometric_sets",
    "geometric_best_check", "lemma21_property", "CheckReport", "Lemma21Report",
]

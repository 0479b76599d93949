"""Delta-expressions: itineraries of x under the reflections H0, H1, Hinf.

The stream is read off the Farey cutting sequence of the vertical geodesic
ending at x (one symbol per crossed triangle), carrying the running S3
permutation that turns each cutting letter into a reflection letter.
Finite eventually-periodic words evaluate to rationals, which is how the
best-approximation sets are recovered from the symbols alone.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import RationalInputError
from .exact_arith import (
    GAMMA, GAMMA_PERM, H, IDENTITY, INF, L, L_INV, R, SYMBOLS, Mat2, PermS3,
    QuadraticSurd, Sym, as_surd, moebius_apply, surd_sign, third,
)
from .parity_best import PAIRS, Limit, as_limit, parity_of
from .rcf import RcfStream

# Cutting letter -> (eta, S), hard-coded from the L/R factorisation.
_CUT = {
    "L": (Sym.ZERO, "K"),
    "Linv": (Sym.ONE, "K"),
    "R": (Sym.INF, "JKJ"),
}
CUT_MATRIX = {"L": L, "Linv": L_INV, "R": R}


class DeltaStream:
    """Lazy Delta-expression [alpha_1, alpha_2, ...] of an irrational x.

    Indices are 1-based as in the usual notation.  ``cum_perm(m)`` is the
    permutation of the product S_1 ... S_m (so ``cum_perm(0)`` is the
    identity) and ``alpha(m) = cum_perm(m - 1)(eta(m))``.
    """

    def __init__(self, rcf: RcfStream):
        self.rcf = rcf
        self.a0 = rcf.a0
        self.a0_abs = abs(self.a0)
        self._ends = [self.a0_abs]  # _ends[n] = |a0| + a1 + ... + a_n
        self._perms: list[PermS3] = [PermS3.identity()]
        self._alpha: list[Sym] = []

    # -- cutting sequence -------------------------------------------------

    def _block(self, m: int) -> tuple[int, int]:
        """(n, k) with m = |a0| + a1 + ... + a_n + k and 0 <= k < a_{n+1}."""
        if m < self.a0_abs:
            raise IndexError("block decomposition needs m >= |a0|")
        ends = self._ends
        while ends[-1] <= m:
            ends.append(ends[-1] + self.rcf[len(ends)])
        n = bisect.bisect_right(ends, m) - 1
        return n, m - ends[n]

    def letter(self, i: int) -> str:
        """The i-th cutting letter M_i as "L", "Linv" or "R"."""
        if i < 1:
            raise IndexError("cutting letters start at 1")
        if i <= self.a0_abs:
            return "L" if self.a0 > 0 else "Linv"
        n, _ = self._block(i - 1)
        # i sits inside block a_{n+1}; odd blocks cut with R, even with L
        return "R" if (n + 1) % 2 else "L"

    def eta(self, i: int) -> Sym:
        return _CUT[self.letter(i)][0]

    def s_name(self, i: int) -> str:
        return _CUT[self.letter(i)][1]

    def block(self, m: int) -> tuple[int, int]:
        return self._block(m)

    def cum_perm(self, m: int) -> PermS3:
        while len(self._perms) <= m:
            i = len(self._perms)
            self._perms.append(self._perms[-1] * GAMMA_PERM[self.s_name(i)])
        return self._perms[m]

    def cum_gamma(self, m: int) -> Mat2:
        """The matrix S_1 ... S_m."""
        out = IDENTITY
        for i in range(1, m + 1):
            out = out @ GAMMA[self.s_name(i)]
        return out

    # -- symbols ----------------------------------------------------------

    def alpha(self, m: int) -> Sym:
        if m < 1:
            raise IndexError("Delta symbols start at alpha_1")
        while len(self._alpha) < m:
            i = len(self._alpha) + 1
            self._alpha.append(self.cum_perm(i - 1)(self.eta(i)))
        return self._alpha[m - 1]

    __getitem__ = alpha

    def delta(self, j: int) -> Sym:
        """delta_j, the symbol completing {alpha_{j-1}, alpha_j}; j >= 2."""
        if j < 2:
            raise IndexError("delta_j needs j >= 2")
        return third(self.alpha(j - 1), self.alpha(j))

    def prefix(self, n: int) -> list[Sym]:
        if n > 0:
            self.alpha(n)
        return self._alpha[:n]

    def prefix_products(self, start: int = 0) -> Iterator[tuple[int, Mat2]]:
        """Yield (m, H_{alpha_1} ... H_{alpha_m}) for m = start, start+1, ..."""
        P = IDENTITY
        for i in range(1, start + 1):
            P = P @ H[self.alpha(i)]
        m = start
        while True:
            yield m, P
            m += 1
            P = P @ H[self.alpha(m)]

    def prefix_product(self, m: int) -> Mat2:
        return next(self.prefix_products(m))[1]

    def cutting_product(self, m: int) -> Mat2:
        out = IDENTITY
        for i in range(1, m + 1):
            out = out @ CUT_MATRIX[self.letter(i)]
        return out

    def __repr__(self) -> str:
        shown = ",".join(str(a) for a in self.prefix(8))
        return f"DeltaStream([{shown},...])"


def delta_expand(s: RcfStream, m_max: int | None = None) -> DeltaStream:
    """Delta-expression of the number behind ``s``; ``m_max`` pre-computes symbols."""
    d = DeltaStream(s)
    if m_max:
        d.alpha(m_max)
    return d


def _region(y: QuadraticSurd) -> Sym:
    if surd_sign(y - 1) > 0:
        return Sym.ZERO
    if surd_sign(y) < 0:
        return Sym.ONE
    return Sym.INF


def delta_expand_geometric(x, m_max: int) -> list[Sym]:
    """Symbols by repeated reflection: alpha_m is the interval holding H_{alpha_{m-1}} ... x."""
    y = as_surd(x)
    if y.is_rational():
        raise RationalInputError(f"{y} is rational")
    out = []
    for _ in range(m_max):
        a = _region(y)
        out.append(a)
        y = moebius_apply(H[a], y)
    return out


# -- words -----------------------------------------------------------------

_WORD_RE = re.compile(r"^\s*(?P<prefix>(?:[^(),\s]+\s*,\s*)*)\(\s*(?P<x>[^(),\s]+)\s*,\s*(?P<y>[^(),\s]+)\s*\)\s*\*\s*$")


@dataclass(frozen=True)
class DeltaWord:
    """[prefix, overline(x, y)] with the tail x, y, x, y, ... repeating forever."""

    prefix: tuple
    cycle: tuple

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "cycle", tuple(self.cycle))
        if len(self.cycle) != 2:
            raise ValueError("the periodic tail needs exactly two symbols")
        seq = self.prefix + self.cycle
        for u, v in zip(seq, seq[1:]):
            if u is v:
                raise ValueError(f"adjacent symbols must differ: {self.render()}")

    @classmethod
    def parse(cls, text: str) -> "DeltaWord":
        m = _WORD_RE.match(text)
        if not m:
            raise ValueError(f"malformed Delta word: {text!r}")
        prefix = [Sym.parse(t) for t in m.group("prefix").split(",") if t.strip()]
        return cls(prefix, (Sym.parse(m.group("x")), Sym.parse(m.group("y"))))

    def render(self) -> str:
        head = "".join(f"{a}," for a in self.prefix)
        return f"{head}({self.cycle[0]},{self.cycle[1]})*"

    __str__ = render

    @property
    def tail_value(self) -> Sym:
        """The symbol fixed by the periodic tail."""
        return third(*self.cycle)

    def canonical(self) -> "DeltaWord":
        """Unique representative: absorb prefix symbols into the tail, then order the tail."""
        prefix, (x, y) = list(self.prefix), self.cycle
        while prefix and prefix[-1] is y:
            prefix.pop()
            x, y = y, x
        if y.rank < x.rank:
            x, y = y, x
        return DeltaWord(tuple(prefix), (x, y))

    def prefix_matrix(self) -> Mat2:
        P = IDENTITY
        for a in self.prefix:
            P = P @ H[a]
        return P

    def value(self):
        return moebius_apply(self.prefix_matrix(), self.tail_value.point)


def delta_word_eval(w: DeltaWord | str):
    """Rational (or INF) denoted by an eventually 2-periodic word."""
    if isinstance(w, str):
        w = DeltaWord.parse(w)
    return w.value()


def render_symbols(symbols: Sequence[Sym]) -> str:
    return ",".join(str(a) for a in symbols)


# -- bookkeeping -----------------------------------------------------------

def delta_complement(s: DeltaStream, m: int) -> Sym:
    """delta_{m+1}: the third symbol next to alpha_m, alpha_{m+1}."""
    if m < 1:
        raise IndexError("m >= 1 required")
    return s.delta(m + 1)


def vertex_values(s: DeltaStream, m: int) -> tuple:
    """(P_m . alpha_{m+1}, P_m . delta_{m+1}) with P_m = H_{alpha_1} ... H_{alpha_m}.

    Exposed for every m >= 1, including the initial segment m <= |a0|
    that the set constructions skip.
    """
    P = s.prefix_product(m)
    return moebius_apply(P, s.alpha(m + 1).point), moebius_apply(P, s.delta(m + 1).point)


def s_gamma_split(s: DeltaStream, m: int) -> tuple[str, Sym | None]:
    """Where the signed word at m lands: ("in_S", delta_{m+1}) or ("in_B", None)."""
    if m < s.a0_abs + 1:
        raise IndexError("signed words start at m = |a0| + 1")
    if m == s.a0_abs + 1 or s.alpha(m - 1) is s.alpha(m + 1):
        return "in_S", s.delta(m + 1)
    return "in_B", None


# -- cylinders --------------------------------------------------------------

_INTERIOR = {Sym.ZERO: Fraction(2), Sym.ONE: Fraction(-1), Sym.INF: Fraction(1, 2)}


def _in_base_interval(alpha: Sym, y) -> bool:
    if y is INF:
        return alpha is not Sym.INF
    if alpha is Sym.ZERO:
        return y >= 1
    if alpha is Sym.ONE:
        return y <= 0
    return 0 <= y <= 1


@dataclass(frozen=True)
class CylinderInterval:
    """I_{alpha_1 ... alpha_m} = P_{m-1} . I_{alpha_m} with its two parity-labelled ends."""

    word: tuple
    matrix: Mat2  # P_{m-1}
    ends: tuple  # ((value, parity), (value, parity))

    @property
    def wraps(self) -> bool:
        """True when the arc runs through infinity (or ends there)."""
        inside = moebius_apply(self.matrix, _INTERIOR[self.word[-1]])
        a, b = self.ends[0][0], self.ends[1][0]
        if a is INF or b is INF:
            return True
        lo, hi = min(a, b), max(a, b)
        return not lo < inside < hi

    def bounds(self) -> tuple:
        """(lo, hi) for an ordinary arc; raises for arcs through infinity."""
        if self.wraps:
            raise ValueError("cylinder runs through infinity")
        a, b = self.ends[0][0], self.ends[1][0]
        return (min(a, b), max(a, b))

    def contains(self, x) -> bool:
        return _in_base_interval(self.word[-1], moebius_apply(self.matrix.inverse(), x))

    def subset_of(self, other: "CylinderInterval") -> bool:
        return all(other.contains(v) for v, _ in self.ends) and other.contains(
            moebius_apply(self.matrix, _INTERIOR[self.word[-1]]))


def cylinder(s: DeltaStream, m: int) -> CylinderInterval:
    if m < 1:
        raise IndexError("cylinders start at m = 1")
    a = s.alpha(m)
    P = s.prefix_product(m - 1)
    others = [b for b in SYMBOLS if b is not a]
    ends = tuple((moebius_apply(P, b.point), b) for b in others)
    return CylinderInterval(tuple(s.prefix(m)), P, ends)


# -- sets from words --------------------------------------------------------

@dataclass(frozen=True)
class WordHit:
    value: Fraction
    word: DeltaWord
    m: int

    @property
    def q(self) -> int:
        return self.value.denominator


def _triangle_min_den(P: Mat2) -> int:
    _, _, c, d = P.entries
    return min(abs(d), abs(c + d), abs(c))


SET_KEYS = ("B", "S") + SYMBOLS + PAIRS


def _candidates(s: DeltaStream, m: int, key) -> list[tuple]:
    """(prefix_len, tail pair) for the words of one set at index m."""
    am, an = s.alpha(m), s.alpha(m + 1)
    dn = third(am, an)
    if key == "B":
        return [(am, an)]
    if key == "S":
        return [(am, dn)]
    if isinstance(key, Sym):
        return [(am, dn)] if an is key else []
    if isinstance(key, tuple):  # ("S_alpha", alpha)
        return [(am, dn)] if s_gamma_split(s, m) == ("in_S", key[1]) else []
    gamma = third(*key)
    return [(am, gamma)] if am is not gamma else []


def _collect(s: DeltaStream, key, limit: Limit) -> list[WordHit]:
    if limit.count is not None and limit.count <= 0:
        return []
    found: dict[Fraction, WordHit] = {}
    start = s.a0_abs + 1
    for m1, P in s.prefix_products(start - 1):  # P = P_{m-1}, m = m1 + 1
        m = m1 + 1
        for tail in _candidates(s, m, key):
            v = moebius_apply(P, third(*tail).point)
            if v is INF or v in found:
                continue
            found[v] = WordHit(v, DeltaWord(s.prefix(m - 1), tail), m)
        bound = _triangle_min_den(P @ H[s.alpha(m)])  # every later value has q >= bound
        if limit.max_den is not None and bound > limit.max_den:
            break
        if limit.count is not None:
            settled = sum(1 for v in found if v.denominator < bound)
            if settled >= limit.count:
                break
    hits = sorted(found.values(), key=lambda h: (h.q, h.value.numerator))
    return limit.take(hits)


def theorem2_set(s: DeltaStream, key, limit) -> list[WordHit]:
    """One set from the words: key is "B", "S", a Sym or a pair of Syms."""
    if not isinstance(key, (str, Sym)):
        key = frozenset(key)
        if key not in PAIRS:
            raise ValueError(f"not a class pair: {set(key)}")
    elif isinstance(key, str) and key not in ("B", "S"):
        raise ValueError(f"unknown set {key!r}")
    return _collect(s, key, as_limit(limit))


def theorem2_sets(s: DeltaStream, limit) -> dict:
    """Every set keyed as in SET_KEYS, each deduplicated on the rational."""
    limit = as_limit(limit)
    return {key: _collect(s, key, limit) for key in SET_KEYS}


def s_alpha_words(s: DeltaStream, alpha: Sym, limit) -> list[WordHit]:
    """S_alpha: signed words that the split rule sends to S_alpha."""
    return _collect(s, ("S_alpha", alpha), as_limit(limit))


def complement_repeat_holds(s: DeltaStream, m: int) -> bool:
    """delta_m = delta_{m+1} exactly when k != 0 in the block decomposition of m.

    Meaningful for m >= |a0| + 2.
    """
    if m < s.a0_abs + 2:
        raise IndexError("the repeat rule starts at m = |a0| + 2")
    _, k = s.block(m)
    return (s.delta(m) is s.delta(m + 1)) == (k != 0)


def factorization_holds(s: DeltaStream, m_max: int) -> bool:
    """M_1...M_m = H_{alpha_1}...H_{alpha_m} S_1...S_m for every m <= m_max."""
    M, Hp, Sp = IDENTITY, IDENTITY, IDENTITY
    for m in range(1, m_max + 1):
        M = M @ CUT_MATRIX[s.letter(m)]
        Hp = Hp @ H[s.alpha(m)]
        Sp = Sp @ GAMMA[s.s_name(m)]
        if M != Hp @ Sp:
            return False
    return True


def word_parity(w: DeltaWord) -> Sym:
    v = w.value()
    return Sym.INF if v is INF else parity_of(v)


__all__ = [
    "DeltaStream", "DeltaWord", "CylinderInterval", "WordHit", "SET_KEYS",
    "delta_expand", "delta_expand_geometric", "delta_word_eval", "cylinder",
    "delta_complement", "vertex_values", "s_gamma_split", "theorem2_set",
    "theorem2_sets", "s_alpha_words", "complement_repeat_holds", "factorization_holds",
    "render_symbols", "word_parity",
]

"""Regular continued fractions with principal and intermediate convergents."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import PrecisionExhausted, RationalInputError
from .exact_arith import INF, QuadraticSurd

_DECIMAL_RE = re.compile(r"^\s*([+-]?)(\d+)\.(\d+)\s*$")


@dataclass(frozen=True)
class DecimalInterval:
    """A decimal literal read as the closed interval value +- one ulp."""

    text: str
    lo: Fraction
    hi: Fraction

    @classmethod
    def parse(cls, text: str) -> "DecimalInterval":
        m = _DECIMAL_RE.match(text)
        if not m:
            raise ValueError(f"not a decimal literal: {text!r}")
        sign, whole, frac = m.groups()
        ulp = Fraction(1, 10 ** len(frac))
        value = Fraction(int(whole + frac), 10 ** len(frac))
        if sign == "-":
            value = -value
        return cls(text.strip(), value - ulp, value + ulp)

    @staticmethod
    def looks_like(text: str) -> bool:
        return bool(_DECIMAL_RE.match(text))

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class ConvergentRecord:
    n: int
    p: int
    q: int

    @property
    def value(self):
        return INF if self.q == 0 else Fraction(self.p, self.q)


@dataclass(frozen=True)
class IntermediateRecord:
    n: int
    k: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def _surd_state(x: QuadraticSurd) -> tuple[int, int, int]:
    """Write x as (P + sqrt(D))/Q with Q dividing D - P**2."""
    if x.b > 0:
        P, D, Q = x.a, x.b * x.b * x.d, x.c
    else:
        P, D, Q = -x.a, x.b * x.b * x.d, -x.c
    if (D - P * P) % Q:
        P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
    return P, D, Q


class RcfStream:
    """Lazy regular continued fraction ``[a0; a1, a2, ...]`` of an irrational.

    Surd inputs expand without bound and record their period once a
    reduced state repeats.  Decimal inputs stop at the last partial quotient
    shared by every real in the digit interval; asking for more raises
    :class:`PrecisionExhausted`.
    """

    def __init__(self, source: Union[QuadraticSurd, DecimalInterval]):
        self.source = source
        self._terms: list[int] = []
        self._p = [1]  # p_{-1}
        self._q = [0]
        self._period: tuple[int, int] | None = None
        if isinstance(source, QuadraticSurd):
            if source.is_rational():
                raise RationalInputError(f"{source} is rational")
            self._state = _surd_state(source)
            self._isqrt = math.isqrt(self._state[1])
            self._seen: dict[tuple[int, int], int] = {}
            self.certified: int | None = None
        elif isinstance(source, DecimalInterval):
            self.certified = len(self._expand_interval(source.lo, source.hi))
            if self.certified < 2:
                raise RationalInputError(
                    f"decimal {source.text!r} is too short to certify a "
                    "partial quotient beyond the integer part")
        else:
            raise TypeError(f"unsupported source {type(source).__name__}")

    # -- expansion --------------------------------------------------------

    def _expand_interval(self, lo: Fraction, hi: Fraction) -> list[int]:
        terms = self._terms
        while True:
            a = math.floor(lo)
            if math.floor(hi) != a:
                return terms
            terms.append(a)
            if lo == a:
                return terms
            lo, hi = 1 / (hi - a), 1 / (lo - a)

    def _next_surd_term(self) -> None:
        P, D, Q = self._state
        n = len(self._terms)
        key = (P, Q)
        if self._period is None:
            if key in self._seen:
                start = self._seen[key]
                self._period = (start, n - start)
            else:
                self._seen[key] = n
        if self._period is not None:
            start, length = self._period
            self._terms.append(self._terms[start + (n - start) % length])
            return
        s = self._isqrt
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // -Q) - 1
        P = a * Q - P
        Q = (D - P * P) // Q
        self._state = (P, D, Q)
        self._terms.append(a)

    def __getitem__(self, n: int) -> int:
        if n < 0:
            raise IndexError("partial quotients are indexed from 0")
        while len(self._terms) <= n:
            if self.certified is not None:
                raise PrecisionExhausted(
                    f"only {self.certified} partial quotients are certified by "
                    f"{self.source}", self.certified)
            self._next_surd_term()
        return self._terms[n]

    @property
    def a0(self) -> int:
        return self[0]

    def terms(self, count: int) -> list[int]:
        if count > 0:
            self[count - 1]
        return self._terms[:count]

    def available(self, count: int) -> bool:
        """Whether the first ``count`` terms exist (always true for surds)."""
        return self.certified is None or count <= self.certified

    @property
    def uncertified_tail(self) -> bool:
        return self.certified is not None

    @property
    def period(self) -> tuple[int, int] | None:
        """(preperiod, period length) for surds; None for decimals."""
        if self.certified is not None:
            return None
        while self._period is None:
            self._next_surd_term()
        return self._period

    def regenerate(self, count: int) -> list[int]:
        """First ``count`` terms rebuilt from the detected period alone."""
        start, length = self.period
        head = self._terms[:start]
        cycle = self._terms[start:start + length]
        return [head[i] if i < start else cycle[(i - start) % length]
                for i in range(count)]

    # -- convergents ------------------------------------------------------

    def convergent(self, n: int) -> ConvergentRecord:
        """p_n/q_n for n >= -1."""
        if n < -1:
            raise IndexError("convergents start at n = -1")
        while len(self._p) <= n + 1:
            k = len(self._p) - 1  # index of the next convergent
            a = self[k]
            p_prev, q_prev = self._p[-1], self._q[-1]
            if k == 0:
                p2, q2 = 0, 1
            else:
                p2, q2 = self._p[-2], self._q[-2]
            self._p.append(a * p_prev + p2)
            self._q.append(a * q_prev + q2)
        return ConvergentRecord(n, self._p[n + 1], self._q[n + 1])

    def intermediate(self, n: int, k: int) -> IntermediateRecord:
        if n < 1 or not 1 <= k < self[n]:
            raise IndexError(f"no intermediate convergent ({n}, {k})")
        c1, c2 = self.convergent(n - 1), self.convergent(n - 2)
        return IntermediateRecord(n, k, k * c1.p + c2.p, k * c1.q + c2.q)

    def __repr__(self) -> str:
        shown = ", ".join(map(str, self._terms[1:8]))
        return f"RcfStream({self.source}: [{self._terms[0] if self._terms else '?'}; {shown}, ...])"


def rcf_expand(x, max_terms: int | None = None) -> RcfStream:
    """Continued fraction of a surd, a :class:`DecimalInterval`, or a decimal string."""
    if isinstance(x, str):
        x = DecimalInterval.parse(x)
    stream = RcfStream(x)
    if max_terms is not None and max_terms > 0:
        stream.terms(min(max_terms, stream.certified or max_terms))
    return stream


def convergents(s: RcfStream, n_max: int) -> list[ConvergentRecord]:
    """Records for n = -1, 0, ..., n_max."""
    return [s.convergent(n) for n in range(-1, n_max + 1)]


def intermediates(s: RcfStream, n_max: int) -> list[IntermediateRecord]:
    """All intermediate convergents with n <= n_max in (n, k) order."""
    return [s.intermediate(n, k) for n in range(1, n_max + 1) for k in range(1, s[n])]

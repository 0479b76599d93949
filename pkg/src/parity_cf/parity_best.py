"""Parity-classed best approximations read off the regular continued fraction.

The signed best approximations of x are exactly its principal and
intermediate convergents; every parity-restricted best set is then a
filter of that list.  Records are produced in increasing denominator order
(the two denominator-1 entries a0 and a0+1 appear in that order).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Iterable, Iterator

from .exact_arith import SYMBOLS, Sym, parity_class, third
from .rcf import RcfStream

PAIRS = (
    frozenset((Sym.ZERO, Sym.ONE)),
    frozenset((Sym.ZERO, Sym.INF)),
    frozenset((Sym.ONE, Sym.INF)),
)


def pair_label(pair: frozenset) -> str:
    a, b = sorted(pair, key=lambda s: s.rank)
    return f"{a},{b}"


def parity_of(r: Fraction) -> Sym:
    """Parity class of a rational; negative numerators use |p| mod 2."""
    r = Fraction(r)
    return parity_class(r.numerator, r.denominator)


@dataclass(frozen=True)
class Limit:
    """Enumeration bound: a maximal denominator, a count, or both."""

    max_den: int | None = None
    count: int | None = None

    @classmethod
    def parse(cls, text: str | None) -> "Limit":
        """Parse ``q:<Q>`` or ``n:<N>``; an empty string means nothing."""
        if text is None or not text.strip():
            return cls(count=0)
        m = re.fullmatch(r"\s*([qn])\s*:\s*(\d+)\s*", text)
        if not m:
            raise ValueError(f"limit must look like q:<max denominator> or n:<count>, got {text!r}")
        kind, value = m.group(1), int(m.group(2))
        return cls(max_den=value) if kind == "q" else cls(count=value)

    def __str__(self) -> str:
        parts = []
        if self.max_den is not None:
            parts.append(f"q:{self.max_den}")
        if self.count is not None:
            parts.append(f"n:{self.count}")
        return ",".join(parts) or "none"

    def take(self, records: Iterable) -> list:
        """Truncate an iterable sorted by denominator."""
        out = []
        if self.count is not None and self.count <= 0:
            return out
        for rec in records:
            if self.max_den is not None and _den(rec) > self.max_den:
                break
            out.append(rec)
            if self.count is not None and len(out) >= self.count:
                break
        return out


def _den(rec) -> int:
    value = rec.value if hasattr(rec, "value") else rec
    return Fraction(value).denominator


def as_limit(limit) -> Limit:
    if isinstance(limit, Limit):
        return limit
    if isinstance(limit, str):
        return Limit.parse(limit)
    if isinstance(limit, int):
        return Limit(max_den=limit)
    raise TypeError(f"cannot use {limit!r} as a limit")


@dataclass(frozen=True)
class ApproxRecord:
    value: Fraction
    index: tuple  # (n,) for principal, (n, k) for intermediate
    kind: str  # "principal" | "intermediate"
    parity: Sym
    in_B: bool
    in_S: bool = True
    s_class: Sym | None = None
    memberships: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def p(self) -> int:
        return self.value.numerator

    @property
    def q(self) -> int:
        return self.value.denominator

    def in_best(self, cls) -> bool:
        """Membership in B^(alpha) (a Sym) or B^(alpha,beta) (a pair)."""
        return self.memberships[_class_key(cls)]


def _class_key(cls):
    if isinstance(cls, Sym):
        return cls
    cls = frozenset(cls)
    if len(cls) == 1:
        return next(iter(cls))
    if cls not in PAIRS:
        raise ValueError(f"not a parity class or pair: {cls}")
    return cls


def _memberships(parity: Sym, in_B: bool, s_class: Sym | None) -> dict:
    m = {a: parity is a for a in SYMBOLS}
    for pair in PAIRS:
        gamma = third(*pair)
        m[pair] = (in_B and parity in pair) or s_class is gamma
    return m


def _record(value, index, kind, in_B, s_class) -> ApproxRecord:
    parity = parity_of(value)
    return ApproxRecord(value, index, kind, parity, in_B, True, s_class,
                        _memberships(parity, in_B, s_class))


def iter_signed_records(s: RcfStream, max_den: int | None = None) -> Iterator[ApproxRecord]:
    """All of S(x) in (n, k) order, which is increasing denominator order.

    With ``max_den`` the iterator stops before touching partial quotients
    that cannot produce a denominator within the bound.
    """
    a1_is_one = s[1] == 1
    c0 = s.convergent(0)
    if a1_is_one:
        s_cls = parity_of(Fraction(c0.p + 1))
        yield _record(Fraction(c0.p), (0,), "principal", False, s_cls)
    else:
        yield _record(Fraction(c0.p), (0,), "principal", True, None)
    n = 1
    while True:
        prev, prev2 = s.convergent(n - 1), s.convergent(n - 2)
        if max_den is not None and prev.q + prev2.q > max_den:
            return
        a_n = s[n]
        s_cls = parity_class(prev.p, prev.q)
        for k in range(1, a_n):
            rec = s.intermediate(n, k)
            if max_den is not None and rec.q > max_den:
                return
            yield _record(rec.value, (n, k), "intermediate", False, s_cls)
        c = s.convergent(n)
        if max_den is not None and c.q > max_den:
            return
        yield _record(Fraction(c.p, c.q), (n,), "principal", True, None)
        n += 1


def _enumerate(s: RcfStream, limit, keep) -> list[ApproxRecord]:
    limit = as_limit(limit)
    if limit.count is not None and limit.count <= 0:
        return []
    records = (r for r in iter_signed_records(s, limit.max_den) if keep(r))
    return limit.take(records)


def signed_best_set(s: RcfStream, limit) -> list[ApproxRecord]:
    """S(x): principal and intermediate convergents, by denominator."""
    return _enumerate(s, limit, lambda r: True)


def best_set(s: RcfStream, limit) -> list[ApproxRecord]:
    """B(x): principal convergents, dropping p0 when a1 = 1."""
    return _enumerate(s, limit, lambda r: r.in_B)


def s_alpha_set(s: RcfStream, alpha: Sym, limit) -> list[ApproxRecord]:
    return _enumerate(s, limit, lambda r: r.s_class is alpha)


def best_alpha(s: RcfStream, alpha: Sym, limit) -> list[ApproxRecord]:
    """B^(alpha)(x) = S(x) restricted to the parity class alpha."""
    return _enumerate(s, limit, lambda r: r.parity is alpha)


def best_alpha_beta(s: RcfStream, pair, limit) -> list[ApproxRecord]:
    """B^(alpha,beta)(x) = (B(x) in Q^(alpha,beta)) disjoint-union S_gamma(x)."""
    pair = frozenset(pair)
    if pair not in PAIRS:
        raise ValueError(f"need two distinct classes, got {set(pair)}")
    gamma = third(*pair)
    return _enumerate(
        s, limit, lambda r: (r.in_B and r.parity in pair) or r.s_class is gamma)


def best_class(s: RcfStream, cls, limit) -> list[ApproxRecord]:
    """Dispatch on a single class, a pair, or all three classes (plain B)."""
    cls = frozenset([cls]) if isinstance(cls, Sym) else frozenset(cls)
    if len(cls) == 3:
        return best_set(s, limit)
    if len(cls) == 1:
        return best_alpha(s, next(iter(cls)), limit)
    return best_alpha_beta(s, cls, limit)


def s_alpha_classify(rec: ApproxRecord, s: RcfStream) -> Sym | None:
    """The alpha with rec in S_alpha(x), or None when rec is a best approximation."""
    if rec.kind == "principal":
        n = rec.index[0]
        if n >= 1 or s[1] >= 2:
            return None
        return parity_of(Fraction(s.convergent(0).p + 1))
    n, _k = rec.index
    prev = s.convergent(n - 1)
    return parity_class(prev.p, prev.q)


def intermediate_memberships(n: int, k: int, s: RcfStream) -> dict:
    """Membership flags of p_{n,k}/q_{n,k} from the parities of p_{n-1}, p_{n-2}.

    With p_{n-1}/q_{n-1} of class alpha and p_{n-2}/q_{n-2} of class beta:
    the intermediate lies in B^(beta,gamma), in neither pair containing
    alpha, and in B^(gamma) for odd k, B^(beta) for even k.
    """
    if not 1 <= k < s[n]:
        raise IndexError(f"no intermediate convergent ({n}, {k})")
    c1, c2 = s.convergent(n - 1), s.convergent(n - 2)
    alpha = parity_class(c1.p, c1.q)
    beta = parity_class(c2.p, c2.q)
    if alpha is beta:
        raise AssertionError("consecutive convergents share a parity class")
    gamma = third(alpha, beta)
    flags = {a: False for a in SYMBOLS}
    flags[gamma if k % 2 else beta] = True
    flags[frozenset((beta, gamma))] = True
    flags[frozenset((alpha, beta))] = False
    flags[frozenset((alpha, gamma))] = False
    return flags


def p0_memberships(s: RcfStream) -> dict:
    """Flags for p0 = a0 when a1 = 1 (p0 is then not a best approximation)."""
    if s[1] != 1:
        raise ValueError("the special rule applies only when a1 = 1")
    alpha = parity_of(Fraction(s.a0))
    other = Sym.ONE if alpha is Sym.ZERO else Sym.ZERO
    flags = {a: a is alpha for a in SYMBOLS}
    flags[frozenset((alpha, Sym.INF))] = True
    flags[frozenset((Sym.ZERO, Sym.ONE))] = False
    flags[frozenset((other, Sym.INF))] = False
    return flags


def first(records: Iterable, n: int) -> list:
    return list(islice(records, n))

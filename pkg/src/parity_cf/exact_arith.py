"""Exact arithmetic: rationals, real quadratic surds, and PGL(2, Z) matrices.

Every comparison made anywhere in the package bottoms out in
:func:`surd_sign`, which decides the sign of ``(a + b*sqrt(d))/c`` with
integer operations only.
"""

from __future__ import annotations

import enum
import math
from fractions import Fraction
from typing import Union

from .errors import RadicandMismatchError

BigRational = Fraction


class _Infinity:
    """The single point at infinity of the extended real line."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


# ---------------------------------------------------------------------------
# Quadratic surds
# ---------------------------------------------------------------------------

def _squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, r) with n == s*s*r and r squarefree."""
    s, r = 1, n
    p = 2
    while p * p <= r:
        pp = p * p
        while r % pp == 0:
            r //= pp
            s *= p
        p += 1 if p == 2 else 2
    return s, r


def _sign_ab(a: int, b: int, d: int) -> int:
    """Sign of a + b*sqrt(d) for squarefree d > 1 (or b == 0)."""
    if b == 0:
        return (a > 0) - (a < 0)
    sb = 1 if b > 0 else -1
    if a == 0:
        return sb
    sa = 1 if a > 0 else -1
    if sa == sb:
        return sa
    # opposite signs: the larger magnitude wins; a*a == b*b*d is impossible
    return sa if a * a > b * b * d else sb


class QuadraticSurd:
    """The real number ``(a + b*sqrt(d)) / c``.

    Stored normalized: ``c > 0``, ``gcd(a, b, c) == 1``, ``d`` squarefree, and
    ``d == 1`` whenever ``b == 0`` so that equal rationals compare equal.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int = 0, c: int = 1, d: int = 1):
        if c == 0:
            raise ZeroDivisionError("surd with zero denominator")
        if b != 0:
            if d <= 0:
                raise ValueError(f"radicand must be positive, got {d}")
            s, d = _squarefree_split(d)
            b *= s
            if d == 1:
                a, b = a + b, 0
        self._set(a, b, c, d)

    @classmethod
    def _raw(cls, a: int, b: int, c: int, d: int) -> "QuadraticSurd":
        # d already squarefree; only sign/gcd normalization
        obj = object.__new__(cls)
        obj._set(a, b, c, d)
        return obj

    def _set(self, a: int, b: int, c: int, d: int) -> None:
        if c < 0:
            a, b, c = -a, -b, -c
        if b == 0:
            d = 1
        g = math.gcd(a, b, c)
        if g > 1:
            a //= g
            b //= g
            c //= g
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def from_rational(cls, r: Union[int, Fraction]) -> "QuadraticSurd":
        r = Fraction(r)
        return cls._raw(r.numerator, 0, r.denominator, 1)

    @classmethod
    def sqrt(cls, n: int) -> "QuadraticSurd":
        if n < 0:
            raise ValueError("square root of a negative integer")
        return cls(0, 1, 1, n) if n else cls(0)

    # -- predicates -------------------------------------------------------

    def is_rational(self) -> bool:
        return self.b == 0

    def to_fraction(self) -> Fraction:
        if self.b != 0:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.a, self.c)

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd._raw(self.a, -self.b, self.c, self.d)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other) -> "QuadraticSurd":
        if isinstance(other, QuadraticSurd):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticSurd.from_rational(other)
        return NotImplemented

    def _field(self, other: "QuadraticSurd") -> int:
        if self.b == 0:
            return other.d
        if other.b == 0 or other.d == self.d:
            return self.d
        raise RadicandMismatchError(
            f"cannot combine sqrt({self.d}) and sqrt({other.d})")

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadraticSurd._raw(self.a * o.c + o.a * self.c,
                                  self.b * o.c + o.b * self.c,
                                  self.c * o.c, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd._raw(-self.a, -self.b, self.c, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = self._field(o)
        return QuadraticSurd._raw(self.a * o.a + self.b * o.b * d,
                                  self.a * o.b + self.b * o.a,
                                  self.c * o.c, d)

    __rmul__ = __mul__

    def reciprocal(self) -> "QuadraticSurd":
        norm = self.a * self.a - self.b * self.b * self.d
        if norm == 0:
            raise ZeroDivisionError("reciprocal of zero")
        return QuadraticSurd._raw(self.c * self.a, -self.c * self.b, norm, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.reciprocal()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.reciprocal()

    def __abs__(self):
        return -self if surd_sign(self) < 0 else self

    # -- comparison -------------------------------------------------------

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot compare surd with {type(other).__name__}")
        return surd_sign(self - o)

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and Fraction(self.a, self.c) == other
        if not isinstance(other, QuadraticSurd):
            return NotImplemented
        return (self.a, self.b, self.c, self.d) == (other.a, other.b, other.c, other.d)

    def __hash__(self):
        if self.b == 0:
            return hash(Fraction(self.a, self.c))
        return hash((self.a, self.b, self.c, self.d))

    # -- conversions ------------------------------------------------------

    def __floor__(self) -> int:
        return floor_surd(self)

    def __float__(self) -> float:
        scale = 1 << 64
        return floor_surd(self * scale) / scale

    def decimal(self, digits: int = 20) -> str:
        """Truncated decimal expansion with ``digits`` fractional digits."""
        scale = 10 ** digits
        n = floor_surd(self * scale)
        sign = "-" if n < 0 else ""
        n = abs(n)
        whole, frac = divmod(n, scale)
        return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"

    def __repr__(self) -> str:
        return f"QuadraticSurd({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        if self.b == 0:
            num = str(self.a)
        else:
            root = "sqrt(%d)" % self.d
            if self.b == 1:
                rad = root
            elif self.b == -1:
                rad = "-" + root
            else:
                rad = f"{self.b}*{root}"
            if self.a == 0:
                num = rad
            else:
                num = f"{self.a}{'' if rad.startswith('-') else '+'}{rad}"
        if self.c == 1:
            return num
        return f"({num})/{self.c}"


def surd_sign(s: QuadraticSurd) -> int:
    """Exact sign of a surd: integer case analysis on a, b and a**2 vs b**2*d."""
    return _sign_ab(s.a, s.b, s.d)


def surd_cmp_abs(u: QuadraticSurd, v: QuadraticSurd) -> int:
    """Compare |u| with |v|; returns -1, 0 or +1.

    ``|u|**2 - |v|**2 = (u - v)(u + v)`` so the sign is a product of two
    exact signs.  Raises :class:`RadicandMismatchError` when the radicands
    differ (rationals are compatible with every radicand).
    """
    if not isinstance(u, QuadraticSurd):
        u = QuadraticSurd.from_rational(u)
    if not isinstance(v, QuadraticSurd):
        v = QuadraticSurd.from_rational(v)
    return surd_sign(u - v) * surd_sign(u + v)


def floor_surd(s: QuadraticSurd) -> int:
    """The integer n with n <= s < n + 1."""
    if s.b == 0:
        return s.a // s.c
    t = math.isqrt(s.b * s.b * s.d)
    # b*sqrt(d) lies strictly inside (t, t+1) or (-t-1, -t)
    lo = s.a + t if s.b > 0 else s.a - t - 1
    n = lo // s.c
    # exact confirmation of the bracket
    while surd_sign(s - n) < 0:
        n -= 1
    while surd_sign(s - (n + 1)) >= 0:
        n += 1
    return n


def as_surd(x) -> QuadraticSurd:
    if isinstance(x, QuadraticSurd):
        return x
    return QuadraticSurd.from_rational(x)


# ---------------------------------------------------------------------------
# The three symbols {0, 1, inf}
# ---------------------------------------------------------------------------

class Sym(enum.Enum):
    """One of the three letters 0, 1, inf.

    Serves both as a Delta-expression letter and as a parity class tag:
    ``Sym.ZERO`` is even/odd, ``Sym.ONE`` odd/odd, ``Sym.INF`` odd/even.
    """

    ZERO = "0"
    ONE = "1"
    INF = "inf"

    def __str__(self) -> str:
        return self.value

    @property
    def rank(self) -> int:
        return _RANK[self]

    @property
    def point(self):
        """The boundary point named by the letter."""
        return _POINT[self]

    @classmethod
    def parse(cls, text: str) -> "Sym":
        t = text.strip().lower()
        if t in ("inf", "infinity", "oo", "∞"):
            return cls.INF
        try:
            return cls(t)
        except ValueError:
            raise ValueError(f"not a symbol: {text!r}") from None

    @classmethod
    def from_point(cls, value) -> "Sym":
        if value is INF:
            return cls.INF
        if value == 0:
            return cls.ZERO
        if value == 1:
            return cls.ONE
        raise ValueError(f"{value} is not one of 0, 1, inf")


_RANK = {Sym.ZERO: 0, Sym.ONE: 1, Sym.INF: 2}
_POINT = {Sym.ZERO: Fraction(0), Sym.ONE: Fraction(1), Sym.INF: INF}
SYMBOLS = (Sym.ZERO, Sym.ONE, Sym.INF)


def third(a: Sym, b: Sym) -> Sym:
    """The letter completing {a, b} to {0, 1, inf}."""
    if a is b:
        raise ValueError(f"letters must differ, got {a} twice")
    for s in SYMBOLS:
        if s is not a and s is not b:
            return s
    raise AssertionError("unreachable")


ParityClass = Sym
DeltaSymbol = Sym


def parity_class(p: int, q: int) -> Sym:
    """Parity class of p/q, which must be in lowest terms (q may be 0 for 1/0)."""
    if p % 2 == 0:
        if q % 2 == 0:
            raise ValueError(f"{p}/{q} is not in lowest terms")
        return Sym.ZERO
    return Sym.ONE if q % 2 else Sym.INF


# ---------------------------------------------------------------------------
# 2x2 integer matrices modulo sign
# ---------------------------------------------------------------------------

class Mat2:
    """An element of PGL(2, Z) as a canonical integer matrix ``[[a, b], [c, d]]``.

    Canonical form: the first nonzero entry of the bottom row is positive.
    """

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int, b: int, c: int, d: int):
        det = a * d - b * c
        if det not in (1, -1):
            raise ValueError(f"determinant must be +-1, got {det}")
        self._set(a, b, c, d)

    @classmethod
    def _raw(cls, a, b, c, d) -> "Mat2":
        obj = object.__new__(cls)
        obj._set(a, b, c, d)
        return obj

    def _set(self, a, b, c, d):
        if c < 0 or (c == 0 and d < 0):
            a, b, c, d = -a, -b, -c, -d
        self.a, self.b, self.c, self.d = a, b, c, d

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def rows(self) -> list[list[int]]:
        return [[self.a, self.b], [self.c, self.d]]

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2._raw(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                         self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    __mul__ = __matmul__

    def inverse(self) -> "Mat2":
        # adjugate; the determinant is a unit and signs are projective
        return Mat2._raw(self.d, -self.b, -self.c, self.a)

    def __pow__(self, k: int) -> "Mat2":
        if k < 0:
            return self.inverse() ** (-k)
        result, base = IDENTITY, self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __call__(self, x):
        return moebius_apply(self, x)

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self) -> str:
        return f"Mat2({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


ExtendedReal = Union[Fraction, QuadraticSurd, _Infinity]


def moebius_apply(M: Mat2, x):
    """Image of a boundary point under ``z -> (a z + b)/(c z + d)``.

    For det -1 the action on H involves conjugation, which is trivial on the
    real line, so the same formula applies.  Rational inputs give
    Fractions, surds give surds, and poles map to INF.
    """
    if x is INF:
        return INF if M.c == 0 else Fraction(M.a, M.c)
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        num = M.a * x.numerator + M.b * x.denominator
        den = M.c * x.numerator + M.d * x.denominator
        return INF if den == 0 else Fraction(num, den)
    if isinstance(x, QuadraticSurd):
        # (a(p+q r)/s + b) / (c(p+q r)/s + d) with r = sqrt(d)
        num = QuadraticSurd._raw(M.a * x.a + M.b * x.c, M.a * x.b, 1, x.d)
        den = QuadraticSurd._raw(M.c * x.a + M.d * x.c, M.c * x.b, 1, x.d)
        if den.a == 0 and den.b == 0:
            return INF
        return num / den
    raise TypeError(f"cannot apply a matrix to {type(x).__name__}")


IDENTITY = Mat2(1, 0, 0, 1)
H0 = Mat2(-1, 2, 0, 1)
H1 = Mat2(-1, 0, 0, 1)
HINF = Mat2(1, 0, 2, -1)
H = {Sym.ZERO: H0, Sym.ONE: H1, Sym.INF: HINF}

J = Mat2(0, 1, 1, 0)
K = Mat2(-1, 1, 0, 1)
L = Mat2(1, 1, 0, 1)
L_INV = Mat2(1, -1, 0, 1)
R = Mat2(1, 0, 1, 1)

GAMMA = {
    "I": IDENTITY,
    "J": J,
    "K": K,
    "JK": J @ K,
    "KJ": K @ J,
    "JKJ": J @ K @ J,
}


def gamma_name(S: Mat2) -> str:
    for name, M in GAMMA.items():
        if M == S:
            return name
    raise ValueError(f"{S} is not in the symmetry group of the triangle 0, 1, inf")


# ---------------------------------------------------------------------------
# Permutations of {0, 1, inf}
# ---------------------------------------------------------------------------

class PermS3:
    """A bijection of {0, 1, inf}, stored as the images of (0, 1, inf)."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if len(images) != 3 or set(images) != set(SYMBOLS):
            raise ValueError(f"not a permutation of 0, 1, inf: {images}")
        self.images = images

    @classmethod
    def identity(cls) -> "PermS3":
        return _ID_PERM

    @classmethod
    def from_mapping(cls, mapping: dict) -> "PermS3":
        return cls(mapping[s] for s in SYMBOLS)

    def __call__(self, s: Sym) -> Sym:
        return self.images[_RANK[s]]

    def __mul__(self, other: "PermS3") -> "PermS3":
        """Composition: (self * other)(s) == self(other(s))."""
        return PermS3(self(other(s)) for s in SYMBOLS)

    def inverse(self) -> "PermS3":
        return PermS3.from_mapping({self(s): s for s in SYMBOLS})

    def __eq__(self, other):
        if not isinstance(other, PermS3):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        return "PermS3(" + ", ".join(f"{s}->{self(s)}" for s in SYMBOLS) + ")"


_ID_PERM = PermS3(SYMBOLS)


def perm_of_gamma(S: Mat2) -> PermS3:
    """The permutation ``alpha -> S . alpha`` induced by a triangle symmetry."""
    gamma_name(S)  # membership check
    return PermS3(Sym.from_point(moebius_apply(S, s.point)) for s in SYMBOLS)


GAMMA_PERM = {name: perm_of_gamma(M) for name, M in GAMMA.items()}

"""Six continued-fraction interval maps on (0, 1), numerically and as Delta shifts.

Each map acts on x = [inf, alpha_2, ...] by a branch S . H_{alpha_j} ... H_{alpha_1}
with S in the six-element symmetry group, so symbolically it drops j symbols
and relabels the rest by the permutation of S.  ``map_step`` works from the
classical formulas only; ``symbolic_step`` works from the symbols only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import RationalInputError
from .exact_arith import (
    GAMMA, GAMMA_PERM, H, IDENTITY, Mat2, PermS3, QuadraticSurd, Sym, as_surd,
    floor_surd, gamma_name, moebius_apply, surd_sign,
)


class CfMapKind(enum.Enum):
    FAREY = "farey"
    GAUSS = "gauss"
    BY_EXCESS = "by-excess"
    EVEN = "even"
    ODD = "odd"
    ODD_ODD = "oddodd"

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str) -> "CfMapKind":
        key = text.strip().lower().replace("_", "-")
        aliases = {"byexcess": "by-excess", "excess": "by-excess", "odd-odd": "oddodd"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class MapStep:
    kind: CfMapKind
    input: QuadraticSurd
    output: QuadraticSurd
    branch: Mat2

    @property
    def inverse_branch(self) -> Mat2:
        return self.branch.inverse()


def _check_unit(x) -> QuadraticSurd:
    x = as_surd(x)
    if x.is_rational():
        raise RationalInputError(f"{x} is rational")
    if surd_sign(x) <= 0 or surd_sign(x - 1) >= 0:
        raise ValueError(f"{x} is outside the open unit interval")
    return x


def _branch(kind: CfMapKind, x: QuadraticSurd) -> Mat2:
    if kind is CfMapKind.FAREY:
        if surd_sign(2 * x - 1) < 0:
            return Mat2(1, 0, -1, 1)  # x/(1-x)
        return Mat2(-1, 1, 1, 0)  # (1-x)/x
    if kind is CfMapKind.ODD_ODD:
        k = floor_surd(1 / (1 - x))
        mid = Fraction(2 * k - 1, 2 * k + 1)
        if surd_sign(x - mid) < 0:
            return Mat2(k, -(k - 1), -(k + 1), k)
        return Mat2(-(k + 1), k, k, -(k - 1))
    m = floor_surd(1 / x)
    gauss = Mat2(-m, 1, 1, 0)  # 1/x - m
    excess = Mat2(m + 1, -1, 1, 0)  # m + 1 - 1/x
    if kind is CfMapKind.GAUSS:
        return gauss
    if kind is CfMapKind.BY_EXCESS:
        return excess
    if kind is CfMapKind.EVEN:
        return gauss if m % 2 == 0 else excess
    if kind is CfMapKind.ODD:
        return gauss if m % 2 == 1 else excess
    raise ValueError(f"unknown map {kind}")


def map_step(kind, x) -> MapStep:
    """One application of the map to an irrational x in (0, 1)."""
    kind = CfMapKind.parse(kind) if isinstance(kind, str) else kind
    x = _check_unit(x)
    B = _branch(kind, x)
    return MapStep(kind, x, moebius_apply(B, x), B)


def orbit(kind, x, steps: int) -> list[MapStep]:
    out = []
    for _ in range(steps):
        st = map_step(kind, x)
        out.append(st)
        x = st.output
    return out


# -- symbolic side ----------------------------------------------------------

class DeltaView:
    """alpha'_i = perm(base.alpha(i + offset)): a shifted, relabelled stream.

    Steps on a view return a new flat view over the same base, so long
    orbits never nest.
    """

    def __init__(self, base, offset: int = 0, perm: PermS3 | None = None):
        if isinstance(base, DeltaView):
            offset += base.offset
            perm = (perm or PermS3.identity()) * base.perm
            base = base.base
        self.base = base
        self.offset = offset
        self.perm = perm or PermS3.identity()

    def alpha(self, i: int) -> Sym:
        if i < 1:
            raise IndexError("Delta symbols start at alpha_1")
        return self.perm(self.base.alpha(i + self.offset))

    __getitem__ = alpha

    def prefix(self, n: int) -> list[Sym]:
        return [self.alpha(i) for i in range(1, n + 1)]

    def first_index(self, pred, start: int = 1) -> int:
        j = start
        while not pred(self.alpha(j)):
            j += 1
        return j


@dataclass(frozen=True)
class SymbolicStep:
    kind: CfMapKind
    consumed: int
    relabel: str  # name of S
    output: DeltaView
    word: tuple  # the dropped symbols alpha_1 ... alpha_j

    @property
    def perm(self) -> PermS3:
        return GAMMA_PERM[self.relabel]

    def branch(self) -> Mat2:
        """S . H_{alpha_j} ... H_{alpha_1}."""
        M = GAMMA[self.relabel]
        for a in reversed(self.word):
            M = M @ H[a]
        return M


def gauss_index(v: DeltaView) -> int:
    """m = min{j >= 1 : alpha_{j+1} = 0}; equals a_1 on [0; a_1, ...]."""
    return v.first_index(lambda a: a is Sym.ZERO, 2) - 1


def oddodd_index(v: DeltaView) -> int:
    """m~ = min{j >= 1 : alpha_j = 1}."""
    return v.first_index(lambda a: a is Sym.ONE, 1)


def symbolic_step(kind, stream) -> SymbolicStep:
    kind = CfMapKind.parse(kind) if isinstance(kind, str) else kind
    v = stream if isinstance(stream, DeltaView) else DeltaView(stream)
    if v.alpha(1) is not Sym.INF:
        raise ValueError("the maps act on [inf, ...], i.e. on the unit interval")
    if kind is CfMapKind.FAREY:
        j = 1
        S = "JKJ" if v.alpha(2) is Sym.ONE else "KJ"
    elif kind is CfMapKind.ODD_ODD:
        j = oddodd_index(v)
        S = "I" if v.alpha(j + 1) is Sym.INF else "J"
    else:
        j = gauss_index(v)
        even = j % 2 == 0
        S = {
            CfMapKind.GAUSS: "J" if even else "KJ",
            CfMapKind.BY_EXCESS: "KJ" if even else "J",
            CfMapKind.EVEN: "J",
            CfMapKind.ODD: "KJ",
        }[kind]
    word = tuple(v.prefix(j))
    return SymbolicStep(kind, j, S, DeltaView(v, j, GAMMA_PERM[S]), word)


def branch_relabel(B: Mat2, word) -> str | None:
    """Name of S with B = S . H_{word[-1]} ... H_{word[0]}, or None."""
    M = B
    for a in word:
        M = M @ H[a]
    try:
        return gamma_name(M)
    except ValueError:
        return None


# -- reports ----------------------------------------------------------------

def gauss_equals_farey_power(x, n_checks: int) -> list[tuple[int, bool]]:
    """For n successive Gauss steps, whether psi(x) equals phi^{a1}(x) exactly."""
    x = _check_unit(x)
    report = []
    for _ in range(n_checks):
        g = map_step(CfMapKind.GAUSS, x)
        a1 = floor_surd(1 / x)
        y = x
        for _ in range(a1):
            y = map_step(CfMapKind.FAREY, y).output
        report.append((a1, y == g.output))
        x = g.output
    return report


def _inverse_orbit(kind: CfMapKind, x, i_max: int, seed: Fraction) -> list[Fraction]:
    x = _check_unit(x)
    out = []
    T = IDENTITY  # composite forward branch of psi^i near x
    for i in range(i_max):
        out.append(moebius_apply(T.inverse(), seed))
        if i + 1 < i_max:
            st = map_step(kind, x)
            T = st.branch @ T
            x = st.output
    return out


def even_inverse_orbit(x, i_max: int) -> list[Fraction]:
    """Preimages of 0 under the local inverses of the even map, starting at psi^0."""
    return _inverse_orbit(CfMapKind.EVEN, x, i_max, Fraction(0))


def oddodd_inverse_orbit(x, i_max: int) -> list[Fraction]:
    """Preimages of 1 under the local inverses of the odd-odd map, starting at psi^0."""
    return _inverse_orbit(CfMapKind.ODD_ODD, x, i_max, Fraction(1))


def even_parity_alternation(stream, count: int) -> bool:
    """Check the block structure behind the even-map recovery for i < count.

    With m_0 = 0 and m_i the first m >= m_{i-1} where alpha_{m+1} is inf
    (even i) or 0 (odd i), every alpha_m != 1 with m_i < m <= m_{i+1}
    equals J^i . inf.
    """
    v = stream if isinstance(stream, DeltaView) else DeltaView(stream)
    marks = [0]
    for i in range(1, count + 1):
        want = Sym.INF if i % 2 == 0 else Sym.ZERO
        marks.append(v.first_index(lambda a: a is want, marks[-1] + 1) - 1)
    for i in range(count):
        expect = Sym.INF if i % 2 == 0 else Sym.ZERO
        for m in range(marks[i] + 1, marks[i + 1] + 1):
            a = v.alpha(m)
            if a is not Sym.ONE and a is not expect:
                return False
    return True


def fractional_part(x) -> QuadraticSurd:
    x = as_surd(x)
    return x - floor_surd(x)


__all__ = [
    "CfMapKind", "MapStep", "DeltaView", "SymbolicStep", "map_step", "orbit",
    "symbolic_step", "gauss_index", "oddodd_index", "branch_relabel",
    "gauss_equals_farey_power", "even_inverse_orbit", "oddodd_inverse_orbit",
    "even_parity_alternation", "fractional_part",
]

"""Parity-restricted best rational approximations of real quadratic irrationals."""

from .errors import (
    InputParseError, ParityCFError, PrecisionExhausted, RadicandMismatchError,
    RationalInputError,
)
from .exact_arith import INF, Mat2, QuadraticSurd, Sym
from .rcf import RcfStream, rcf_expand
from .parity_best import (
    ApproxRecord, Limit, best_alpha, best_alpha_beta, best_class, best_set,
    s_alpha_set, signed_best_set,
)
from .delta import DeltaStream, DeltaWord, cylinder, delta_expand, delta_word_eval, theorem2_set
from .cfmaps import CfMapKind, even_inverse_orbit, map_step, oddodd_inverse_orbit, orbit

__all__ = [
    "ParityCFError", "InputParseError", "PrecisionExhausted", "RadicandMismatchError",
    "RationalInputError", "INF", "Mat2", "QuadraticSurd", "Sym", "RcfStream", "rcf_expand",
    "ApproxRecord", "Limit", "best_alpha", "best_alpha_beta", "best_class", "best_set",
    "s_alpha_set", "signed_best_set", "DeltaStream", "DeltaWord", "cylinder", "delta_expand",
    "delta_word_eval", "theorem2_set", "CfMapKind", "even_inverse_orbit", "map_step",
    "oddodd_inverse_orbit", "orbit",
]

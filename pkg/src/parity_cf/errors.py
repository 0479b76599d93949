"""Exception hierarchy shared by every layer of the package."""

from __future__ import annotations


class ParityCFError(Exception):
    """Base class for all errors raised by parity_cf."""


class RationalInputError(ParityCFError, ValueError):
    """An expansion was requested for a rational number."""


class RadicandMismatchError(ParityCFError, ValueError):
    """Two surds with different radicands were combined."""


class PrecisionExhausted(ParityCFError):
    """A decimal input cannot certify the requested partial quotient."""

    def __init__(self, message: str, certified: int | None = None):
        super().__init__(message)
        self.certified = certified


class InputParseError(ParityCFError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        self.text = text
        self.position = position
        where = f" at position {position}" if text else ""
        super().__init__(f"{message}{where}")

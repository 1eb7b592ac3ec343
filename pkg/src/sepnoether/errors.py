"""Exception hierarchy; each class maps onto a CLI exit code."""

from __future__ import annotations


class SepNoetherError(Exception):
    exit_code = 1


class ParseError(SepNoetherError, ValueError):
    """Malformed group, element or vector text."""

    exit_code = 2


class CapExceeded(SepNoetherError, RuntimeError):
    """A configured search cap would be exceeded; nothing is truncated."""

    exit_code = 3


class InvalidInput(SepNoetherError, ValueError):
    """Well-formed input that violates an operation's precondition."""

    exit_code = 4


class TrivialGroupError(InvalidInput):
    pass


class PreconditionError(InvalidInput):
    pass

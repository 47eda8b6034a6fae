"""Exception hierarchy shared across the package."""
from __future__ import annotations


class PsdlError(Exception):
    """Base class for all errors raised by this package."""


class PsdlSyntaxError(PsdlError):
    """Source text could not be parsed.

    Carries the 1-based position and, when the parser knows it, the set
    of token descriptions it would have accepted.
    """

    def __init__(self, message: str, line: int, col: int, expected: frozenset[str] = frozenset()):
        self.line = line
        self.col = col
        self.expected = expected
        suffix = f" (expected one of: {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{line}:{col}: {message}{suffix}")


class UnknownBuiltinError(PsdlSyntaxError):
    """A call names a function outside the builtin whitelist."""


class MalformedTargetError(PsdlSyntaxError):
    """Assignment to something that is not a writable attribute or variable."""


class PsdlRuntimeError(PsdlError):
    """Program execution failed; carries the statement position."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message = message
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}" if line else message)

    def at(self, line: int, col: int) -> "PsdlRuntimeError":
        """Same error with a position attached (used once, at statement level)."""
        return type(self)(self.message, line, col)


class WriteToSceneError(PsdlRuntimeError):
    """The scene object is read-only."""


class IdentifierCollisionError(PsdlError):
    """Two distinct template names sanitize to the same identifier."""


class StalePathError(PsdlError):
    """An edit site no longer resolves in the program it is applied to."""


class TemplateMismatchError(PsdlError):
    """Two layouts do not share the same object multiset."""


class InvalidSeedProgramError(PsdlError):
    """The program handed to a repair strategy does not execute."""

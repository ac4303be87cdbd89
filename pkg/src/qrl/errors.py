"""Exception hierarchy.

Every error raised by this package derives from QrlError, so callers can
catch one type at the boundary.  The split below matters operationally:

* MalformedFormulaError / PreconditionError: the caller handed us bad input.
* QdimacsParseError: bad input bytes, with a line/column diagnostic attached.
* OracleRefusal: the instance exceeds configured oracle limits.  A refusal
  is never a wrong answer; it must be counted, not swallowed.
* InternalInvariantError: a bug in this package (oracle cross-disagreement,
  a violated runtime bound).  Never raised for findings about the reduction
  calculus itself; those are data, not exceptions.
"""

from __future__ import annotations


class QrlError(Exception):
    """Base class for all package errors."""


class MalformedFormulaError(QrlError):
    """A Formula violates structural invariants (see Formula.validate)."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"malformed formula: {lines}")


class PreconditionError(QrlError):
    """An operation was called outside its documented precondition."""


class QdimacsParseError(QrlError):
    """Rejected QDIMACS input; carries a ParseDiagnostics record."""

    def __init__(self, diagnostics):
        self.diagnostics = diagnostics
        super().__init__(str(diagnostics))


class OracleRefusal(QrlError):
    """An exact oracle declined to run because the instance exceeds limits."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class InternalInvariantError(QrlError):
    """An internal consistency check failed; this is a bug in the package."""

"""
Exception types shared across the package.

Every failure mode that a caller can reasonably branch on gets its own
class; anything else is a plain ValueError at the point of offence.
"""


class BraidkitError(Exception):
    pass


class PoleError(BraidkitError, ZeroDivisionError):
    """Evaluation or limit at a point where the scalar has a pole."""


class DivisionByZero(BraidkitError, ZeroDivisionError):
    """Division by the zero scalar."""


class ParseError(BraidkitError, ValueError):
    """Malformed input text; carries the offending position."""

    def __init__(self, msg, pos=None):
        super().__init__(msg if pos is None else f"{msg} (at position {pos})")
        self.pos = pos


class NotSkewInvertible(BraidkitError):
    """The trace-inverse linear system for Psi is inconsistent."""


class Undetermined(BraidkitError):
    """A best-effort detection did not terminate within its bound."""


class NotComplementary(BraidkitError):
    """Two subspaces expected to span the ambient space do not."""


class Inconsistent(BraidkitError):
    """A linear system has no solution."""


class NonOrientable(BraidkitError):
    """A defining relation cannot be oriented under the monomial order."""


class TracelessUnitError(BraidkitError):
    """R-trace of the identity vanishes; no sl-type splitting exists."""


class NonScalarTrace(BraidkitError):
    """The image of the central trace element is not a scalar operator."""


class OmegaZero(BraidkitError):
    """The sl-reduction normalization factor vanishes."""


class RepeatedRoots(BraidkitError):
    """Cayley-Hamilton roots coincide; no idempotent splitting."""


class NonSquareDiscriminant(BraidkitError):
    """Roots would live in a quadratic extension of Q(q); not constructed."""


class CasimirMismatch(BraidkitError):
    """Representation and idempotent live over different Casimir values."""


class NotInvolutive(BraidkitError):
    """An operation requiring R^2 = Id received a non-involutive braiding."""


class DegreeOverflow(BraidkitError):
    """Requested degree exceeds the cached canonicalizer bound."""


class UnknownSuite(BraidkitError):
    """CLI verification suite name not recognized."""

"""Domain errors raised by the library.

Every precondition violation raises a subclass of DomainError. The CLI maps
these to exit code 1 and serializes the ``code`` attribute (the class name
without the ``Error`` suffix) so callers can dispatch on it without parsing
messages.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for all precondition violations in this package."""

    @property
    def code(self) -> str:
        name = type(self).__name__
        return name[:-5] if name.endswith("Error") else name


# ---------------------------------------------------------------------------
# Markov shift construction and word handling
# ---------------------------------------------------------------------------

class NotRowStochasticError(DomainError):
    """A transition matrix row does not sum to 1 within tolerance."""


class NotIrreducibleError(DomainError):
    """The positive-entry digraph of the transition matrix is not strongly connected."""


class InadmissibleWordError(DomainError):
    """A word contains a forbidden transition (some p(a,b) = 0 along it)."""


class WordTooShortError(DomainError):
    """A word is too short for the requested window or Birkhoff sum."""


class RefinementTooLargeError(DomainError):
    """Refining to the requested word length would exceed the state cap."""


# ---------------------------------------------------------------------------
# Ceilings and suspension systems
# ---------------------------------------------------------------------------

class NonArithmeticCeilingError(DomainError):
    """The ceiling function has no declared lattice or values off its lattice."""


class NonPositiveCeilingError(DomainError):
    """A ceiling value is not strictly positive."""


class EpsilonTooLargeError(DomainError):
    """Rationalization step exceeds the infimum of the ceiling."""


# ---------------------------------------------------------------------------
# Holes and open systems
# ---------------------------------------------------------------------------

class NotReducedError(DomainError):
    """The word admits no last-letter substitution, so it is not reduced."""


class HoleShorterThanCeilingOrderError(DomainError):
    """The hole word is shorter than the ceiling order."""


# ---------------------------------------------------------------------------
# Polynomials and zeta determinants
# ---------------------------------------------------------------------------

class DimensionTooLargeError(DomainError):
    """Matrix dimension exceeds the cap for dense polynomial extraction."""


class NoZeroAtOneError(DomainError):
    """Polynomial has no zero at z = 1, so the (1-z) factor cannot be removed."""


class PoleAtOneError(DomainError):
    """Rational function still has a pole at z = 1 after cancelling common zeros."""


class FactorizationMismatchError(DomainError):
    """Assembled zeta factorization disagrees with the direct determinant."""


class NoSignChangeError(DomainError):
    """No polynomial root found in the bracket by scan or companion fallback."""


# ---------------------------------------------------------------------------
# Periodic families and expansions
# ---------------------------------------------------------------------------

class NotPrimePeriodError(DomainError):
    """The base word is a nontrivial power of a shorter word."""


class NotCyclicallyAdmissibleError(DomainError):
    """The base word cannot be closed into a periodic orbit (wrap transition forbidden)."""


class DegenerateLinearTermError(DomainError):
    """Leading expansion coefficient vanishes; the recursion cannot proceed."""


# ---------------------------------------------------------------------------
# Induced pressure
# ---------------------------------------------------------------------------

class WindowEmptyError(DomainError):
    """No surviving word has its ceiling sum inside the truncation window."""


class NoBracketError(DomainError):
    """Spectral radius stays below 1 on the whole bisection bracket."""


class PressureNotNegativeError(DomainError):
    """Induced pressure is not negative, so reciprocal bounds are undefined."""


# ---------------------------------------------------------------------------
# Monte Carlo
# ---------------------------------------------------------------------------

class AllMassEscapedError(DomainError):
    """Every sample escaped inside the fit window; no rate can be bracketed."""


class NoConvergenceError(DomainError):
    """An iterative routine failed to reach its tolerance within its budget."""

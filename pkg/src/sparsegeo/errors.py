"""Exception hierarchy.

Every failure the solver can detect is an exception subclass. Failures caused
by an unlucky random draw carry a ``redraw`` tag naming the random choice that
must be re-sampled; the pipeline's retry loop dispatches on that tag.
"""


class SolverError(Exception):
    """Base class for all solver errors."""

    redraw = None


class ConsistencyError(SolverError):
    """An internal invariant failed. Not fixable by fresh randomness."""


# core arithmetic ------------------------------------------------------------

class JetSingular(SolverError):
    """Division by a jet whose value part is zero."""

    redraw = "linear_form"


class SeriesNotInvertible(SolverError):
    """Division by a power series with zero constant term."""

    redraw = "linear_form"


class PadeDegenerate(SolverError):
    """No rational function of the requested degrees matches the series."""

    redraw = "everything"


class NotCoprime(SolverError):
    """Modular inverse requested for a non-unit."""

    redraw = "linear_form"


# geometry -------------------------------------------------------------------

class MissingOrigin(SolverError):
    """Some support does not contain the origin."""


class DegenerateLifting(SolverError):
    """The lifting function does not induce a fine mixed subdivision."""

    redraw = "lifting"


class NonIntegerVolume(ConsistencyError):
    """A mixed volume came out non-integral."""


# binomial start systems -----------------------------------------------------

class H2Violated(SolverError):
    """A cell matrix is singular or its solution vector has a zero entry."""

    redraw = "perturbation"

    def __init__(self, reason, message=""):
        super().__init__(f"{reason}: {message}" if message else reason)
        self.reason = reason


class SingularMatrix(SolverError):
    """Smith normal form requested for a singular integer matrix."""


class NotSeparating(SolverError):
    """The linear form takes the same value at two distinct points."""

    redraw = "linear_form"


# lifting --------------------------------------------------------------------

class SingularJacobian(SolverError):
    """The Jacobian of the start system vanishes at some start point."""

    redraw = "perturbation"


class JacobianNotInvertibleInQuotient(SolverError):
    """The Jacobian determinant is a zero divisor in the quotient ring."""

    redraw = "perturbation"


class PrecisionStall(ConsistencyError):
    """A Newton step failed to raise the precision."""


class FractionalResidue(SolverError):
    """A product of branch factors kept a non-integral power of T."""

    redraw = "everything"


class PoleAtOne(SolverError):
    """A recovered rational function has a pole at T = 1."""

    redraw = "lifting"


class DivisionNotExact(ConsistencyError):
    """A polynomial division expected to be exact left a remainder."""


# pipeline -------------------------------------------------------------------

class PreconditionFailed(SolverError):
    """The input violates a precondition (missing origin, zero mixed volume)."""

    def __init__(self, reason, message=""):
        super().__init__(f"{reason}: {message}" if message else reason)
        self.reason = reason


class RetriesExhausted(SolverError):
    """Every allowed retry hit a detected failure."""

    def __init__(self, last_error, retries):
        super().__init__(f"retries exhausted after {retries}; last failure: {last_error!r}")
        self.last_error = last_error
        self.retries = retries


class Unverifiable(SolverError):
    """The final substitution check failed. Indicates a bug."""

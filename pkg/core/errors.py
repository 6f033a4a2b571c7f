"""Exception hierarchy for the rotational CMC surface library.

Every error derives from :class:`CMCError` and also from the builtin
exception a caller would naturally catch (``ValueError`` for bad inputs,
``RuntimeError`` for numerical breakdown). The CLI maps the three
families to exit codes:

    - :class:`DomainError` -> 2 (invalid parameters)
    - :class:`NumericalError` -> 3 (numerical failure)
    - :class:`GeometricPreconditionError` -> 4 (geometric precondition)

Example:
    >>> from core.errors import DomainError, NoSphereError
    >>> issubclass(NoSphereError, ValueError)
    True
    >>> try:
    ...     raise NoSphereError("4H^2 + kappa <= 0")
    ... except DomainError as exc:
    ...     str(exc)
    '4H^2 + kappa <= 0'
"""

from typing import Any


class CMCError(Exception):
    """Root of all library errors."""


# ---------------------------------------------------------------------------
# Invalid input (exit code 2)
# ---------------------------------------------------------------------------


class DomainError(CMCError, ValueError):
    """Input outside the domain of an operation.

    Raised for inadmissible (H, E) pairs, coordinates outside a chart or
    an admissible band, non-tangent vectors and unsupported space kinds.
    """


class NoSphereError(DomainError):
    """A sphere quantity was requested where no CMC sphere exists."""


class BracketError(DomainError):
    """A root or bisection bracket does not enclose a sign change."""


# ---------------------------------------------------------------------------
# Singular evaluation
# ---------------------------------------------------------------------------


class SingularEvaluationError(CMCError, ArithmeticError):
    """A formula was evaluated at one of its singular points.

    The profile ODE is singular on the rotation axis and the reduced
    formulas are singular at turning points; callers switch to the
    reflection or pole continuation rules instead.
    """


# ---------------------------------------------------------------------------
# Numerical failure (exit code 3)
# ---------------------------------------------------------------------------


class NumericalError(CMCError, RuntimeError):
    """A numerical method failed to meet its contract."""


class IntegrationError(NumericalError):
    """The profile integrator failed.

    Attributes:
        state: Last accepted state (a ``ProfileState`` or ``None``).
    """

    def __init__(self, message: str, state: Any = None) -> None:
        super().__init__(message)
        self.state = state


class QuadratureError(NumericalError):
    """Quadrature did not converge within its level budget.

    Attributes:
        estimates: Integral estimate per refinement level.
    """

    def __init__(self, message: str, estimates: list[float] | None = None) -> None:
        super().__init__(message)
        self.estimates: list[float] = list(estimates or [])


# ---------------------------------------------------------------------------
# Geometric precondition (exit code 4)
# ---------------------------------------------------------------------------


class GeometricPreconditionError(CMCError, RuntimeError):
    """A geometric precondition failed.

    Examples are a stereographic pole lying on the exported surface or a
    degenerate first fundamental form at an oracle sample point.
    """

"""Shared numerical machinery.

Provides the pieces every geometric module leans on:

- Endpoint-singular quadrature (tanh-sinh with level halving, or
  Gauss-Legendre after the sine substitution x = m + h sin(theta)).
- Bracketed root finding (Brent's method via ``scipy.optimize.brentq``).
- Continued-fraction rational approximation with exact ``Fraction``
  arithmetic.

Integrand contract:
    Integrands are vectorized and receive ``f(x, lo, hi)`` where ``lo`` and
    ``hi`` are the distances x - a and b - x computed without cancellation
    from the quadrature parametrization. Period integrands are written in
    factored form (t - t1 = sin(x - x1) sin(x + x1)), so passing the
    distances keeps them accurate down to the last node.

Example:
    >>> import numpy as np
    >>> from core.numerics_kernel import integrate_endpoint_singular
    >>> value = integrate_endpoint_singular(lambda x, lo, hi: 1.0 / np.sqrt(lo * hi), 0.0, 1.0)
    >>> abs(value - np.pi) < 1e-12
    True
    >>> from core.numerics_kernel import rational_approx
    >>> rational_approx(np.pi, 120)[:2]
    (355, 113)
"""

import logging
import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import brentq
from scipy.special import roots_legendre

from core.errors import BracketError, NumericalError, QuadratureError

logger: logging.Logger = logging.getLogger(__name__)

SingularIntegrand = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
"""Vectorized integrand ``f(x, lo, hi)`` with lo = x - a and hi = b - x."""

_TANH_SINH_T_MAX: float = 4.5
_GAUSS_BASE_NODES: int = 16
_MIN_LEVELS: int = 3


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


class QuadratureMethod(str, Enum):
    """Quadrature rule for endpoint-singular integrals.

    Attributes:
        DOUBLE_EXPONENTIAL: tanh-sinh rule, step halved per level.
        GAUSS_SINE: Gauss-Legendre in theta after x = m + h sin(theta);
            node count doubled per level.
    """

    DOUBLE_EXPONENTIAL = "DoubleExponential"
    GAUSS_SINE = "GaussAfterSineSubstitution"


class QuadratureSpec(BaseModel):
    """Quadrature configuration.

    Attributes:
        method: Rule to use.
        abs_tol: Absolute tolerance on successive level estimates.
        rel_tol: Relative tolerance on successive level estimates.
        max_levels: Refinement budget before :class:`QuadratureError`.

    Example:
        >>> QuadratureSpec().method.value
        'DoubleExponential'
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    method: QuadratureMethod = Field(
        default=QuadratureMethod.DOUBLE_EXPONENTIAL,
        description="Quadrature rule",
    )
    abs_tol: float = Field(default=1e-14, gt=0.0, description="Absolute tolerance")
    rel_tol: float = Field(default=1e-12, gt=0.0, description="Relative tolerance")
    max_levels: int = Field(
        default=10,
        ge=_MIN_LEVELS,
        le=16,
        description="Maximum number of refinement levels",
    )


class RootBracket(BaseModel):
    """Sign-changing bracket [lo, hi] of a scalar function.

    Attributes:
        lo: Left end.
        hi: Right end.
        f_lo: Function value at lo.
        f_hi: Function value at hi.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    @model_validator(mode="after")
    def _check_sign_change(self) -> "RootBracket":
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not (math.isfinite(self.f_lo) and math.isfinite(self.f_hi)):
            raise ValueError("bracket end values must be finite")
        if self.f_lo * self.f_hi > 0.0:
            raise ValueError(
                f"no sign change on [{self.lo}, {self.hi}]: f = ({self.f_lo}, {self.f_hi})"
            )
        return self

    @classmethod
    def from_function(cls, f: Callable[[float], float], lo: float, hi: float) -> "RootBracket":
        """Evaluate f at both ends and build the bracket.

        Raises:
            BracketError: If f does not change sign on [lo, hi].
        """
        try:
            return cls(lo=lo, hi=hi, f_lo=float(f(lo)), f_hi=float(f(hi)))
        except ValueError as exc:
            raise BracketError(str(exc)) from exc


class RationalApprox(NamedTuple):
    """Continued-fraction convergent p/q of x with |x - p/q| = residual."""

    p: int
    q: int
    residual: float


# ---------------------------------------------------------------------------
# Endpoint-singular quadrature
# ---------------------------------------------------------------------------


def _tanh_sinh_nodes(
    t: np.ndarray, a: float, b: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Nodes, endpoint distances and weights of tanh-sinh at abscissae t."""
    half: float = 0.5 * (b - a)
    u: np.ndarray = 0.5 * np.pi * np.sinh(np.abs(t))
    decay: np.ndarray = np.exp(-2.0 * u)
    near: np.ndarray = 2.0 * half * decay / (1.0 + decay)
    far: np.ndarray = (b - a) - near
    left: np.ndarray = t < 0.0
    lo: np.ndarray = np.where(left, near, far)
    hi: np.ndarray = np.where(left, far, near)
    x: np.ndarray = np.where(left, a + lo, b - hi)
    weight: np.ndarray = half * 0.5 * np.pi * np.cosh(t) * 4.0 * decay / (1.0 + decay) ** 2
    return x, lo, hi, weight


def _weighted_sum(
    f: SingularIntegrand, x: np.ndarray, lo: np.ndarray, hi: np.ndarray, weight: np.ndarray
) -> float:
    keep: np.ndarray = (weight > 0.0) & (lo > 0.0) & (hi > 0.0)
    if not np.any(keep):
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        values: np.ndarray = np.asarray(f(x[keep], lo[keep], hi[keep]), dtype=float)
    finite: np.ndarray = np.isfinite(values)
    if not np.all(finite):
        bad: float = float(x[keep][~finite][0])
        raise QuadratureError(
            f"integrand is not finite at {int(np.count_nonzero(~finite))} nodes (first at x = {bad!r})"
        )
    return float(np.sum(weight[keep] * values))


def _converged(current: float, previous: float, spec: QuadratureSpec) -> bool:
    return abs(current - previous) <= max(spec.abs_tol, spec.rel_tol * abs(current))


def _integrate_tanh_sinh(f: SingularIntegrand, a: float, b: float, spec: QuadratureSpec) -> float:
    step: float = 0.5
    t: np.ndarray = np.arange(-_TANH_SINH_T_MAX, _TANH_SINH_T_MAX + 0.5 * step, step)
    partial: float = _weighted_sum(f, *_tanh_sinh_nodes(t, a, b))
    estimates: list[float] = [step * partial]
    for level in range(1, spec.max_levels):
        step *= 0.5
        # Only the new (odd) abscissae are evaluated at each level.
        t = np.arange(-_TANH_SINH_T_MAX + step, _TANH_SINH_T_MAX, 2.0 * step)
        partial += _weighted_sum(f, *_tanh_sinh_nodes(t, a, b))
        estimates.append(step * partial)
        logger.debug("tanh-sinh level %d: %.17g", level, estimates[-1])
        if level >= _MIN_LEVELS - 1 and _converged(estimates[-1], estimates[-2], spec):
            return estimates[-1]
    raise QuadratureError(
        f"tanh-sinh did not converge on [{a}, {b}] within {spec.max_levels} levels",
        estimates,
    )


@lru_cache(maxsize=32)
def _legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = roots_legendre(n)
    return nodes, weights


def _integrate_gauss_sine(f: SingularIntegrand, a: float, b: float, spec: QuadratureSpec) -> float:
    half: float = 0.5 * (b - a)
    mid: float = 0.5 * (a + b)
    estimates: list[float] = []
    for level in range(spec.max_levels):
        n: int = _GAUSS_BASE_NODES * 2**level
        nodes, weights = _legendre(n)
        theta: np.ndarray = 0.5 * np.pi * nodes
        # 1 + sin(theta) = 2 sin^2(theta/2 + pi/4), 1 - sin(theta) = 2 cos^2(theta/2 + pi/4)
        lo: np.ndarray = 2.0 * half * np.sin(0.5 * theta + 0.25 * np.pi) ** 2
        hi: np.ndarray = 2.0 * half * np.cos(0.5 * theta + 0.25 * np.pi) ** 2
        x: np.ndarray = np.where(theta < 0.0, a + lo, b - hi)
        x = np.where(theta == 0.0, mid, x)
        jacobian: np.ndarray = 0.5 * np.pi * half * np.cos(theta)
        estimates.append(_weighted_sum(f, x, lo, hi, weights * jacobian))
        logger.debug("Gauss-sine n=%d: %.17g", n, estimates[-1])
        if level >= 1 and _converged(estimates[-1], estimates[-2], spec):
            return estimates[-1]
    raise QuadratureError(
        f"Gauss-sine quadrature did not converge on [{a}, {b}] within {spec.max_levels} levels",
        estimates,
    )


def integrate_endpoint_singular(
    f: SingularIntegrand,
    a: float,
    b: float,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integrate f over (a, b) allowing inverse-square-root endpoint behaviour.

    Args:
        f: Vectorized integrand ``f(x, lo, hi)``; lo = x - a, hi = b - x.
        a: Left end.
        b: Right end (b > a; b == a returns 0).
        spec: Quadrature configuration, defaults to :class:`QuadratureSpec`.

    Returns:
        The integral estimate of the last converged level.

    Raises:
        QuadratureError: If successive levels never agree to tolerance or the
            integrand is not finite at a node.
    """
    spec = spec or QuadratureSpec()
    if b == a:
        return 0.0
    if b < a:
        return -integrate_endpoint_singular(lambda x, lo, hi: f(x, hi, lo), b, a, spec)
    if spec.method is QuadratureMethod.GAUSS_SINE:
        return _integrate_gauss_sine(f, a, b, spec)
    return _integrate_tanh_sinh(f, a, b, spec)


# ---------------------------------------------------------------------------
# Root finding
# ---------------------------------------------------------------------------


def find_root(f: Callable[[float], float], bracket: RootBracket, tol: float = 1e-14) -> float:
    """Locate a root of f inside a sign-changing bracket with Brent's method.

    Args:
        f: Scalar function.
        bracket: Validated sign-changing bracket.
        tol: Absolute width tolerance passed as ``xtol``.

    Returns:
        A root in [bracket.lo, bracket.hi].

    Raises:
        NumericalError: If Brent's iteration fails to converge.
    """
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    root, info = brentq(
        f,
        bracket.lo,
        bracket.hi,
        xtol=tol,
        rtol=4.0 * np.finfo(float).eps,
        maxiter=200,
        full_output=True,
        disp=False,
    )
    if not info.converged:
        raise NumericalError(f"brentq failed on [{bracket.lo}, {bracket.hi}]: {info.flag}")
    logger.debug("Root %.17g after %d iterations", root, info.iterations)
    return float(min(max(root, bracket.lo), bracket.hi))


# ---------------------------------------------------------------------------
# Rational approximation
# ---------------------------------------------------------------------------


def rational_approx(x: float, qmax: int) -> RationalApprox:
    """Last continued-fraction convergent of x with denominator <= qmax.

    The expansion runs on the exact binary value ``Fraction(x)``, so an
    exactly representable p/q with q <= qmax is returned with residual 0.

    Raises:
        ValueError: If qmax < 1 or x is not finite.
    """
    if qmax < 1:
        raise ValueError(f"qmax must be >= 1, got {qmax}")
    if not math.isfinite(x):
        raise ValueError(f"cannot approximate non-finite value {x}")
    target: Fraction = Fraction(x)
    remainder: Fraction = target
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    best: tuple[int, int] = (math.floor(target), 1)
    while True:
        digit: int = math.floor(remainder)
        p_prev, p = p, digit * p + p_prev
        q_prev, q = q, digit * q + q_prev
        if q > qmax:
            break
        best = (p, q)
        fractional: Fraction = remainder - digit
        if fractional == 0:
            break
        remainder = 1 / fractional
    residual: float = float(abs(target - Fraction(best[0], best[1])))
    return RationalApprox(p=best[0], q=best[1], residual=residual)

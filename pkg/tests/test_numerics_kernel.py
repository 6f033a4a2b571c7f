"""Unit tests for core.numerics_kernel module.

Tests the endpoint-singular quadrature in both modes, the bracketed root
finder and the continued-fraction rational approximation.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import BracketError, QuadratureError
from core.numerics_kernel import (
    QuadratureMethod,
    QuadratureSpec,
    RootBracket,
    find_root,
    integrate_endpoint_singular,
    rational_approx,
)

GAUSS: QuadratureSpec = QuadratureSpec(method=QuadratureMethod.GAUSS_SINE)


def _arcsine_density(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """1 / sqrt(x (1 - x)) on (0, 1), written with the exact endpoint distances."""
    return 1.0 / np.sqrt(lo * hi)


# ---------------------------------------------------------------------------
# QuadratureSpec / RootBracket Tests
# ---------------------------------------------------------------------------


class TestModels:
    """Tests for QuadratureSpec and RootBracket validation."""

    def test_spec_defaults(self) -> None:
        """Default is double-exponential with tight tolerances."""
        spec: QuadratureSpec = QuadratureSpec()
        assert spec.method is QuadratureMethod.DOUBLE_EXPONENTIAL
        assert spec.rel_tol == 1e-12

    def test_spec_rejects_non_positive_tolerance(self) -> None:
        """Tolerances must be > 0."""
        with pytest.raises(ValidationError):
            QuadratureSpec(abs_tol=0.0)

    def test_bracket_requires_sign_change(self) -> None:
        """f_lo * f_hi > 0 is rejected."""
        with pytest.raises(ValidationError, match="no sign change"):
            RootBracket(lo=0.0, hi=1.0, f_lo=1.0, f_hi=2.0)

    def test_from_function_raises_bracket_error(self) -> None:
        """from_function turns a constant-sign bracket into BracketError."""
        with pytest.raises(BracketError):
            RootBracket.from_function(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_bracket_order(self) -> None:
        """lo < hi is required."""
        with pytest.raises(ValidationError, match="lo < hi"):
            RootBracket(lo=1.0, hi=0.0, f_lo=-1.0, f_hi=1.0)


# ---------------------------------------------------------------------------
# Quadrature Tests
# ---------------------------------------------------------------------------


class TestIntegrateEndpointSingular:
    """Tests for integrate_endpoint_singular."""

    @pytest.mark.parametrize("spec", [QuadratureSpec(), GAUSS])
    def test_arcsine_integral(self, spec: QuadratureSpec) -> None:
        """int_0^1 dx / sqrt(x (1 - x)) = pi."""
        assert integrate_endpoint_singular(_arcsine_density, 0.0, 1.0, spec) == pytest.approx(
            math.pi, abs=1e-12
        )

    @pytest.mark.parametrize("spec", [QuadratureSpec(), GAUSS])
    def test_half_disk(self, spec: QuadratureSpec) -> None:
        """int_{-1}^{1} sqrt(1 - x^2) dx = pi / 2."""
        value: float = integrate_endpoint_singular(lambda x, lo, hi: np.sqrt(lo * hi), -1.0, 1.0, spec)
        assert value == pytest.approx(0.5 * math.pi, abs=1e-12)

    def test_smooth_integrand(self) -> None:
        """int_0^pi sin x dx = 2."""
        value: float = integrate_endpoint_singular(lambda x, lo, hi: np.sin(x), 0.0, math.pi)
        assert value == pytest.approx(2.0, abs=1e-12)

    def test_reversed_limits(self) -> None:
        """Swapping the limits flips the sign."""
        forward: float = integrate_endpoint_singular(_arcsine_density, 0.0, 1.0)
        backward: float = integrate_endpoint_singular(_arcsine_density, 1.0, 0.0)
        assert backward == pytest.approx(-forward, abs=1e-13)

    def test_empty_interval(self) -> None:
        """a == b integrates to 0."""
        assert integrate_endpoint_singular(_arcsine_density, 0.3, 0.3) == 0.0

    def test_shifted_interval_uses_distances(self) -> None:
        """The arcsine integral is pi on any interval when written with lo, hi."""
        value: float = integrate_endpoint_singular(_arcsine_density, 2.0, 7.5)
        assert value == pytest.approx(math.pi, abs=1e-12)

    def test_non_convergence(self) -> None:
        """An unresolved oscillation exhausts the level budget."""
        spec: QuadratureSpec = QuadratureSpec(max_levels=4)
        with pytest.raises(QuadratureError) as info:
            integrate_endpoint_singular(lambda x, lo, hi: np.sin(1e4 * x), 0.0, 1.0, spec)
        assert len(info.value.estimates) == 4

    def test_non_finite_integrand_raises(self) -> None:
        """A node where the integrand is not finite fails instead of being skipped."""

        def seam(x: np.ndarray, _lo: np.ndarray, _hi: np.ndarray) -> np.ndarray:
            return np.where(x > 0.5, np.nan, 1.0)

        for method in QuadratureMethod:
            with pytest.raises(QuadratureError, match="not finite"):
                integrate_endpoint_singular(seam, 0.0, 1.0, QuadratureSpec(method=method))


# ---------------------------------------------------------------------------
# Root finding Tests
# ---------------------------------------------------------------------------


class TestFindRoot:
    """Tests for find_root."""

    def test_sqrt_two(self) -> None:
        """x^2 - 2 on [1, 2] gives sqrt(2)."""
        f = lambda x: x * x - 2.0  # noqa: E731
        root: float = find_root(f, RootBracket.from_function(f, 1.0, 2.0))
        assert root == pytest.approx(math.sqrt(2.0), abs=1e-14)

    def test_root_at_end(self) -> None:
        """A zero end value is returned as is."""
        f = lambda x: x - 1.0  # noqa: E731
        assert find_root(f, RootBracket.from_function(f, 1.0, 3.0)) == 1.0

    def test_root_inside_bracket(self) -> None:
        """The root lies inside the initial bracket."""
        f = lambda x: math.cos(x)  # noqa: E731
        root: float = find_root(f, RootBracket.from_function(f, 0.0, 3.0))
        assert 0.0 <= root <= 3.0
        assert root == pytest.approx(0.5 * math.pi, abs=1e-13)


# ---------------------------------------------------------------------------
# Rational approximation Tests
# ---------------------------------------------------------------------------


class TestRationalApprox:
    """Tests for rational_approx."""

    def test_one_half(self) -> None:
        """0.5 is exactly 1/2."""
        assert tuple(rational_approx(0.5, 10)) == (1, 2, 0.0)

    def test_pi_convergent(self) -> None:
        """pi with qmax = 120 gives 355/113."""
        approx = rational_approx(math.pi, 120)
        assert (approx.p, approx.q) == (355, 113)
        assert approx.residual < 3e-7

    def test_last_convergent_not_semiconvergent(self) -> None:
        """pi with qmax = 100 stops at 22/7, not at the closer semiconvergent 311/99."""
        approx = rational_approx(math.pi, 100)
        assert (approx.p, approx.q) == (22, 7)

    def test_denominator_bound(self) -> None:
        """The denominator never exceeds qmax."""
        for qmax in (1, 7, 50, 1000):
            assert rational_approx(math.e, qmax).q <= qmax

    def test_exact_fraction(self) -> None:
        """An exactly representable p/q is recovered with residual 0."""
        approx = rational_approx(3.0 / 8.0, 100)
        assert (approx.p, approx.q, approx.residual) == (3, 8, 0.0)

    def test_invalid_qmax(self) -> None:
        """qmax < 1 is rejected."""
        with pytest.raises(ValueError):
            rational_approx(0.5, 0)

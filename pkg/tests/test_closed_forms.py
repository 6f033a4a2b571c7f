"""Unit tests for core.closed_forms module.

Tests the sphere profile in both spaces, the sphere immersion, the
conformal factor (area identity and Gauss-Bonnet turn), the closed-form
area with its removable singularity, the Berger volume formulas and the
Clifford tori.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from core.closed_forms import (
    arc_ratio,
    aux_branch,
    clifford_immersion,
    clifford_radius,
    conformal_factor,
    conformal_log_derivative,
    sphere_area,
    sphere_half_domain,
    sphere_immersion,
    sphere_profile,
    sphere_profile_dy,
    sphere_profile_y,
    sphere_volume,
    sphere_volume_complement,
    torus_area_volume,
    total_volume,
)
from core.errors import DomainError, NoSphereError
from core.space_models import SpaceKind, SpaceParams

BERGER: SpaceParams = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=0.4)
SL2R: SpaceParams = SpaceParams(kind=SpaceKind.SL2R, kappa=-4.0, tau=1.0)


def _berger(tau: float) -> SpaceParams:
    return SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=tau)


# ---------------------------------------------------------------------------
# Helper Tests
# ---------------------------------------------------------------------------


class TestArcRatio:
    """Tests for the removable-singularity helper G."""

    def test_value_at_zero(self) -> None:
        """G(0) = 1."""
        assert float(arc_ratio(0.0)) == 1.0

    def test_branches(self) -> None:
        """G(1) = pi/4, G(-1/4) = 2 arctanh(1/2)."""
        assert float(arc_ratio(1.0)) == pytest.approx(0.25 * math.pi, rel=1e-14)
        assert float(arc_ratio(-0.25)) == pytest.approx(2.0 * math.atanh(0.5), rel=1e-14)

    def test_continuous_at_series_switch(self) -> None:
        """Series and closed form agree where they meet."""
        for edge in (1e-3, -1e-3):
            inside: float = float(arc_ratio(edge * (1.0 - 1e-9)))
            outside: float = float(arc_ratio(edge * (1.0 + 1e-9)))
            assert inside == pytest.approx(outside, abs=1e-12)


# ---------------------------------------------------------------------------
# Sphere profile Tests
# ---------------------------------------------------------------------------


class TestSphereProfile:
    """Tests for sphere_profile_y, sphere_profile_dy and sphere_profile."""

    def test_half_domain(self) -> None:
        """a = arctan(sqrt(kappa)/2H); a = pi/2 for the great sphere."""
        assert sphere_half_domain(0.5, BERGER) == pytest.approx(math.atan(2.0))
        assert sphere_half_domain(0.0, BERGER) == 0.5 * math.pi
        assert sphere_half_domain(1.2, SL2R) == pytest.approx(math.atanh(2.0 / 2.4))

    def test_aux_branch_ends(self) -> None:
        """lambda(0) = 1 and lambda(a) = 0."""
        a: float = sphere_half_domain(0.5, BERGER)
        assert float(aux_branch(0.0, 0.5, BERGER)) == pytest.approx(1.0)
        assert float(aux_branch(a, 0.5, BERGER)) == pytest.approx(0.0, abs=1e-7)

    def test_berger_vanishes_at_a(self) -> None:
        """y(a) = 0 and y <= 0 on [0, a]."""
        a: float = sphere_half_domain(0.5, BERGER)
        assert sphere_profile_y(a, 0.5, BERGER) == pytest.approx(0.0, abs=1e-7)
        ys: np.ndarray = np.asarray(sphere_profile_y(np.linspace(0.0, a, 50), 0.5, BERGER))
        assert np.all(ys <= 1e-7)

    def test_berger_matches_integrated_derivative(self) -> None:
        """y(x2) - y(x1) = int_{x1}^{x2} y'(t) dt away from the vertical tangent."""
        H: float = 0.5
        a: float = sphere_half_domain(H, BERGER)
        grid: np.ndarray = np.linspace(0.05, a - 0.05, 12)
        for x1, x2 in zip(grid[:-1], grid[1:]):
            integral, _ = quad(lambda t: sphere_profile_dy(t, H, BERGER), x1, x2, epsabs=1e-13)
            rise: float = sphere_profile_y(float(x2), H, BERGER) - sphere_profile_y(float(x1), H, BERGER)
            assert rise == pytest.approx(integral, abs=1e-10)

    def test_derivative_matches_finite_difference(self) -> None:
        """The printed y'(x) is the derivative of the closed form (both spaces)."""
        h: float = 1e-6
        for H, space in ((0.5, BERGER), (1.2, SL2R)):
            a: float = sphere_half_domain(H, space)
            for x in np.linspace(0.1 * a, 0.8 * a, 8):
                fd: float = (
                    sphere_profile_y(float(x) + h, H, space) - sphere_profile_y(float(x) - h, H, space)
                ) / (2.0 * h)
                assert fd == pytest.approx(sphere_profile_dy(float(x), H, space), rel=1e-6)

    def test_sl2r_even_increasing_convex(self) -> None:
        """Sl(2,R) profile: even, zero at +-a, increasing and convex on [0, a]."""
        H: float = 1.2
        a: float = sphere_half_domain(H, SL2R)
        xs: np.ndarray = np.linspace(0.0, a, 200)
        ys: np.ndarray = np.asarray(sphere_profile_y(xs, H, SL2R))
        assert sphere_profile_y(a, H, SL2R) == pytest.approx(0.0, abs=1e-7)
        assert sphere_profile_y(-0.3, H, SL2R) == pytest.approx(sphere_profile_y(0.3, H, SL2R))
        assert np.all(np.diff(ys) > 0.0)
        assert np.all(np.diff(ys, 2) > -1e-12)

    def test_great_sphere_profile(self) -> None:
        """H = 0 (Berger) gives the constant profile y = -pi/2."""
        assert sphere_profile_y(0.3, 0.0, BERGER) == pytest.approx(-0.5 * math.pi)

    def test_out_of_domain(self) -> None:
        """x beyond a is rejected."""
        with pytest.raises(DomainError):
            sphere_profile_y(2.0, 0.5, BERGER)

    def test_no_sphere_in_sl2r(self) -> None:
        """4H^2 + kappa <= 0 has no CMC sphere."""
        with pytest.raises(NoSphereError):
            sphere_profile_y(0.0, 0.9, SL2R)

    def test_embeddedness_flag(self) -> None:
        """Small tau spheres wrap past -pi; large tau spheres do not."""
        assert not sphere_profile(0.5, _berger(0.1)).embedded
        assert sphere_profile(0.5, _berger(0.1)).y0 < -math.pi
        assert sphere_profile(1.0, _berger(0.9)).embedded


# ---------------------------------------------------------------------------
# Immersion Tests
# ---------------------------------------------------------------------------


class TestSphereImmersion:
    """Tests for sphere_immersion."""

    def test_lands_on_axis(self) -> None:
        """x = -a maps to (e^{i y0}, 0)."""
        H: float = 0.7
        profile = sphere_profile(H, BERGER)
        p = sphere_immersion(-profile.a, 0.4, H, BERGER)
        assert p.z == pytest.approx(complex(math.cos(profile.y0), math.sin(profile.y0)), abs=1e-12)
        assert abs(p.w) == pytest.approx(0.0, abs=1e-12)

    def test_continuous_at_seam(self) -> None:
        """Both branches meet at x = 0 (up to the square-root tangent)."""
        left = sphere_immersion(-1e-10, 0.2, 0.7, BERGER)
        right = sphere_immersion(0.0, 0.2, 0.7, BERGER)
        assert abs(left.z - right.z) < 1e-4
        assert abs(left.w - right.w) < 1e-8

    def test_sl2r_point_on_quadric(self) -> None:
        """Sl(2,R) sphere points satisfy the hyperboloid constraint."""
        p = sphere_immersion(0.3, -1.0, 1.2, SL2R)
        assert abs(p.z) ** 2 - abs(p.w) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_t_out_of_range(self) -> None:
        """t outside [-pi, pi] is rejected."""
        with pytest.raises(DomainError):
            sphere_immersion(0.0, 4.0, 0.7, BERGER)


# ---------------------------------------------------------------------------
# Conformal factor and area Tests
# ---------------------------------------------------------------------------


class TestConformalFactor:
    """Tests for conformal_factor and conformal_log_derivative."""

    @pytest.mark.parametrize("H,tau", [(0.0, 0.4), (0.7, 0.4), (1.5, 0.8), (0.3, 1.3)])
    def test_area_identity(self, H: float, tau: float) -> None:
        """2 pi int e^{2u} dx equals the closed-form area."""
        space: SpaceParams = _berger(tau)
        integral, _ = quad(lambda x: conformal_factor(x, H, space), -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12)
        assert 2.0 * math.pi * integral == pytest.approx(sphere_area(H, space), rel=1e-8)

    def test_gauss_bonnet_turn(self) -> None:
        """u'(-inf) - u'(inf) = 2."""
        turn: float = conformal_log_derivative(-40.0, 0.7, BERGER) - conformal_log_derivative(40.0, 0.7, BERGER)
        assert turn == pytest.approx(2.0, abs=1e-12)

    def test_log_derivative_matches_factor(self) -> None:
        """u' is the derivative of log(e^{2u}) / 2."""
        h: float = 1e-5
        for x in (-2.0, -0.3, 0.0, 0.9, 3.0):
            fd: float = (
                math.log(conformal_factor(x + h, 0.7, BERGER)) - math.log(conformal_factor(x - h, 0.7, BERGER))
            ) / (4.0 * h)
            assert fd == pytest.approx(conformal_log_derivative(x, 0.7, BERGER), abs=1e-8)

    def test_decay(self) -> None:
        """e^{2u} decays like sech^2 x."""
        ratio: float = conformal_factor(30.0, 0.7, BERGER) * math.cosh(30.0) ** 2
        assert ratio == pytest.approx(4.0 / (4.0 * (0.49 + 0.16)), rel=1e-9)


class TestSphereArea:
    """Tests for sphere_area."""

    @pytest.mark.parametrize("H", [0.0, 0.5, 1.0, 2.0])
    def test_round_sphere_limit(self, H: float) -> None:
        """Both branches approach 4 pi/(1 + H^2) as 4 tau^2 -> kappa."""
        below: float = sphere_area(H, _berger(1.0 - 1e-4))
        above: float = sphere_area(H, _berger(1.0 + 1e-4))
        round_area: float = 4.0 * math.pi / (1.0 + H * H)
        assert below == pytest.approx(above, rel=1e-3)
        assert below == pytest.approx(round_area, rel=1e-3)

    def test_branch_agreement_near_singularity(self) -> None:
        """Areas at kappa - 4 tau^2 = +-1e-6 agree to 1e-4."""
        delta: float = 1e-6
        low: float = sphere_area(0.8, _berger(math.sqrt((4.0 - delta) / 4.0)))
        high: float = sphere_area(0.8, _berger(math.sqrt((4.0 + delta) / 4.0)))
        assert low == pytest.approx(high, rel=1e-4)

    def test_sl2r_area_positive(self) -> None:
        """Sl(2,R) spheres with 4H^2 + kappa > 0 have positive area."""
        assert sphere_area(1.2, SL2R) > 0.0

    def test_sl2r_without_sphere(self) -> None:
        """No area when 4H^2 + kappa <= 0."""
        with pytest.raises(NoSphereError):
            sphere_area(1.0, SL2R)


# ---------------------------------------------------------------------------
# Volume Tests
# ---------------------------------------------------------------------------


class TestSphereVolume:
    """Tests for the Berger volume formulas."""

    def test_minimal_sphere_is_half(self) -> None:
        """H = 0 encloses half of 32 pi^2 tau / kappa^2."""
        assert sphere_volume(0.0, BERGER) == pytest.approx(16.0 * math.pi**2 * 0.4 / 16.0, abs=1e-10)
        assert sphere_volume(0.0, BERGER) == pytest.approx(0.5 * total_volume(BERGER), abs=1e-10)

    def test_continuous_at_zero(self) -> None:
        """The H -> 0 limit matches the H = 0 value."""
        assert sphere_volume(1e-7, BERGER) == pytest.approx(sphere_volume(0.0, BERGER), rel=1e-5)

    def test_decreasing_in_H(self) -> None:
        """vol(Omega_H) strictly decreases on [0, 5]."""
        volumes: np.ndarray = np.array([sphere_volume(H, BERGER) for H in np.linspace(0.0, 5.0, 101)])
        assert np.all(np.diff(volumes) < 0.0)
        assert volumes[-1] > 0.0

    def test_complement(self) -> None:
        """Both regions add up to the total volume."""
        total: float = sphere_volume(1.0, BERGER) + sphere_volume_complement(1.0, BERGER)
        assert total == pytest.approx(total_volume(BERGER))

    def test_sl2r_unsupported(self) -> None:
        """The volume formula is Berger only."""
        with pytest.raises(DomainError):
            sphere_volume(1.2, SL2R)


# ---------------------------------------------------------------------------
# Clifford torus Tests
# ---------------------------------------------------------------------------


class TestCliffordTorus:
    """Tests for clifford_radius, clifford_immersion and torus_area_volume."""

    def test_minimal_radius(self) -> None:
        """H = 0 gives r = sqrt(1/2)."""
        assert clifford_radius(0.0, 1, BERGER) == pytest.approx(math.sqrt(0.5))

    def test_radii_complementary(self) -> None:
        """r(+)^2 + r(-)^2 = 1."""
        for H in (0.1, 0.8, 3.0):
            total: float = clifford_radius(H, 1, BERGER) ** 2 + clifford_radius(H, -1, BERGER) ** 2
            assert total == pytest.approx(1.0, abs=1e-14)

    def test_immersion_on_sphere(self) -> None:
        """Phi(s, t) lies on the unit sphere with |z| = r."""
        r: float = clifford_radius(0.6, -1, BERGER)
        z, w = clifford_immersion(np.linspace(0.0, 2.0 * math.pi * r, 7), np.linspace(-3.0, 3.0, 7), r)
        np.testing.assert_allclose(np.abs(z), r)
        np.testing.assert_allclose(np.abs(z) ** 2 + np.abs(w) ** 2, 1.0)

    def test_minimal_torus_area_volume(self) -> None:
        """At kappa = 4, H = 0: area 2 pi^2 tau, volume pi^2 tau."""
        area, volume = torus_area_volume(0.0, BERGER)
        assert area == pytest.approx(2.0 * math.pi**2 * 0.4)
        assert volume == pytest.approx(math.pi**2 * 0.4)

    def test_large_H_asymptotics(self) -> None:
        """Area and volume tend to 0 as H grows."""
        area, volume = torus_area_volume(1e4, BERGER)
        assert 0.0 < area < 1e-2
        assert 0.0 <= volume < 1e-6

    def test_sl2r_has_no_clifford_torus(self) -> None:
        """Clifford radii are Berger only."""
        with pytest.raises(DomainError):
            clifford_radius(0.0, 1, SL2R)

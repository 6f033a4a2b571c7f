"""Unit tests for core.bounds_classify module.

Tests the admissible energy ranges, the turning-point bands, the period
integrals, the compactness witness, the classification of every case in
both spaces and the default initial conditions.
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from core.bounds_classify import (
    BandShape,
    CliffordTorus,
    GreatSphere,
    Nodoid,
    OpenNodoidGraph,
    OpenSphereGraph,
    OpenUnduloidGraph,
    PoleChain,
    RationalWitness,
    Sphere,
    TurningBand,
    Unduloid,
    admissible,
    admissible_energy_range,
    band_polynomial,
    classify,
    compactness_test,
    default_start,
    period_T,
    pole_chain_advance,
    pole_chain_y_s1,
    turning_points,
)
from core.errors import DomainError
from core.profile_dynamics import FlowParams, energy
from core.space_models import SpaceKind, SpaceParams

BERGER: SpaceParams = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=0.4)
SL2R: SpaceParams = SpaceParams(kind=SpaceKind.SL2R, kappa=-4.0, tau=1.0)


# ---------------------------------------------------------------------------
# Energy range Tests
# ---------------------------------------------------------------------------


class TestAdmissibleEnergyRange:
    """Tests for admissible_energy_range and admissible."""

    def test_berger_minimal(self) -> None:
        """kappa = 4, H = 0 gives [-1/2, 1/2]."""
        energies = admissible_energy_range(0.0, BERGER)
        assert (energies.lower, energies.upper) == (pytest.approx(-0.5), pytest.approx(0.5))
        assert energies.contains(0.5)
        assert energies.contains(-0.5)
        assert not energies.contains(0.5 + 1e-6)

    def test_sl2r_positive_discriminant(self) -> None:
        """Sl(2,R), kappa = -4, H = 1.25: E < 1/4."""
        energies = admissible_energy_range(1.25, SL2R)
        assert energies.lower is None
        assert energies.upper == pytest.approx(0.25)
        assert not energies.contains(0.25)
        assert energies.contains(-100.0)

    def test_sl2r_zero_discriminant(self) -> None:
        """4H^2 + kappa = 0: E < H/2."""
        assert admissible_energy_range(1.0, SL2R).upper == pytest.approx(0.5)

    def test_sl2r_negative_discriminant(self) -> None:
        """4H^2 + kappa < 0: every energy is admissible."""
        energies = admissible_energy_range(0.5, SL2R)
        assert energies.lower is None and energies.upper is None
        assert admissible(FlowParams(H=0.5, E=1e6), SL2R)

    def test_negative_H_rejected(self) -> None:
        """The classification uses H >= 0."""
        with pytest.raises(DomainError, match="H >= 0"):
            admissible_energy_range(-0.1, BERGER)

    def test_negative_tau_rejected(self) -> None:
        """tau < 0 is normalized away before calling."""
        space: SpaceParams = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=-0.4)
        with pytest.raises(DomainError):
            admissible_energy_range(0.0, space)


# ---------------------------------------------------------------------------
# Turning band Tests
# ---------------------------------------------------------------------------


class TestTurningPoints:
    """Tests for turning_points and band_polynomial."""

    @pytest.mark.parametrize(
        "flow,space",
        [
            (FlowParams(H=0.0, E=0.3), BERGER),
            (FlowParams(H=0.5, E=0.1), BERGER),
            (FlowParams(H=0.5, E=-0.3), BERGER),
            (FlowParams(H=1.2, E=-0.2), SL2R),
            (FlowParams(H=1.2, E=0.1), SL2R),
        ],
    )
    def test_roots_of_band_polynomial(self, flow: FlowParams, space: SpaceParams) -> None:
        """p(t1) = p(t2) = 0 and p < 0 strictly inside."""
        band: TurningBand = turning_points(flow, space)
        assert band.shape is BandShape.TWO_SIDED
        assert band_polynomial(band.t1, flow, space) == pytest.approx(0.0, abs=1e-12)
        assert band_polynomial(band.t2, flow, space) == pytest.approx(0.0, abs=1e-12)
        inside: np.ndarray = np.linspace(band.t1, band.t2, 12)[1:-1]
        assert np.all(np.asarray(band_polynomial(inside, flow, space)) < 0.0)

    def test_minimal_unduloid_values(self) -> None:
        """kappa = 4, H = 0, E = 0.3: t1 = 0.1, t2 = 0.9."""
        band: TurningBand = turning_points(FlowParams(H=0.0, E=0.3), BERGER)
        assert band.t1 == pytest.approx(0.1, abs=1e-14)
        assert band.t2 == pytest.approx(0.9, abs=1e-14)

    def test_degenerate_at_range_end(self) -> None:
        """At E = E_max the band collapses to the Clifford latitude."""
        band: TurningBand = turning_points(FlowParams(H=0.0, E=0.5), BERGER)
        assert band.shape is BandShape.DEGENERATE
        assert band.x1 == pytest.approx(0.25 * math.pi)

    def test_pole_chain_reaches_pole(self) -> None:
        """E = -H puts t2 at 1."""
        band: TurningBand = turning_points(FlowParams(H=0.5, E=-0.5), BERGER)
        assert band.t2 == 1.0
        assert band.x1 == pytest.approx(math.asin(2.0 * 0.5 / math.sqrt(5.0)))

    def test_sl2r_unbounded(self) -> None:
        """4H^2 + kappa < 0 gives a one-sided band with no x2."""
        band: TurningBand = turning_points(FlowParams(H=0.9, E=0.1), SL2R)
        assert band.shape is BandShape.ONE_SIDED_UNBOUNDED
        assert band.x2 is None
        assert band_polynomial(band.t1, FlowParams(H=0.9, E=0.1), SL2R) == pytest.approx(0.0, abs=1e-12)

    def test_inadmissible_pair(self) -> None:
        """Energies outside the range are rejected."""
        with pytest.raises(DomainError, match="inadmissible"):
            turning_points(FlowParams(H=0.0, E=0.6), BERGER)

    def test_band_model_order(self) -> None:
        """t1 <= t2 is enforced."""
        with pytest.raises(ValidationError, match="t1 <= t2"):
            TurningBand(shape=BandShape.TWO_SIDED, kind=SpaceKind.BERGER, t1=0.5, t2=0.2)


# ---------------------------------------------------------------------------
# Period Tests
# ---------------------------------------------------------------------------


class TestPeriod:
    """Tests for period_T and the pole chain integrals."""

    def test_clifford_limit(self) -> None:
        """T tends to pi sqrt(1 + kappa/(4 tau^2)) at the top of the range."""
        T: float = period_T(FlowParams(H=0.0, E=0.5 - 1e-8), BERGER)
        assert T == pytest.approx(math.pi * math.sqrt(1.0 + 4.0 / 0.64), rel=1e-3)

    def test_period_positive(self) -> None:
        """Nodoids and Sl(2,R) profiles have T > 0."""
        assert period_T(FlowParams(H=0.5, E=-0.3), BERGER) > 0.0
        assert period_T(FlowParams(H=1.2, E=0.1), SL2R) > 0.0

    def test_degenerate_has_no_period(self) -> None:
        """The Clifford torus band has no period integral."""
        with pytest.raises(DomainError, match="period undefined"):
            period_T(FlowParams(H=0.0, E=0.5), BERGER)

    def test_pole_chain_has_no_period(self) -> None:
        """E = -H is redirected to pole_chain_y_s1."""
        with pytest.raises(DomainError, match="pole chain"):
            period_T(FlowParams(H=0.5, E=-0.5), BERGER)

    def test_pole_chain_y_s1(self) -> None:
        """y(s1) is negative and the advance is |2 y(s1) + pi|."""
        flow: FlowParams = FlowParams(H=0.5, E=-0.5)
        y_s1: float = pole_chain_y_s1(flow, BERGER)
        assert y_s1 < 0.0
        assert pole_chain_advance(flow, BERGER) == pytest.approx(abs(2.0 * y_s1 + math.pi))

    def test_pole_chain_requires_e_equal_minus_h(self) -> None:
        """Other energies are rejected."""
        with pytest.raises(DomainError):
            pole_chain_y_s1(FlowParams(H=0.5, E=-0.3), BERGER)


# ---------------------------------------------------------------------------
# Compactness Tests
# ---------------------------------------------------------------------------


class TestCompactness:
    """Tests for compactness_test."""

    def test_rational_multiple(self) -> None:
        """2 pi is 2/1 of pi."""
        assert compactness_test(2.0 * math.pi) == RationalWitness(p=2, q=1, residual=0.0)

    def test_irrational_multiple(self) -> None:
        """sqrt(2) pi has no witness with q <= 10000 at tol 1e-9."""
        assert compactness_test(math.sqrt(2.0) * math.pi) is None

    def test_looser_tolerance(self) -> None:
        """A looser tolerance accepts a convergent."""
        witness = compactness_test(math.sqrt(2.0) * math.pi, tol=1e-4, qmax=100)
        assert witness is not None
        assert witness.q <= 100

    def test_non_positive_period(self) -> None:
        """T must be > 0."""
        with pytest.raises(DomainError):
            compactness_test(0.0)

    def test_witness_reduced(self) -> None:
        """Witnesses are in lowest terms."""
        with pytest.raises(ValidationError, match="lowest terms"):
            RationalWitness(p=2, q=4, residual=0.0)


# ---------------------------------------------------------------------------
# Classification Tests
# ---------------------------------------------------------------------------


class TestClassify:
    """Tests for classify in both spaces."""

    def test_great_sphere(self) -> None:
        """H = 0, E = 0 is the great sphere."""
        assert isinstance(classify(FlowParams(H=0.0, E=0.0), BERGER), GreatSphere)

    @pytest.mark.parametrize("E", [0.5, -0.5])
    def test_minimal_clifford(self, E: float) -> None:
        """Both ends of the H = 0 range give r = sqrt(1/2)."""
        surface = classify(FlowParams(H=0.0, E=E), BERGER)
        assert isinstance(surface, CliffordTorus)
        assert surface.r == pytest.approx(math.sqrt(0.5))

    def test_berger_sphere(self) -> None:
        """E = 0 with H > 0 is an embedded CMC sphere at tau = 0.4, H = 0.5."""
        surface = classify(FlowParams(H=0.5, E=0.0), BERGER)
        assert isinstance(surface, Sphere)
        assert surface.embedded
        assert -math.pi < surface.y0 < 0.0

    def test_non_embedded_sphere(self) -> None:
        """Small tau spheres are not embedded."""
        space: SpaceParams = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=0.1)
        surface = classify(FlowParams(H=0.5, E=0.0), space)
        assert isinstance(surface, Sphere)
        assert not surface.embedded

    def test_unduloid(self) -> None:
        """E > 0 in Berger is an unduloid."""
        surface = classify(FlowParams(H=0.0, E=0.3), BERGER)
        assert isinstance(surface, Unduloid)
        assert surface.T > 0.0

    def test_nodoid(self) -> None:
        """-H < E < 0 is a nodoid."""
        assert isinstance(classify(FlowParams(H=0.5, E=-0.3), BERGER), Nodoid)

    def test_unduloid_below_minus_H(self) -> None:
        """E < -H is of unduloid type."""
        assert isinstance(classify(FlowParams(H=0.5, E=-0.7), BERGER), Unduloid)

    def test_pole_chain(self) -> None:
        """E = -H (within tolerance) is a pole chain."""
        surface = classify(FlowParams(H=0.5, E=-0.5 + 1e-13), BERGER)
        assert isinstance(surface, PoleChain)
        assert surface.y_s1 < 0.0

    def test_sl2r_compact_types(self) -> None:
        """4H^2 + kappa > 0: sphere, unduloid and nodoid by sign(E)."""
        assert isinstance(classify(FlowParams(H=1.2, E=0.0), SL2R), Sphere)
        assert isinstance(classify(FlowParams(H=1.2, E=0.1), SL2R), Unduloid)
        assert isinstance(classify(FlowParams(H=1.2, E=-0.2), SL2R), Nodoid)

    def test_sl2r_open_graphs(self) -> None:
        """4H^2 + kappa <= 0: open graphs by sign(E)."""
        assert isinstance(classify(FlowParams(H=0.9, E=0.0), SL2R), OpenSphereGraph)
        assert isinstance(classify(FlowParams(H=0.9, E=0.1), SL2R), OpenUnduloidGraph)
        assert isinstance(classify(FlowParams(H=0.9, E=-0.1), SL2R), OpenNodoidGraph)
        assert isinstance(classify(FlowParams(H=1.0, E=0.1), SL2R), OpenUnduloidGraph)

    def test_inadmissible(self) -> None:
        """Outside the range there is nothing to classify."""
        with pytest.raises(DomainError):
            classify(FlowParams(H=1.25, E=0.3), SL2R)

    def test_serializes_with_tag(self) -> None:
        """Each class carries its type tag."""
        assert classify(FlowParams(H=0.0, E=0.3), BERGER).model_dump()["type"] == "Unduloid"


# ---------------------------------------------------------------------------
# Initial condition Tests
# ---------------------------------------------------------------------------


class TestDefaultStart:
    """Tests for default_start."""

    def test_unduloid_starts_at_x1(self) -> None:
        """(x1, pi/2) for an unduloid with E > 0."""
        flow: FlowParams = FlowParams(H=0.0, E=0.3)
        start = default_start(flow, BERGER)
        assert start.x == pytest.approx(turning_points(flow, BERGER).x1)
        assert start.alpha == pytest.approx(0.5 * math.pi)

    def test_nodoid_starts_at_x2(self) -> None:
        """(x2, pi/2) for a nodoid."""
        flow: FlowParams = FlowParams(H=0.5, E=-0.3)
        start = default_start(flow, BERGER)
        assert start.x == pytest.approx(turning_points(flow, BERGER).x2)
        assert start.alpha == pytest.approx(0.5 * math.pi)

    def test_pole_chain_heads_down(self) -> None:
        """(x1, 3pi/2) for the pole chain."""
        start = default_start(FlowParams(H=0.5, E=-0.5), BERGER)
        assert start.alpha == pytest.approx(1.5 * math.pi)

    def test_great_sphere_start(self) -> None:
        """(pi/4, 0, 0) for the great sphere."""
        start = default_start(FlowParams(H=0.0, E=0.0), BERGER)
        assert (start.x, start.y, start.alpha) == (pytest.approx(0.25 * math.pi), 0.0, 0.0)

    @pytest.mark.parametrize(
        "flow,space",
        [
            (FlowParams(H=0.0, E=0.3), BERGER),
            (FlowParams(H=0.5, E=-0.3), BERGER),
            (FlowParams(H=0.5, E=-0.5), BERGER),
            (FlowParams(H=0.0, E=0.5), BERGER),
            (FlowParams(H=1.2, E=0.1), SL2R),
            (FlowParams(H=0.9, E=0.0), SL2R),
            (FlowParams(H=0.9, E=-0.1), SL2R),
        ],
    )
    def test_start_on_energy_shell(self, flow: FlowParams, space: SpaceParams) -> None:
        """Every default start has the requested energy."""
        start = default_start(flow, space)
        assert energy(start.x, start.alpha, flow.H, space) == pytest.approx(flow.E, abs=1e-10)

"""Unit tests for core.space_models module.

Tests SpaceParams validation, the quadric constraint of AmbientPoint, the
global frames of both spaces, the metric, the vertical Killing field and
the connection table (exact entries, metric compatibility and the
torsion-free identity against numerically computed Lie brackets).
"""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from core.errors import DomainError
from core.space_models import (
    FRAME_ORDER,
    AmbientPoint,
    AmbientVector,
    FrameField,
    SpaceKind,
    SpaceParams,
    connection_table,
    frame_at,
    frame_coefficient_arrays,
    frame_coefficients,
    frame_fields,
    frame_metric_diagonal,
    killing_field,
    metric_eval,
    tangent_components,
)

BERGER: SpaceParams = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=0.4)
SL2R: SpaceParams = SpaceParams(kind=SpaceKind.SL2R, kappa=-4.0, tau=1.0)


def _random_point(rng: np.random.Generator, kind: SpaceKind) -> AmbientPoint:
    """Random point of the quadric of the given kind."""
    phases: np.ndarray = np.exp(1j * rng.uniform(-math.pi, math.pi, 2))
    if kind is SpaceKind.BERGER:
        x: float = rng.uniform(0.0, 0.5 * math.pi)
        return AmbientPoint(z=math.cos(x) * phases[0], w=math.sin(x) * phases[1], kind=kind)
    x = rng.uniform(-2.0, 2.0)
    return AmbientPoint(z=math.cosh(x) * phases[0], w=math.sinh(x) * phases[1], kind=kind)


# ---------------------------------------------------------------------------
# SpaceParams Tests
# ---------------------------------------------------------------------------


class TestSpaceParams:
    """Tests for SpaceParams validation."""

    def test_berger_needs_positive_kappa(self) -> None:
        """Berger spheres reject kappa <= 0."""
        with pytest.raises(ValidationError, match="kappa > 0"):
            SpaceParams(kind=SpaceKind.BERGER, kappa=-1.0, tau=0.4)

    def test_sl2r_needs_negative_kappa(self) -> None:
        """Sl(2,R) rejects kappa >= 0."""
        with pytest.raises(ValidationError, match="kappa < 0"):
            SpaceParams(kind=SpaceKind.SL2R, kappa=4.0, tau=0.4)

    def test_tau_zero_rejected(self) -> None:
        """Product spaces (tau = 0) are excluded."""
        with pytest.raises(ValidationError, match="non-zero"):
            SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=0.0)

    def test_space_form_rejected(self) -> None:
        """kappa = 4 tau^2 (round sphere) is excluded."""
        with pytest.raises(ValidationError, match="space forms"):
            SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=1.0)

    def test_frozen(self) -> None:
        """SpaceParams is immutable."""
        with pytest.raises(ValidationError):
            BERGER.tau = 0.5  # type: ignore[misc]

    def test_negative_tau_allowed_but_flagged(self) -> None:
        """Negative tau is a valid space; require_positive_tau rejects it."""
        space: SpaceParams = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=-0.4)
        with pytest.raises(DomainError):
            space.require_positive_tau()

    def test_sigma_and_bundle_ratio(self) -> None:
        """sigma is the bracket signature, bundle_ratio = 4 tau^2 / |kappa|."""
        assert BERGER.sigma == 1
        assert SL2R.sigma == -1
        assert BERGER.bundle_ratio == pytest.approx(0.16)
        assert SL2R.bundle_ratio == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# AmbientPoint Tests
# ---------------------------------------------------------------------------


class TestAmbientPoint:
    """Tests for the quadric constraint."""

    def test_on_berger_quadric(self) -> None:
        """A unit vector of C^2 is a Berger point."""
        p: AmbientPoint = AmbientPoint(z=math.sqrt(0.5), w=1j * math.sqrt(0.5))
        assert p.kind is SpaceKind.BERGER

    def test_off_quadric_rejected(self) -> None:
        """Points off the quadric are rejected."""
        with pytest.raises(ValidationError, match="off the"):
            AmbientPoint(z=1.0, w=0.1)

    def test_sl2r_quadric(self) -> None:
        """Sl(2,R) points satisfy |z|^2 - |w|^2 = 1."""
        p: AmbientPoint = AmbientPoint(z=math.cosh(0.7), w=math.sinh(0.7), kind=SpaceKind.SL2R)
        assert abs(p.z) ** 2 - abs(p.w) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_as_array(self) -> None:
        """as_array lists (Re z, Im z, Re w, Im w)."""
        p: AmbientPoint = AmbientPoint(z=0.6, w=0.8j)
        np.testing.assert_allclose(p.as_array(), [0.6, 0.0, 0.0, 0.8])


# ---------------------------------------------------------------------------
# Frame and metric Tests
# ---------------------------------------------------------------------------


class TestFrame:
    """Tests for frame_at and frame coefficients."""

    @pytest.mark.parametrize("space", [BERGER, SL2R])
    def test_frame_at_base_point(self, space: SpaceParams) -> None:
        """At (1, 0): E1 = (0, 1), E2 = (0, i), V = (i, 0) in both spaces."""
        p: AmbientPoint = AmbientPoint(z=1.0, w=0.0, kind=space.kind)
        e1, e2, v = frame_at(p, space)
        assert (e1.dz, e1.dw) == (0j, 1 + 0j)
        assert (e2.dz, e2.dw) == (0j, 1j)
        assert (v.dz, v.dw) == (1j, 0j)

    @pytest.mark.parametrize("space", [BERGER, SL2R])
    def test_frame_coefficients_identity(self, space: SpaceParams) -> None:
        """Each frame field has unit coefficient on itself."""
        rng: np.random.Generator = np.random.default_rng(3)
        p: AmbientPoint = _random_point(rng, space.kind)
        for i, field in enumerate(frame_at(p, space)):
            expected: np.ndarray = np.zeros(3)
            expected[i] = 1.0
            np.testing.assert_allclose(frame_coefficients(field, p, space), expected, atol=1e-12)

    def test_non_tangent_rejected(self) -> None:
        """The point itself is normal to the quadric."""
        p: AmbientPoint = AmbientPoint(z=1.0, w=0.0)
        with pytest.raises(DomainError, match="not tangent"):
            tangent_components(AmbientVector(dz=1.0, dw=0.0), p, BERGER)

    def test_kind_mismatch_rejected(self) -> None:
        """A Berger point cannot be used with Sl(2,R) parameters."""
        with pytest.raises(DomainError):
            frame_at(AmbientPoint(z=1.0, w=0.0), SL2R)


class TestMetric:
    """Tests for metric_eval."""

    @pytest.mark.parametrize("space", [BERGER, SL2R])
    def test_frame_is_orthogonal_with_known_norms(self, space: SpaceParams) -> None:
        """g is diagonal on the frame with entries 4/|kappa|, 4/|kappa|, 16 tau^2/kappa^2."""
        rng: np.random.Generator = np.random.default_rng(11)
        diagonal: np.ndarray = frame_metric_diagonal(space)
        for _ in range(20):
            p: AmbientPoint = _random_point(rng, space.kind)
            frame = frame_at(p, space)
            for i in range(3):
                for j in range(3):
                    expected: float = diagonal[i] if i == j else 0.0
                    assert metric_eval(frame[i], frame[j], p, space) == pytest.approx(expected, abs=1e-12)

    def test_vertical_norm(self) -> None:
        """g(V, V) = 16 tau^2 / kappa^2."""
        p: AmbientPoint = AmbientPoint(z=0.6, w=0.8j)
        v: AmbientVector = frame_at(p, BERGER).v
        assert metric_eval(v, v, p, BERGER) == pytest.approx(16.0 * 0.16 / 16.0)

    def test_zero_vector(self) -> None:
        """g(0, X) = 0."""
        p: AmbientPoint = AmbientPoint(z=0.6, w=0.8j)
        zero: AmbientVector = AmbientVector(dz=0.0, dw=0.0)
        assert metric_eval(zero, frame_at(p, BERGER).e1, p, BERGER) == 0.0

    @pytest.mark.parametrize("space", [BERGER, SL2R])
    def test_killing_field_is_unit(self, space: SpaceParams) -> None:
        """The vertical Killing field has g(xi, xi) = 1."""
        rng: np.random.Generator = np.random.default_rng(5)
        for _ in range(20):
            p: AmbientPoint = _random_point(rng, space.kind)
            xi: AmbientVector = killing_field(p, space)
            assert metric_eval(xi, xi, p, space) == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------------------
# Connection Tests
# ---------------------------------------------------------------------------


def _lie_bracket(p: AmbientPoint, kind: SpaceKind, a: int, b: int) -> tuple[complex, complex]:
    """[F_a, F_b] at p; the frame maps are real-linear so D_X F = F(X)."""
    fields = frame_fields(np.asarray(p.z), np.asarray(p.w), kind)
    fa, fb = fields[a], fields[b]
    b_along_a = frame_fields(fa[0], fa[1], kind)[b]
    a_along_b = frame_fields(fb[0], fb[1], kind)[a]
    return complex(b_along_a[0] - a_along_b[0]), complex(b_along_a[1] - a_along_b[1])


class TestConnectionTable:
    """Tests for connection_table."""

    def test_berger_e1_e2(self) -> None:
        """Berger: nabla_E1 E2 = -V."""
        assert connection_table(BERGER).coefficients(FrameField.E1, FrameField.E2) == (0, 0, -1)

    def test_sl2r_e1_e2(self) -> None:
        """Sl(2,R): nabla_E1 E2 = +V."""
        assert connection_table(SL2R).coefficients(FrameField.E1, FrameField.E2) == (0, 0, 1)

    @pytest.mark.parametrize("space", [BERGER, SL2R])
    def test_vertical_geodesic(self, space: SpaceParams) -> None:
        """nabla_V V = 0."""
        np.testing.assert_array_equal(connection_table(space).numeric()[2, 2], np.zeros(3))

    @pytest.mark.parametrize("space", [BERGER, SL2R])
    def test_metric_compatibility(self, space: SpaceParams) -> None:
        """g(nabla_X A, B) + g(A, nabla_X B) = X g(A, B) = 0 for the constant frame metric."""
        table: np.ndarray = connection_table(space).numeric()
        g: np.ndarray = frame_metric_diagonal(space)
        for x in range(3):
            for a in range(3):
                for b in range(3):
                    assert table[x, a, b] * g[b] + table[x, b, a] * g[a] == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("space", [BERGER, SL2R])
    def test_torsion_free(self, space: SpaceParams) -> None:
        """nabla_A B - nabla_B A equals the Lie bracket [A, B] at random points."""
        table: np.ndarray = connection_table(space).numeric()
        rng: np.random.Generator = np.random.default_rng(17)
        for _ in range(10):
            p: AmbientPoint = _random_point(rng, space.kind)
            for a in range(3):
                for b in range(3):
                    dz, dw = _lie_bracket(p, space.kind, a, b)
                    coeffs: np.ndarray = frame_coefficient_arrays(
                        np.asarray(dz), np.asarray(dw), np.asarray(p.z), np.asarray(p.w), space.kind
                    )
                    np.testing.assert_allclose(coeffs, table[a, b] - table[b, a], atol=1e-10)

    def test_frame_order(self) -> None:
        """Table axes follow (E1, E2, V)."""
        assert FRAME_ORDER == (FrameField.E1, FrameField.E2, FrameField.V)

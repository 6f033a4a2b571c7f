"""Admissible energies, turning bands, periods and the surface classification.

For a profile with mean curvature H and energy E, t = sin^2 x (Berger) or
t = sinh^2 x (Sl(2,R)) is confined to the set where the band polynomial

    Berger:   p(t) = (4/kappa)(E + H t)^2 - t (1 - t)
    Sl(2,R):  p(t) = (4/|kappa|)(E + H t)^2 - t (1 + t)

is non-positive. Its roots t1 <= t2 are the turning points of the profile.
The classification follows from the sign pattern of E, E + H and
m = 4H^2 + kappa:

    Berger:  E = 0        -> great sphere (H = 0) or CMC sphere
             degenerate   -> Clifford torus
             E > 0, E < -H -> unduloid
             -H < E < 0   -> nodoid
             E = -H       -> pole chain
    Sl(2,R): m > 0        -> sphere / unduloid / nodoid by sign(E)
             m <= 0       -> open graphs by sign(E)

Compactness is the numeric statement "T is a rational multiple of pi",
decided by a continued-fraction witness with bounded denominator.

Example:
    >>> from core.space_models import SpaceParams
    >>> from core.profile_dynamics import FlowParams
    >>> from core.bounds_classify import classify
    >>> space = SpaceParams(kind="berger", kappa=4.0, tau=0.4)
    >>> classify(FlowParams(H=0.0, E=0.0), space).type
    'GreatSphere'
"""

import logging
import math
from enum import Enum
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from core.closed_forms import clifford_radius, sphere_profile_y
from core.errors import DomainError
from core.numerics_kernel import QuadratureSpec, integrate_endpoint_singular, rational_approx
from core.profile_dynamics import FlowParams, ProfileState, alpha_from_energy
from core.space_models import SpaceKind, SpaceParams

logger: logging.Logger = logging.getLogger(__name__)

ENERGY_TOL: float = 1e-12
DEFAULT_TOL: float = 1e-9
DEFAULT_QMAX: int = 10_000
_OPEN_START_OFFSET: float = 1e-3


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class EnergyRange(BaseModel):
    """Interval or half-line of admissible energies; ``None`` bounds are infinite."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    lower: float | None = None
    upper: float | None = None
    lower_closed: bool = False
    upper_closed: bool = False

    def contains(self, E: float) -> bool:
        if self.lower is not None:
            if E < self.lower - (ENERGY_TOL if self.lower_closed else 0.0):
                return False
            if not self.lower_closed and E <= self.lower:
                return False
        if self.upper is not None:
            if E > self.upper + (ENERGY_TOL if self.upper_closed else 0.0):
                return False
            if not self.upper_closed and E >= self.upper:
                return False
        return True


class BandShape(str, Enum):
    """Shape of the admissible band of t-values."""

    TWO_SIDED = "TwoSided"
    ONE_SIDED_UNBOUNDED = "OneSidedUnbounded"
    DEGENERATE = "Degenerate"


class TurningBand(BaseModel):
    """Admissible t-values of a profile (t = sin^2 x or sinh^2 x).

    Attributes:
        shape: Two-sided, one-sided unbounded or degenerate.
        kind: Space the band lives in (fixes the t -> x conversion).
        t1: Lower turning value (the single value when degenerate).
        t2: Upper turning value; ``None`` when unbounded.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    shape: BandShape
    kind: SpaceKind
    t1: float = Field(ge=0.0)
    t2: float | None = None

    @model_validator(mode="after")
    def _check_order(self) -> "TurningBand":
        if self.shape is BandShape.ONE_SIDED_UNBOUNDED:
            if self.t2 is not None:
                raise ValueError("unbounded band has no upper turning value")
        elif self.t2 is None or self.t2 < self.t1:
            raise ValueError(f"need t1 <= t2, got t1={self.t1}, t2={self.t2}")
        if self.shape is BandShape.DEGENERATE and self.t2 != self.t1:
            raise ValueError("degenerate band needs t1 == t2")
        return self

    def _to_x(self, t: float) -> float:
        root: float = math.sqrt(t)
        return math.asin(min(root, 1.0)) if self.kind is SpaceKind.BERGER else math.asinh(root)

    @property
    def x1(self) -> float:
        return self._to_x(self.t1)

    @property
    def x2(self) -> float | None:
        return None if self.t2 is None else self._to_x(self.t2)


class RationalWitness(BaseModel):
    """Witness p/q with |T/pi - p/q| = residual for a compactness decision."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    p: int = Field(ge=0)
    q: int = Field(ge=1)
    residual: float = Field(ge=0.0)

    @model_validator(mode="after")
    def _check_reduced(self) -> "RationalWitness":
        if math.gcd(self.p, self.q) != 1:
            raise ValueError(f"{self.p}/{self.q} is not in lowest terms")
        return self


class Sphere(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["Sphere"] = "Sphere"
    embedded: bool
    y0: float


class CliffordTorus(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["CliffordTorus"] = "CliffordTorus"
    r: float = Field(gt=0.0, lt=1.0)


class Unduloid(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["Unduloid"] = "Unduloid"
    T: float = Field(gt=0.0)
    compact: RationalWitness | None = None
    embedded: bool = False


class Nodoid(BaseModel):
    """Nodoid-type profile; the surface is never embedded."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["Nodoid"] = "Nodoid"
    T: float = Field(gt=0.0)
    compact: RationalWitness | None = None


class PoleChain(BaseModel):
    """Arcs meeting at the north pole (Berger, E = -H)."""

    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["PoleChain"] = "PoleChain"
    y_s1: float
    compact: RationalWitness | None = None
    embedded_torus: bool = False


class GreatSphere(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["GreatSphere"] = "GreatSphere"


class OpenSphereGraph(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["OpenSphereGraph"] = "OpenSphereGraph"


class OpenUnduloidGraph(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["OpenUnduloidGraph"] = "OpenUnduloidGraph"


class OpenNodoidGraph(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")
    type: Literal["OpenNodoidGraph"] = "OpenNodoidGraph"


SurfaceClass = Annotated[
    Union[
        Sphere,
        CliffordTorus,
        Unduloid,
        Nodoid,
        PoleChain,
        GreatSphere,
        OpenSphereGraph,
        OpenUnduloidGraph,
        OpenNodoidGraph,
    ],
    Field(discriminator="type"),
]


# ---------------------------------------------------------------------------
# Energy ranges and bands
# ---------------------------------------------------------------------------


def _require_mean_curvature(H: float, space: SpaceParams) -> None:
    space.require_positive_tau()
    if H < 0.0:
        raise DomainError(f"classification uses the convention H >= 0, got H={H}")


def admissible_energy_range(H: float, space: SpaceParams) -> EnergyRange:
    """Energies E for which profiles with mean curvature H exist.

    Berger: [(-2H - sqrt(m))/4, (-2H + sqrt(m))/4] with m = 4H^2 + kappa.
    Sl(2,R): E < (2H - sqrt(m))/4 if m > 0, E < H/2 if m = 0, any E if m < 0.
    """
    _require_mean_curvature(H, space)
    m: float = 4.0 * H * H + space.kappa
    if space.kind is SpaceKind.BERGER:
        root: float = math.sqrt(m)
        return EnergyRange(
            lower=0.25 * (-2.0 * H - root),
            upper=0.25 * (-2.0 * H + root),
            lower_closed=True,
            upper_closed=True,
        )
    if m > 0.0:
        return EnergyRange(upper=0.25 * (2.0 * H - math.sqrt(m)))
    if m == 0.0:
        return EnergyRange(upper=0.5 * H)
    return EnergyRange()


def admissible(flow: FlowParams, space: SpaceParams) -> bool:
    """Whether (H, E) is an admissible pair."""
    return admissible_energy_range(flow.H, space).contains(flow.E)


def band_polynomial(t: np.ndarray | float, flow: FlowParams, space: SpaceParams) -> np.ndarray | float:
    """p(t); the admissible t-values are those with p(t) <= 0."""
    t = np.asarray(t, dtype=float)
    u: np.ndarray = flow.E + flow.H * t
    fiber: np.ndarray = t * (1.0 - t) if space.kind is SpaceKind.BERGER else t * (1.0 + t)
    value: np.ndarray = 4.0 / abs(space.kappa) * u * u - fiber
    return float(value) if value.ndim == 0 else value


def _berger_band(flow: FlowParams, space: SpaceParams, energies: EnergyRange) -> TurningBand:
    H, E, kappa = flow.H, flow.E, space.kappa
    m: float = 4.0 * H * H + kappa
    linear: float = kappa - 8.0 * E * H
    at_endpoint: bool = min(abs(E - energies.lower), abs(E - energies.upper)) <= ENERGY_TOL
    disc: float = kappa * kappa - 16.0 * kappa * E * (H + E)
    if at_endpoint or disc <= 0.0:
        t: float = min(max(linear / (2.0 * m), 0.0), 1.0)
        return TurningBand(shape=BandShape.DEGENERATE, kind=SpaceKind.BERGER, t1=t, t2=t)
    t2: float = (linear + math.sqrt(disc)) / (2.0 * m)
    if abs(E + H) <= ENERGY_TOL:
        t2 = 1.0
    t1: float = 4.0 * E * E / (m * t2)
    return TurningBand(shape=BandShape.TWO_SIDED, kind=SpaceKind.BERGER, t1=t1, t2=min(t2, 1.0))


def _sl2r_band(flow: FlowParams, space: SpaceParams) -> TurningBand:
    H, E, kappa = flow.H, flow.E, space.kappa
    m: float = 4.0 * H * H + kappa
    linear: float = kappa + 8.0 * E * H
    if m == 0.0:
        t1: float = E * E / (H * (H - 2.0 * E))
        return TurningBand(shape=BandShape.ONE_SIDED_UNBOUNDED, kind=SpaceKind.SL2R, t1=t1)
    # roots of m t^2 + (kappa + 8EH) t + 4E^2
    root: float = math.sqrt(max(linear * linear - 16.0 * m * E * E, 0.0))
    if m > 0.0:
        t2: float = (-linear + root) / (2.0 * m)
        t1 = 4.0 * E * E / (m * t2)
        return TurningBand(shape=BandShape.TWO_SIDED, kind=SpaceKind.SL2R, t1=t1, t2=t2)
    if linear >= 0.0:
        t1 = (linear + root) / (2.0 * -m)
    else:
        other: float = -(root - linear) / (2.0 * -m)
        t1 = 4.0 * E * E / (m * other)
    return TurningBand(shape=BandShape.ONE_SIDED_UNBOUNDED, kind=SpaceKind.SL2R, t1=max(t1, 0.0))


def turning_points(flow: FlowParams, space: SpaceParams) -> TurningBand:
    """Admissible band of t-values for (H, E).

    Berger: t1, t2 = (kappa - 8HE -+ sqrt(kappa^2 - 16 kappa E (H + E))) / (2m),
    evaluated in the cancellation-free form t1 = 4E^2 / (m t2).

    Raises:
        DomainError: If (H, E) is not admissible.
    """
    energies: EnergyRange = admissible_energy_range(flow.H, space)
    if not energies.contains(flow.E):
        raise DomainError(f"inadmissible pair H={flow.H}, E={flow.E} for {space.kind.value}")
    if space.kind is SpaceKind.BERGER:
        band: TurningBand = _berger_band(flow, space, energies)
    else:
        band = _sl2r_band(flow, space)
    logger.debug("Turning band for %s: %s", flow, band)
    return band


# ---------------------------------------------------------------------------
# Period integrals
# ---------------------------------------------------------------------------


def _sin_like(kind: SpaceKind):
    return np.sin if kind is SpaceKind.BERGER else np.sinh


def _cos_like(kind: SpaceKind):
    return np.cos if kind is SpaceKind.BERGER else np.cosh


def _period_integrand(flow: FlowParams, space: SpaceParams, band: TurningBand):
    """dy/dx = u sqrt(c^2 + b s^2) / (c tau sqrt(P)) with P factored at both turning points."""
    H, E, tau, b = flow.H, flow.E, space.tau, space.bundle_ratio
    m: float = 4.0 * H * H + space.kappa
    lead: float = m / abs(space.kappa)
    sn, cs = _sin_like(space.kind), _cos_like(space.kind)
    x1, x2 = band.x1, band.x2
    t1, t2 = band.t1, band.t2
    u1, u2 = E + H * t1, E + H * t2

    def integrand(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        above: np.ndarray = sn(lo) * sn(x + x1)
        below: np.ndarray = sn(hi) * sn(x2 + x)
        u: np.ndarray = np.where(lo < hi, u1 + H * above, u2 - H * below)
        c: np.ndarray = cs(x)
        s: np.ndarray = sn(x)
        return u * np.sqrt(c * c + b * s * s) / (c * tau * np.sqrt(lead * above * below))

    return integrand


def period_T(flow: FlowParams, space: SpaceParams, spec: QuadratureSpec | None = None) -> float:
    """y-advance T of one full oscillation of the profile (absolute value).

    T = 2 |int_{x1}^{x2} dy/dx dx|, an integral with inverse-square-root
    singularities at both turning points.

    Raises:
        DomainError: For degenerate or unbounded bands and the pole chain.
    """
    band: TurningBand = turning_points(flow, space)
    if band.shape is not BandShape.TWO_SIDED:
        raise DomainError(f"period undefined for a {band.shape.value} band")
    if space.kind is SpaceKind.BERGER and abs(flow.E + flow.H) <= ENERGY_TOL:
        raise DomainError("the pole chain has no period; use pole_chain_y_s1")
    half: float = integrate_endpoint_singular(
        _period_integrand(flow, space, band), band.x1, band.x2, spec
    )
    return 2.0 * abs(half)


def pole_chain_y_s1(flow: FlowParams, space: SpaceParams, spec: QuadratureSpec | None = None) -> float:
    """y(s1), the y-advance from the lower turning point arcsin(2H/sqrt(m)) to the pole.

    The integrand -H sqrt(c^2 + b s^2) / (tau sqrt(m/kappa) sqrt(t - t1))
    is singular only at the lower end.

    Raises:
        DomainError: Unless space is Berger and E = -H with H > 0.
    """
    if space.kind is not SpaceKind.BERGER:
        raise DomainError("pole chains exist in Berger spheres only")
    if abs(flow.E + flow.H) > ENERGY_TOL or flow.H <= 0.0:
        raise DomainError(f"pole chain needs E = -H with H > 0, got {flow}")
    band: TurningBand = turning_points(flow, space)
    H, tau, b, kappa = flow.H, space.tau, space.bundle_ratio, space.kappa
    scale: float = math.sqrt((4.0 * H * H + kappa) / kappa)
    x1: float = band.x1

    def integrand(x: np.ndarray, lo: np.ndarray, _hi: np.ndarray) -> np.ndarray:
        c: np.ndarray = np.cos(x)
        s: np.ndarray = np.sin(x)
        gap: np.ndarray = np.sin(lo) * np.sin(x + x1)
        return -H * np.sqrt(c * c + b * s * s) / (tau * scale * np.sqrt(gap))

    return integrate_endpoint_singular(integrand, x1, 0.5 * math.pi, spec)


def pole_chain_advance(flow: FlowParams, space: SpaceParams, spec: QuadratureSpec | None = None) -> float:
    """|2 y(s1) + pi|, the rotation of one arc of the pole chain."""
    return abs(2.0 * pole_chain_y_s1(flow, space, spec) + math.pi)


# ---------------------------------------------------------------------------
# Compactness and classification
# ---------------------------------------------------------------------------


def compactness_test(
    T: float, tol: float = DEFAULT_TOL, qmax: int = DEFAULT_QMAX
) -> RationalWitness | None:
    """Witness p/q with |T/pi - p/q| <= tol and q <= qmax, or ``None``.

    Example:
        >>> import math
        >>> compactness_test(2.0 * math.pi)
        RationalWitness(p=2, q=1, residual=0.0)
    """
    if not T > 0.0:
        raise DomainError(f"compactness test needs T > 0, got {T}")
    approx = rational_approx(T / math.pi, qmax)
    if approx.residual > tol:
        return None
    return RationalWitness(p=approx.p, q=approx.q, residual=approx.residual)


def _embedded_unduloid(witness: RationalWitness | None) -> bool:
    # T = 2 pi / k with k integer
    return witness is not None and witness.p > 0 and (2 * witness.q) % witness.p == 0


def _sphere(flow: FlowParams, space: SpaceParams) -> Sphere:
    y0: float = float(sphere_profile_y(0.0, flow.H, space))
    return Sphere(embedded=y0 > -math.pi, y0=y0)


def _periodic(
    flow: FlowParams, space: SpaceParams, tol: float, qmax: int, nodoid: bool
) -> Unduloid | Nodoid:
    T: float = period_T(flow, space)
    witness: RationalWitness | None = compactness_test(T, tol, qmax)
    if nodoid:
        return Nodoid(T=T, compact=witness)
    return Unduloid(T=T, compact=witness, embedded=_embedded_unduloid(witness))


def classify(
    flow: FlowParams,
    space: SpaceParams,
    tol: float = DEFAULT_TOL,
    qmax: int = DEFAULT_QMAX,
) -> SurfaceClass:
    """Classify the rotational CMC surface generated by (H, E).

    Equality branches (E = 0, E = -H, interval endpoints) use the absolute
    tolerance ``ENERGY_TOL`` on E.

    Raises:
        DomainError: If (H, E) is not admissible.
    """
    _require_mean_curvature(flow.H, space)
    energies: EnergyRange = admissible_energy_range(flow.H, space)
    if not energies.contains(flow.E):
        raise DomainError(f"inadmissible pair H={flow.H}, E={flow.E} for {space.kind.value}")
    H, E = flow.H, flow.E
    if space.kind is SpaceKind.BERGER:
        if abs(E - energies.upper) <= ENERGY_TOL:
            return CliffordTorus(r=clifford_radius(H, 1, space))
        if abs(E - energies.lower) <= ENERGY_TOL:
            return CliffordTorus(r=clifford_radius(H, -1, space))
        if abs(E) <= ENERGY_TOL:
            return GreatSphere() if H <= ENERGY_TOL else _sphere(flow, space)
        if abs(E + H) <= ENERGY_TOL:
            y_s1: float = pole_chain_y_s1(flow, space)
            return PoleChain(
                y_s1=y_s1,
                compact=compactness_test(2.0 * abs(y_s1), tol, qmax),
                embedded_torus=abs(y_s1 + 0.5 * math.pi) <= tol,
            )
        return _periodic(flow, space, tol, qmax, nodoid=-H < E < 0.0)

    m: float = 4.0 * H * H + space.kappa
    if m <= 0.0:
        if abs(E) <= ENERGY_TOL:
            return OpenSphereGraph()
        return OpenUnduloidGraph() if E > 0.0 else OpenNodoidGraph()
    if abs(E) <= ENERGY_TOL:
        return _sphere(flow, space)
    return _periodic(flow, space, tol, qmax, nodoid=E < 0.0)


# ---------------------------------------------------------------------------
# Default initial conditions
# ---------------------------------------------------------------------------


def _turning_state(x: float, flow: FlowParams, space: SpaceParams) -> ProfileState:
    s: float = float(_sin_like(space.kind)(x))
    u: float = flow.E + flow.H * s * s
    alpha: float = 0.5 * math.pi if u * s > 0.0 else 1.5 * math.pi
    return ProfileState(s=0.0, x=x, y=0.0, alpha=alpha)


def default_start(flow: FlowParams, space: SpaceParams) -> ProfileState:
    """Initial state used for each case of the classification.

    Turning-point starts carry alpha = pi/2 when u sin x > 0 and 3pi/2
    otherwise (u = E + H sin^2 x), which gives (x1, pi/2) for unduloids
    with E > 0, (x2, pi/2) for nodoids and (x1, 3pi/2) for the pole chain.
    Spheres start at x2. The great sphere starts at (pi/4, 0, 0) and open
    Sl(2,R) graphs through the axis start just off the axis.
    """
    band: TurningBand = turning_points(flow, space)
    H, E = flow.H, flow.E
    if band.shape is BandShape.DEGENERATE:
        return _turning_state(band.x1, flow, space)
    if space.kind is SpaceKind.BERGER and abs(E) <= ENERGY_TOL and H <= ENERGY_TOL:
        return ProfileState(s=0.0, x=0.25 * math.pi, y=0.0, alpha=0.0)
    if band.shape is BandShape.ONE_SIDED_UNBOUNDED:
        if band.t1 > 0.0:
            return _turning_state(band.x1, flow, space)
        x0: float = _OPEN_START_OFFSET
        sin_alpha, cos_alpha = alpha_from_energy(x0, 1, flow, space)
        return ProfileState(s=0.0, x=x0, y=0.0, alpha=math.atan2(sin_alpha, cos_alpha))
    nodoid: bool = -H < E < 0.0 if space.kind is SpaceKind.BERGER else E < 0.0
    if abs(E) <= ENERGY_TOL or nodoid:
        return _turning_state(band.x2, flow, space)
    return _turning_state(band.x1, flow, space)

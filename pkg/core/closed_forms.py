"""Closed-form geometry of rotational CMC spheres and Clifford tori.

Everything here is an explicit formula: the sphere profile y(x) and its
immersion in both spaces, the conformal factor of a CMC sphere, its area
and (Berger) enclosed volume, and the radius, area and volume of the CMC
Clifford tori.

Removable singularity:
    The area, volume and profile formulas come in an arctan branch
    (4 tau^2 > kappa) and an arctanh branch (4 tau^2 < kappa). Both are
    written through a single helper

        G(z2) = arctan(sqrt(z2)) / sqrt(z2)      z2 > 0
              = arctanh(sqrt(-z2)) / sqrt(-z2)   z2 < 0

    evaluated by its power series 1 - z2/3 + z2^2/5 - ... near z2 = 0,
    which is where both printed branches lose all accuracy.

Sign conventions:
    On the Berger half-domain [0, a] the profile satisfies y <= 0,
    y(a) = 0 and y(0) = y0 is the minimum; the sphere is embedded iff
    y0 > -pi. The Sl(2,R) profile is even in x and vanishes at x = +-a.

Example:
    >>> from core.space_models import SpaceParams
    >>> from core.closed_forms import sphere_area, clifford_radius
    >>> space = SpaceParams(kind="berger", kappa=4.0, tau=0.4)
    >>> round(clifford_radius(0.0, +1, space) ** 2, 12)
    0.5
    >>> sphere_area(0.5, space) > 0.0
    True
"""

import logging
import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import DomainError, NoSphereError
from core.space_models import AmbientPoint, SpaceKind, SpaceParams

logger: logging.Logger = logging.getLogger(__name__)

_SERIES_RADIUS: float = 1e-3
_SERIES_TERMS: int = 10
_DOMAIN_SLACK: float = 1e-12


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class SphereProfile(BaseModel):
    """Summary of a CMC sphere's generating profile.

    Attributes:
        H: Mean curvature.
        space: Ambient space.
        a: Half-domain of the profile coordinate.
        y0: Pole angle y(0).
        embedded: Whether y0 > -pi.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    H: float = Field(ge=0.0, description="Mean curvature")
    space: SpaceParams
    a: float = Field(gt=0.0, description="Half-domain of the profile coordinate")
    y0: float = Field(le=0.0, description="Pole angle y(0)")
    embedded: bool


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def arc_ratio(z2: np.ndarray | float) -> np.ndarray:
    """G(z2): arctan(sqrt z2)/sqrt z2, continued analytically to z2 < 0."""
    z2 = np.asarray(z2, dtype=float)
    small: np.ndarray = np.abs(z2) < _SERIES_RADIUS
    series: np.ndarray = np.zeros_like(z2)
    power: np.ndarray = np.ones_like(z2)
    for n in range(_SERIES_TERMS):
        series = series + power / (2 * n + 1)
        power = -power * z2
    with np.errstate(divide="ignore", invalid="ignore"):
        root_pos: np.ndarray = np.sqrt(np.where(z2 > 0.0, z2, 1.0))
        root_neg: np.ndarray = np.sqrt(np.where(z2 < 0.0, -z2, 0.25))
        positive: np.ndarray = np.arctan(root_pos) / root_pos
        negative: np.ndarray = np.arctanh(np.minimum(root_neg, 1.0)) / root_neg
    return np.where(small, series, np.where(z2 > 0.0, positive, negative))


def sphere_discriminant(H: float, space: SpaceParams) -> float:
    """4H^2 + kappa; CMC spheres exist iff it is positive."""
    return 4.0 * H * H + space.kappa


def _require_sphere(H: float, space: SpaceParams) -> float:
    space.require_positive_tau()
    if H < 0.0:
        raise DomainError(f"mean curvature must satisfy H >= 0, got {H}")
    m: float = sphere_discriminant(H, space)
    if m <= 0.0:
        raise NoSphereError(
            f"no CMC sphere for 4H^2 + kappa = {m:.6g} <= 0 (H={H}, kappa={space.kappa})"
        )
    return m


def _require_berger(space: SpaceParams, what: str) -> None:
    if space.kind is not SpaceKind.BERGER:
        raise DomainError(f"{what} is only available for Berger spheres")


def sphere_half_domain(H: float, space: SpaceParams) -> float:
    """a = arctan(sqrt(kappa)/2H) (Berger) or arctanh(sqrt(-kappa)/2H) (Sl(2,R))."""
    _require_sphere(H, space)
    if space.kind is SpaceKind.BERGER:
        return 0.5 * math.pi if H == 0.0 else math.atan(math.sqrt(space.kappa) / (2.0 * H))
    return math.atanh(math.sqrt(-space.kappa) / (2.0 * H))


# ---------------------------------------------------------------------------
# Sphere profile
# ---------------------------------------------------------------------------


def aux_branch(x: np.ndarray | float, H: float, space: SpaceParams) -> np.ndarray:
    """lambda(x) (Berger) or rho(x) (Sl(2,R)) of the sphere profile.

    lambda(0) = 1 and lambda(a) = 0; likewise rho(0) = 1 and rho(+-a) = 0.
    """
    x = np.asarray(x, dtype=float)
    kappa, tau = space.kappa, space.tau
    if space.kind is SpaceKind.BERGER:
        t2: np.ndarray = np.tan(x) ** 2
        num: np.ndarray = 1.0 - (4.0 * H * H / kappa) * t2
        den: np.ndarray = 1.0 + (4.0 * tau * tau / kappa) * t2
    else:
        t2 = np.tanh(x) ** 2
        num = 1.0 + (4.0 * H * H / kappa) * t2
        den = 1.0 - (4.0 * tau * tau / kappa) * t2
    return np.sqrt(np.maximum(num, 0.0) / den)


def _check_profile_domain(x: np.ndarray, a: float) -> None:
    if np.any(np.abs(x) > a + _DOMAIN_SLACK) or np.any(~np.isfinite(x)):
        raise DomainError(f"profile coordinate outside [-{a:.6g}, {a:.6g}]")


def sphere_profile_y(x: np.ndarray | float, H: float, space: SpaceParams) -> np.ndarray | float:
    """Closed-form sphere profile y(x).

    Berger (x in [0, a]):
        y = -arctan(beta lam) + (H/tau) k2 lam G(k2 lam^2)
    Sl(2,R) (|x| <= a, even in x):
        y = arctan(beta rho) - (H/tau) k2 rho G(k2 rho^2)
    with beta = tau/H and k2 = (4 tau^2 - kappa)/(4H^2 + kappa).
    At H = 0 (Berger) the sphere is the great sphere and y = -pi/2.

    Raises:
        NoSphereError: If 4H^2 + kappa <= 0.
        DomainError: If x is outside the profile domain.
    """
    m: float = _require_sphere(H, space)
    a: float = sphere_half_domain(H, space)
    xs: np.ndarray = np.asarray(x, dtype=float)
    if space.kind is SpaceKind.BERGER and np.any(xs < -_DOMAIN_SLACK):
        raise DomainError("Berger sphere profile is defined on [0, a]")
    _check_profile_domain(xs, a)
    if H == 0.0:
        result: np.ndarray = np.full_like(xs, -0.5 * math.pi)
    else:
        tau: float = space.tau
        k2: float = (4.0 * tau * tau - space.kappa) / m
        lam: np.ndarray = aux_branch(np.clip(np.abs(xs), 0.0, a), H, space)
        tail: np.ndarray = (H / tau) * k2 * lam * arc_ratio(k2 * lam * lam)
        if space.kind is SpaceKind.BERGER:
            result = -np.arctan((tau / H) * lam) + tail
        else:
            result = np.arctan((tau / H) * lam) - tail
    return float(result) if result.ndim == 0 else result


def sphere_profile_dy(x: np.ndarray | float, H: float, space: SpaceParams) -> np.ndarray | float:
    """Printed derivative y'(x) = (H/tau) tan x / lambda (tanh x / rho for Sl(2,R)).

    Infinite at |x| = a where the profile has a vertical tangent.
    """
    _require_sphere(H, space)
    xs: np.ndarray = np.asarray(x, dtype=float)
    slope_fn = np.tan if space.kind is SpaceKind.BERGER else np.tanh
    with np.errstate(divide="ignore"):
        result: np.ndarray = (H / space.tau) * slope_fn(xs) / aux_branch(xs, H, space)
    return float(result) if result.ndim == 0 else result


def sphere_profile(H: float, space: SpaceParams) -> SphereProfile:
    """Half-domain, pole angle and embeddedness of the CMC sphere with curvature H."""
    a: float = sphere_half_domain(H, space)
    y0: float = float(sphere_profile_y(0.0, H, space))
    return SphereProfile(H=H, space=space, a=a, y0=y0, embedded=y0 > -math.pi)


# ---------------------------------------------------------------------------
# Sphere immersion
# ---------------------------------------------------------------------------


def _chart(kind: SpaceKind) -> tuple:
    if kind is SpaceKind.BERGER:
        return np.cos, np.sin, lambda v: -np.sin(v), np.cos
    return np.cosh, np.sinh, np.sinh, np.cosh


def sphere_immersion_arrays(
    x: np.ndarray, t: np.ndarray, H: float, space: SpaceParams
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized sphere immersion, returning (z, w) arrays.

    For x < 0 the profile argument is xi = x + a and z = c(xi) e^{i y(xi)};
    for x >= 0 it is xi = a - x and z = c(xi) e^{-i y(xi)}; in both
    w = s(xi) e^{it}, with (c, s) = (cos, sin) or (cosh, sinh).
    """
    a: float = sphere_half_domain(H, space)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    _check_profile_domain(x, a)
    c_fn, s_fn, _, _ = _chart(space.kind)
    xi: np.ndarray = np.clip(np.where(x < 0.0, x + a, a - x), 0.0, a)
    turn: np.ndarray = np.where(x < 0.0, 1.0, -1.0)
    y: np.ndarray = np.asarray(sphere_profile_y(xi, H, space))
    z: np.ndarray = c_fn(xi) * np.exp(1j * turn * y)
    w: np.ndarray = s_fn(xi) * np.exp(1j * t)
    return z, w


def sphere_immersion_derivatives(
    x: np.ndarray, t: np.ndarray, H: float, space: SpaceParams
) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Analytic partial derivatives ((z_x, w_x), (z_t, w_t)) of the immersion."""
    a: float = sphere_half_domain(H, space)
    x = np.asarray(x, dtype=float)
    t = np.asarray(t, dtype=float)
    c_fn, s_fn, dc_fn, ds_fn = _chart(space.kind)
    xi: np.ndarray = np.clip(np.where(x < 0.0, x + a, a - x), 0.0, a)
    turn: np.ndarray = np.where(x < 0.0, 1.0, -1.0)
    y: np.ndarray = np.asarray(sphere_profile_y(xi, H, space))
    dy: np.ndarray = np.asarray(sphere_profile_dy(xi, H, space)) if H > 0.0 else np.zeros_like(xi)
    phase: np.ndarray = np.exp(1j * turn * y)
    z_x: np.ndarray = turn * (dc_fn(xi) + 1j * turn * c_fn(xi) * dy) * phase
    w_x: np.ndarray = turn * ds_fn(xi) * np.exp(1j * t)
    z_t: np.ndarray = np.zeros_like(z_x)
    w_t: np.ndarray = 1j * s_fn(xi) * np.exp(1j * t)
    return (z_x, w_x), (z_t, w_t)


def sphere_immersion(x: float, t: float, H: float, space: SpaceParams) -> AmbientPoint:
    """Point Phi(x, t) of the CMC sphere, x in [-a, a], t in [-pi, pi].

    Raises:
        DomainError: If (x, t) lies outside the parameter rectangle.
        NoSphereError: If 4H^2 + kappa <= 0.
    """
    if abs(t) > math.pi:
        raise DomainError(f"t must lie in [-pi, pi], got {t}")
    z, w = sphere_immersion_arrays(np.asarray(x), np.asarray(t), H, space)
    return AmbientPoint(z=complex(z), w=complex(w), kind=space.kind)


# ---------------------------------------------------------------------------
# Conformal factor and area
# ---------------------------------------------------------------------------


def conformal_factor(x: np.ndarray | float, H: float, space: SpaceParams) -> np.ndarray | float:
    """e^{2u(x)} = 16(H^2+tau^2) cosh^2 x / [4(H^2+tau^2) cosh^2 x + kappa - 4 tau^2]^2."""
    _require_sphere(H, space)
    xs: np.ndarray = np.asarray(x, dtype=float)
    big: float = 4.0 * (H * H + space.tau**2)
    shift: float = space.kappa - 4.0 * space.tau**2
    sech2: np.ndarray = 1.0 / np.cosh(np.minimum(np.abs(xs), 350.0)) ** 2
    result: np.ndarray = 4.0 * big * sech2 / (big + shift * sech2) ** 2
    return float(result) if result.ndim == 0 else result


def conformal_log_derivative(
    x: np.ndarray | float, H: float, space: SpaceParams
) -> np.ndarray | float:
    """u'(x) = tanh x - 2A tanh x / (A + (kappa - 4tau^2) sech^2 x), A = 4(H^2 + tau^2).

    u'(-inf) - u'(+inf) = 2, the Gauss-Bonnet total turn of the sphere.
    """
    _require_sphere(H, space)
    xs: np.ndarray = np.asarray(x, dtype=float)
    big: float = 4.0 * (H * H + space.tau**2)
    shift: float = space.kappa - 4.0 * space.tau**2
    th: np.ndarray = np.tanh(xs)
    sech2: np.ndarray = 1.0 / np.cosh(np.minimum(np.abs(xs), 350.0)) ** 2
    result: np.ndarray = th - 2.0 * big * th / (big + shift * sech2)
    return float(result) if result.ndim == 0 else result


def sphere_area(H: float, space: SpaceParams) -> float:
    """Area of the CMC sphere: (8 pi/m)[1 + (4(H^2+tau^2)/m) G((4tau^2 - kappa)/m)], m = 4H^2 + kappa.

    Raises:
        NoSphereError: If 4H^2 + kappa <= 0.
    """
    m: float = _require_sphere(H, space)
    k2: float = (4.0 * space.tau**2 - space.kappa) / m
    ratio: float = float(arc_ratio(k2))
    return 8.0 * math.pi / m * (1.0 + 4.0 * (H * H + space.tau**2) / m * ratio)


# ---------------------------------------------------------------------------
# Volume (Berger)
# ---------------------------------------------------------------------------


def total_volume(space: SpaceParams) -> float:
    """Volume 32 pi^2 tau / kappa^2 of the Berger sphere."""
    _require_berger(space, "total volume")
    return 32.0 * math.pi**2 * abs(space.tau) / space.kappa**2


def sphere_volume(H: float, space: SpaceParams) -> float:
    """Volume of the region Omega_H bounded by the CMC sphere (Berger).

    vol = (16 pi tau/kappa^2)[2 arctan(tau/H) - kappa H/(tau m) + mu K]
    where mu K = (2 H N/(tau m^2)) G(k2), N = (kappa - 4tau^2)(2H^2 + kappa)
    - 2 tau^2 m, m = 4H^2 + kappa and k2 = (4tau^2 - kappa)/m.

    Raises:
        DomainError: For Sl(2,R).
    """
    _require_berger(space, "sphere volume")
    m: float = _require_sphere(H, space)
    kappa, tau = space.kappa, space.tau
    prefactor: float = 16.0 * math.pi * tau / kappa**2
    if H == 0.0:
        return prefactor * math.pi
    k2: float = (4.0 * tau * tau - kappa) / m
    big_n: float = (kappa - 4.0 * tau * tau) * (2.0 * H * H + kappa) - 2.0 * tau * tau * m
    bracket: float = (
        2.0 * math.atan(tau / H)
        - kappa * H / (tau * m)
        + 2.0 * H * big_n / (tau * m * m) * float(arc_ratio(k2))
    )
    return prefactor * bracket


def sphere_volume_complement(H: float, space: SpaceParams) -> float:
    """Volume of the other region bounded by the sphere: total - vol(Omega_H)."""
    return total_volume(space) - sphere_volume(H, space)


# ---------------------------------------------------------------------------
# Clifford tori
# ---------------------------------------------------------------------------


def clifford_radius(H: float, sign: int, space: SpaceParams) -> float:
    """r = sqrt(1/2 + sign H / sqrt(4H^2 + kappa)) (Berger)."""
    _require_berger(space, "Clifford radius")
    if H < 0.0:
        raise DomainError(f"mean curvature must satisfy H >= 0, got {H}")
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign}")
    return math.sqrt(0.5 + sign * H / math.sqrt(sphere_discriminant(H, space)))


def clifford_immersion(
    s: np.ndarray, t: np.ndarray, r: float
) -> tuple[np.ndarray, np.ndarray]:
    """Phi(s, t) = (r e^{is/r}, sqrt(1 - r^2) e^{it}), s in [0, 2 pi r]."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    return r * np.exp(1j * s / r), math.sqrt(1.0 - r * r) * np.exp(1j * t)


def torus_area_volume(H: float, space: SpaceParams) -> tuple[float, float]:
    """(area, smaller enclosed volume) of the CMC Clifford torus T_H (Berger).

    area = (4 tau/kappa)(4 pi^2/sqrt(4H^2+kappa)),
    volume = (16 pi^2 tau/kappa^2)(1 - 2H/sqrt(4H^2+kappa)).
    """
    _require_berger(space, "torus area and volume")
    space.require_positive_tau()
    if H < 0.0:
        raise DomainError(f"mean curvature must satisfy H >= 0, got {H}")
    root: float = math.sqrt(sphere_discriminant(H, space))
    area: float = 4.0 * space.tau / space.kappa * 4.0 * math.pi**2 / root
    volume: float = 16.0 * math.pi**2 * space.tau / space.kappa**2 * (1.0 - 2.0 * H / root)
    return area, volume

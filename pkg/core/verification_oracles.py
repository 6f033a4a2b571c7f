"""Independent numerical oracles for surfaces in Berger spheres and Sl(2,R).

The oracles recompute geometric quantities from first principles on any
parametrized surface (s, t) -> (z, w):

    1. tangent vectors Phi_s, Phi_t are converted to frame coefficients
       a, b in (E1, E2, V); the metric is diag(g) in that frame;
    2. covariant derivatives use the frame coefficients' derivatives plus
       the connection table, nabla_X Y = (X b_k + a_i b_j G[i, j, k]) F_k;
    3. the unit normal is the cross product in the orthonormal frame and
       H = (E n - 2F m + G l) / (2 (EG - F^2)).

The frame maps are real-linear in the point, so the derivative of the
frame coefficient b_k = <Phi_t, F_k(Phi)> / n_k along s is
(<Phi_st, F_k(Phi)> + <Phi_t, F_k(Phi_s)>) / n_k.

Sign convention: the normal is Phi_s x Phi_t in the orthonormal frame
(E1, E2, V) / sqrt(g); swapping the parameters flips H and the tilt.

The samplers below wrap the public immersions of the library; the oracle
functions themselves only see (z, w) arrays.
"""

import logging
import math
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.closed_forms import (
    clifford_immersion,
    sphere_half_domain,
    sphere_immersion_arrays,
    sphere_immersion_derivatives,
    sphere_profile_y,
)
from core.errors import DomainError, GeometricPreconditionError
from core.numerics_kernel import QuadratureMethod, QuadratureSpec, integrate_endpoint_singular
from core.space_models import (
    AmbientPoint,
    SpaceKind,
    SpaceParams,
    connection_table,
    frame_coefficient_arrays,
    frame_metric_diagonal,
)

logger: logging.Logger = logging.getLogger(__name__)

SurfaceMap = Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
SurfaceDerivative = Callable[
    [np.ndarray, np.ndarray],
    tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]],
]

DEFAULT_STEP: float = 1e-5
_DEGENERATE_METRIC: float = 1e-14
_AREA_SPEC: QuadratureSpec = QuadratureSpec(
    method=QuadratureMethod.GAUSS_SINE, abs_tol=1e-13, rel_tol=1e-11, max_levels=9
)
_INNER_NODES: int = 64


# ---------------------------------------------------------------------------
# Surface sampler
# ---------------------------------------------------------------------------


class SurfaceSampler(BaseModel):
    """Parametrized surface (s, t) -> (z, w) on a rectangle.

    Attributes:
        map: Vectorized parametrization returning complex arrays (z, w).
        kind: Quadric the surface lies on.
        s_range: Domain of s.
        t_range: Domain of t.
        derivative: Optional analytic ((z_s, w_s), (z_t, w_t)).
        s_breaks: Interior s-values where the parametrization is not smooth.
    """

    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    map: SurfaceMap
    kind: SpaceKind
    s_range: tuple[float, float]
    t_range: tuple[float, float] = (-math.pi, math.pi)
    derivative: SurfaceDerivative | None = None
    s_breaks: tuple[float, ...] = ()

    @property
    def analytic(self) -> bool:
        return self.derivative is not None

    def point(self, s: float, t: float) -> AmbientPoint:
        z, w = self.map(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        return AmbientPoint(z=complex(z), w=complex(w), kind=self.kind)

    def swapped(self) -> "SurfaceSampler":
        """Same surface with the parameters exchanged (opposite orientation)."""
        base_map: SurfaceMap = self.map
        base_derivative: SurfaceDerivative | None = self.derivative

        def derivative(t: np.ndarray, s: np.ndarray):
            d_s, d_t = base_derivative(s, t)  # type: ignore[misc]
            return d_t, d_s

        return SurfaceSampler(
            map=lambda t, s: base_map(s, t),
            kind=self.kind,
            s_range=self.t_range,
            t_range=self.s_range,
            derivative=derivative if base_derivative is not None else None,
        )


def great_sphere_sampler() -> SurfaceSampler:
    """Great sphere {Im z = 0} of the Berger sphere: (cos s, sin s e^{it}), s in [0, pi]."""
    return SurfaceSampler(
        map=lambda s, t: (np.cos(s) + 0j, np.sin(s) * np.exp(1j * t)),
        kind=SpaceKind.BERGER,
        s_range=(0.0, math.pi),
        derivative=lambda s, t: (
            (-np.sin(s) + 0j, np.cos(s) * np.exp(1j * t)),
            (np.zeros_like(s, dtype=complex), 1j * np.sin(s) * np.exp(1j * t)),
        ),
    )


def clifford_sampler(r: float) -> SurfaceSampler:
    """Clifford torus |z| = r via (r e^{is/r}, sqrt(1 - r^2) e^{it}), s in [0, 2 pi r]."""
    if not 0.0 < r < 1.0:
        raise DomainError(f"Clifford radius must lie in (0, 1), got {r}")
    co: float = math.sqrt(1.0 - r * r)
    return SurfaceSampler(
        map=lambda s, t: clifford_immersion(s, t, r),
        kind=SpaceKind.BERGER,
        s_range=(0.0, 2.0 * math.pi * r),
        derivative=lambda s, t: (
            (1j * np.exp(1j * s / r), np.zeros_like(s, dtype=complex)),
            (np.zeros_like(t, dtype=complex), 1j * co * np.exp(1j * t)),
        ),
    )


def sphere_sampler(H: float, space: SpaceParams, analytic: bool = True) -> SurfaceSampler:
    """CMC sphere immersion on [-a, a] x [-pi, pi], with a seam at x = 0."""
    a: float = sphere_half_domain(H, space)
    return SurfaceSampler(
        map=lambda x, t: sphere_immersion_arrays(x, t, H, space),
        kind=space.kind,
        s_range=(-a, a),
        derivative=(lambda x, t: sphere_immersion_derivatives(x, t, H, space)) if analytic else None,
        s_breaks=(0.0,),
    )


# ---------------------------------------------------------------------------
# Derivatives
# ---------------------------------------------------------------------------


def _eval(surf: SurfaceSampler, s: float, t: float) -> np.ndarray:
    z, w = surf.map(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    return np.array([complex(z), complex(w)])


def _first(surf: SurfaceSampler, s: float, t: float, h: float) -> tuple[np.ndarray, np.ndarray]:
    if surf.derivative is not None:
        (zs, ws), (zt, wt) = surf.derivative(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        return np.array([complex(zs), complex(ws)]), np.array([complex(zt), complex(wt)])
    d_s: np.ndarray = (_eval(surf, s + h, t) - _eval(surf, s - h, t)) / (2.0 * h)
    d_t: np.ndarray = (_eval(surf, s, t + h) - _eval(surf, s, t - h)) / (2.0 * h)
    return d_s, d_t


def _second(
    surf: SurfaceSampler, s: float, t: float, h: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if surf.derivative is not None:
        plus_s = _first(surf, s + h, t, h)
        minus_s = _first(surf, s - h, t, h)
        plus_t = _first(surf, s, t + h, h)
        minus_t = _first(surf, s, t - h, h)
        d_ss: np.ndarray = (plus_s[0] - minus_s[0]) / (2.0 * h)
        d_st: np.ndarray = 0.5 * ((plus_t[0] - minus_t[0]) + (plus_s[1] - minus_s[1])) / (2.0 * h)
        d_tt: np.ndarray = (plus_t[1] - minus_t[1]) / (2.0 * h)
        return d_ss, d_st, d_tt
    center: np.ndarray = _eval(surf, s, t)
    d_ss = (_eval(surf, s + h, t) - 2.0 * center + _eval(surf, s - h, t)) / (h * h)
    d_tt = (_eval(surf, s, t + h) - 2.0 * center + _eval(surf, s, t - h)) / (h * h)
    d_st = (
        _eval(surf, s + h, t + h)
        - _eval(surf, s + h, t - h)
        - _eval(surf, s - h, t + h)
        + _eval(surf, s - h, t - h)
    ) / (4.0 * h * h)
    return d_ss, d_st, d_tt


def _jet(
    surf: SurfaceSampler, s: float, t: float, step: float, richardson: bool
) -> tuple[np.ndarray, ...]:
    """(Phi, Phi_s, Phi_t, Phi_ss, Phi_st, Phi_tt), optionally Richardson-extrapolated."""
    h1: float = step * max(1.0, abs(s), abs(t))
    h2: float = h1 if surf.analytic else math.sqrt(h1) * 0.3

    def level(scale: float) -> list[np.ndarray]:
        return [*_first(surf, s, t, h1 * scale), *_second(surf, s, t, h2 * scale)]

    coarse: list[np.ndarray] = level(1.0)
    if richardson:
        fine: list[np.ndarray] = level(0.5)
        coarse = [(4.0 * f - c) / 3.0 for f, c in zip(fine, coarse)]
    return (_eval(surf, s, t), *coarse)


# ---------------------------------------------------------------------------
# Mean curvature and tilt
# ---------------------------------------------------------------------------


def _coefficients(vec: np.ndarray, at: np.ndarray, kind: SpaceKind) -> np.ndarray:
    return frame_coefficient_arrays(vec[0], vec[1], at[0], at[1], kind)


def _local_geometry(
    surf: SurfaceSampler, at: tuple[float, float], space: SpaceParams, step: float, richardson: bool
) -> tuple[float, np.ndarray]:
    """Mean curvature and unit normal (orthonormal-frame coordinates) at a sample."""
    if surf.kind is not space.kind:
        raise DomainError(f"sampler lives on {surf.kind.value}, space is {space.kind.value}")
    p, p_s, p_t, p_ss, p_st, p_tt = _jet(surf, at[0], at[1], step, richardson)
    kind: SpaceKind = space.kind
    g: np.ndarray = frame_metric_diagonal(space)
    gamma: np.ndarray = connection_table(space).numeric()

    a: np.ndarray = _coefficients(p_s, p, kind)
    b: np.ndarray = _coefficients(p_t, p, kind)
    da_s: np.ndarray = _coefficients(p_ss, p, kind) + _coefficients(p_s, p_s, kind)
    db_s: np.ndarray = _coefficients(p_st, p, kind) + _coefficients(p_t, p_s, kind)
    db_t: np.ndarray = _coefficients(p_tt, p, kind) + _coefficients(p_t, p_t, kind)

    nabla_ss: np.ndarray = da_s + np.einsum("i,j,ijk->k", a, a, gamma)
    nabla_st: np.ndarray = db_s + np.einsum("i,j,ijk->k", a, b, gamma)
    nabla_tt: np.ndarray = db_t + np.einsum("i,j,ijk->k", b, b, gamma)

    first_e: float = float(np.sum(g * a * a))
    first_f: float = float(np.sum(g * a * b))
    first_g: float = float(np.sum(g * b * b))
    det: float = first_e * first_g - first_f * first_f
    if det <= _DEGENERATE_METRIC * max(first_e * first_g, 1.0):
        raise GeometricPreconditionError(f"degenerate first fundamental form at {at}")

    root_g: np.ndarray = np.sqrt(g)
    normal: np.ndarray = np.cross(root_g * a, root_g * b)
    normal /= np.linalg.norm(normal)
    normal_frame: np.ndarray = normal / root_g

    second_l: float = float(np.sum(g * nabla_ss * normal_frame))
    second_m: float = float(np.sum(g * nabla_st * normal_frame))
    second_n: float = float(np.sum(g * nabla_tt * normal_frame))
    H: float = (first_e * second_n - 2.0 * first_f * second_m + first_g * second_l) / (2.0 * det)
    return H, normal


def numeric_mean_curvature(
    surf: SurfaceSampler,
    at: tuple[float, float],
    space: SpaceParams,
    step: float = DEFAULT_STEP,
    richardson: bool = True,
) -> float:
    """Mean curvature at (s, t) from numeric fundamental forms.

    Raises:
        GeometricPreconditionError: If the metric degenerates at the sample.
    """
    H, _ = _local_geometry(surf, at, space, step, richardson)
    return H


def numeric_normal_tilt(
    surf: SurfaceSampler,
    at: tuple[float, float],
    space: SpaceParams,
    step: float = DEFAULT_STEP,
    richardson: bool = True,
) -> float:
    """C = g(N, xi) with xi the unit vertical Killing field.

    xi = (kappa/4tau) V (Berger) or -(kappa/4tau) V (Sl(2,R)); for tau > 0
    both are the third orthonormal frame vector, so C is the V-component
    of the unit normal.

    N is Phi_s x Phi_t, so the sign follows the parameter orientation of
    the sampler: the value agrees with :func:`core.profile_dynamics.tilt_C`
    up to sign, and ``surf.swapped()`` flips it.
    """
    _, normal = _local_geometry(surf, at, space, step, richardson)
    return float(normal[2]) if space.tau > 0.0 else -float(normal[2])


# ---------------------------------------------------------------------------
# Area and volume
# ---------------------------------------------------------------------------


def _area_density(surf: SurfaceSampler, space: SpaceParams, s: np.ndarray, t: np.ndarray, step: float) -> np.ndarray:
    kind: SpaceKind = space.kind
    z, w = surf.map(s, t)
    if surf.derivative is not None:
        (zs, ws), (zt, wt) = surf.derivative(s, t)
    else:
        lo, hi = surf.s_range
        s_plus: np.ndarray = np.minimum(s + step, hi)
        s_minus: np.ndarray = np.maximum(s - step, lo)
        zp, wp = surf.map(s_plus, t)
        zm, wm = surf.map(s_minus, t)
        zs, ws = (zp - zm) / (s_plus - s_minus), (wp - wm) / (s_plus - s_minus)
        zq, wq = surf.map(s, t + step)
        zr, wr = surf.map(s, t - step)
        zt, wt = (zq - zr) / (2.0 * step), (wq - wr) / (2.0 * step)
    g: np.ndarray = frame_metric_diagonal(space)[:, None, None]
    a: np.ndarray = frame_coefficient_arrays(zs, ws, z, w, kind)
    b: np.ndarray = frame_coefficient_arrays(zt, wt, z, w, kind)
    first_e: np.ndarray = np.sum(g * a * a, axis=0)
    first_f: np.ndarray = np.sum(g * a * b, axis=0)
    first_g: np.ndarray = np.sum(g * b * b, axis=0)
    return np.sqrt(np.maximum(first_e * first_g - first_f * first_f, 0.0))


def numeric_area(
    surf: SurfaceSampler,
    space: SpaceParams,
    step: float = DEFAULT_STEP,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integral of sqrt(det I) over the domain.

    The s-direction is split at ``s_breaks`` and integrated with the
    endpoint-singular rule (densities may blow up like 1/sqrt at seams);
    the t-direction uses Gauss-Legendre nodes. The default rule is the
    sine-substituted Gauss rule: its nodes keep a representable distance
    from the seams, where the immersion derivatives are infinite.
    """
    spec = spec or _AREA_SPEC
    t_lo, t_hi = surf.t_range
    nodes, weights = np.polynomial.legendre.leggauss(_INNER_NODES)
    t_nodes: np.ndarray = 0.5 * (t_hi - t_lo) * nodes + 0.5 * (t_hi + t_lo)
    t_weights: np.ndarray = 0.5 * (t_hi - t_lo) * weights

    def outer(s: np.ndarray, _lo: np.ndarray, _hi: np.ndarray) -> np.ndarray:
        s_grid, t_grid = np.meshgrid(np.atleast_1d(s), t_nodes, indexing="ij")
        density: np.ndarray = _area_density(surf, space, s_grid, t_grid, step)
        return density @ t_weights

    cuts: list[float] = [surf.s_range[0], *sorted(surf.s_breaks), surf.s_range[1]]
    total: float = sum(
        integrate_endpoint_singular(outer, left, right, spec) for left, right in zip(cuts, cuts[1:])
    )
    logger.debug("Numeric area over %d pieces: %.15g", len(cuts) - 1, total)
    return total


def numeric_volume_coarea(H: float, space: SpaceParams, spec: QuadratureSpec | None = None) -> float:
    """vol(Omega_H) by the co-area formula with f(z, w) = arccos|z| (Berger).

    vol = (64 pi tau/kappa^2) int_0^a sin t cos t (-y(t)) dt, where y <= 0 is
    the sphere profile; the integrand vanishes at t = a.
    """
    if space.kind is not SpaceKind.BERGER:
        raise DomainError("co-area volume is available for Berger spheres only")
    a: float = sphere_half_domain(H, space)

    def integrand(x: np.ndarray, _lo: np.ndarray, _hi: np.ndarray) -> np.ndarray:
        profile: np.ndarray = np.asarray(sphere_profile_y(np.clip(x, 0.0, a), H, space))
        return -np.sin(x) * np.cos(x) * profile

    integral: float = integrate_endpoint_singular(integrand, 0.0, a, spec)
    return 64.0 * math.pi * space.tau / space.kappa**2 * integral

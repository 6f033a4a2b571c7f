"""Ambient homogeneous spaces: Berger spheres and Sl(2,R).

Both spaces are modelled on a real quadric of C^2,

    Berger sphere:  |z|^2 + |w|^2 = 1   (kappa > 0)
    Sl(2,R):        |z|^2 - |w|^2 = 1   (kappa < 0)

with the indefinite bracket <u, v>_sigma = Re(u1 conj(v1) + sigma u2
conj(v2)), sigma = +1 for Berger and -1 for Sl(2,R). A point's tangent
space is the sigma-orthogonal complement of the point itself.

Each space carries a global frame (E1, E2, V) with V = (iz, iw) tangent to
the Hopf-type fibres. In frame coefficients the metric is diagonal:

    g = diag(4/|kappa|, 4/|kappa|, 16 tau^2 / kappa^2)

Tangent vectors are stored in ambient C^2 coordinates and converted to
frame coefficients through three brackets. The connection table is kept
as exact sympy expressions in (kappa, tau) and lambdified on demand.

Example:
    >>> from core.space_models import SpaceKind, SpaceParams, AmbientPoint
    >>> from core.space_models import frame_at, metric_eval
    >>> space = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=0.4)
    >>> p = AmbientPoint(z=1.0, w=0.0, kind=space.kind)
    >>> e1, e2, v = frame_at(p, space)
    >>> e1.dw
    (1+0j)
    >>> round(metric_eval(v, v, p, space), 12)
    0.16
"""

import logging
from enum import Enum
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.errors import DomainError

logger: logging.Logger = logging.getLogger(__name__)

QUADRIC_TOL: float = 1e-12
"""Absolute tolerance on the quadric constraint of an ambient point."""

TANGENCY_TOL: float = 1e-10
"""Absolute tolerance on <X, p>_sigma for a tangent vector."""


# ---------------------------------------------------------------------------
# Enums
# ---------------------------------------------------------------------------


class SpaceKind(str, Enum):
    """Ambient space family.

    Attributes:
        BERGER: Berger sphere, kappa > 0.
        SL2R: Sl(2,R) with its homogeneous metric, kappa < 0.
    """

    BERGER = "berger"
    SL2R = "sl2r"


class FrameField(str, Enum):
    """Names of the global frame fields."""

    E1 = "E1"
    E2 = "E2"
    V = "V"


FRAME_ORDER: tuple[FrameField, ...] = (FrameField.E1, FrameField.E2, FrameField.V)


# ---------------------------------------------------------------------------
# Parameter and point models
# ---------------------------------------------------------------------------


class SpaceParams(BaseModel):
    """Parameters (kind, kappa, tau) of the ambient space E(kappa, tau).

    Attributes:
        kind: Berger sphere or Sl(2,R).
        kappa: Curvature of the base surface.
        tau: Bundle curvature.

    Example:
        >>> SpaceParams(kind="berger", kappa=4.0, tau=0.4).sigma
        1
        >>> SpaceParams(kind="sl2r", kappa=-4.0, tau=1.0).sigma
        -1
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SpaceKind = Field(description="Ambient space family")
    kappa: float = Field(description="Curvature of the base surface")
    tau: float = Field(description="Bundle curvature")

    @field_validator("tau")
    @classmethod
    def _tau_nonzero(cls, v: float) -> float:
        if v == 0.0:
            raise ValueError("tau must be non-zero (product spaces are not modelled)")
        return v

    @model_validator(mode="after")
    def _check_kind(self) -> "SpaceParams":
        if self.kind is SpaceKind.BERGER and not self.kappa > 0.0:
            raise ValueError(f"Berger sphere needs kappa > 0, got {self.kappa}")
        if self.kind is SpaceKind.SL2R and not self.kappa < 0.0:
            raise ValueError(f"Sl(2,R) needs kappa < 0, got {self.kappa}")
        if self.kappa - 4.0 * self.tau**2 == 0.0:
            raise ValueError("kappa - 4 tau^2 must be non-zero (space forms are excluded)")
        return self

    @property
    def sigma(self) -> int:
        """Signature of the quadric bracket: +1 Berger, -1 Sl(2,R)."""
        return 1 if self.kind is SpaceKind.BERGER else -1

    @property
    def bundle_ratio(self) -> float:
        """4 tau^2 / |kappa|, positive in both spaces."""
        return 4.0 * self.tau**2 / abs(self.kappa)

    def require_positive_tau(self) -> None:
        """Raise :class:`DomainError` unless tau > 0.

        The profile, classification and closed-form layers use the
        orientation in which H >= 0 is the normalized convention.
        """
        if self.tau <= 0.0:
            raise DomainError(f"this operation requires tau > 0, got {self.tau}")


class AmbientPoint(BaseModel):
    """Point (z, w) of the ambient quadric.

    Attributes:
        z: First complex coordinate.
        w: Second complex coordinate.
        kind: Space the point belongs to (selects the quadric).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    z: complex
    w: complex
    kind: SpaceKind = SpaceKind.BERGER

    @model_validator(mode="after")
    def _on_quadric(self) -> "AmbientPoint":
        sigma: int = 1 if self.kind is SpaceKind.BERGER else -1
        residual: float = abs(self.z) ** 2 + sigma * abs(self.w) ** 2 - 1.0
        if abs(residual) > QUADRIC_TOL:
            raise ValueError(
                f"point ({self.z}, {self.w}) is off the {self.kind.value} quadric "
                f"(residual {residual:.3e})"
            )
        return self

    def as_array(self) -> np.ndarray:
        """Real coordinates (Re z, Im z, Re w, Im w)."""
        return np.array([self.z.real, self.z.imag, self.w.real, self.w.imag])


class AmbientVector(BaseModel):
    """Tangent vector in ambient C^2 components.

    Tangency to a base point is checked by the operations that receive
    both (see :func:`tangent_components`).
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    dz: complex
    dw: complex

    def scaled(self, factor: float) -> "AmbientVector":
        """Return ``factor`` times this vector."""
        return AmbientVector(dz=factor * self.dz, dw=factor * self.dw)


class Frame(NamedTuple):
    """Global frame (E1, E2, V) at a point."""

    e1: AmbientVector
    e2: AmbientVector
    v: AmbientVector


# ---------------------------------------------------------------------------
# Vectorized primitives (shared with the verification oracles)
# ---------------------------------------------------------------------------


def quadric_bracket(
    u1: np.ndarray, u2: np.ndarray, v1: np.ndarray, v2: np.ndarray, sigma: int
) -> np.ndarray:
    """Re(u1 conj(v1) + sigma u2 conj(v2)), elementwise."""
    return np.real(u1 * np.conj(v1) + sigma * u2 * np.conj(v2))


def frame_fields(
    z: np.ndarray, w: np.ndarray, kind: SpaceKind
) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Frame fields at (z, w) as ((E1z, E1w), (E2z, E2w), (Vz, Vw)).

    The frame maps are real-linear in the point, so the same function
    applied to a tangent vector X gives the derivative of the frame along X.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if kind is SpaceKind.BERGER:
        e1 = (-np.conj(w), np.conj(z))
        e2 = (-1j * np.conj(w), 1j * np.conj(z))
    else:
        e1 = (np.conj(w), np.conj(z))
        e2 = (1j * np.conj(w), 1j * np.conj(z))
    v = (1j * z, 1j * w)
    return e1, e2, v


def frame_norms(kind: SpaceKind) -> tuple[float, float, float]:
    """<F, F>_sigma for F = E1, E2, V (constant on the quadric)."""
    if kind is SpaceKind.BERGER:
        return (1.0, 1.0, 1.0)
    return (-1.0, -1.0, 1.0)


def frame_metric_diagonal(space: SpaceParams) -> np.ndarray:
    """g(E1,E1), g(E2,E2), g(V,V)."""
    k: float = abs(space.kappa)
    return np.array([4.0 / k, 4.0 / k, 16.0 * space.tau**2 / space.kappa**2])


def frame_coefficient_arrays(
    dz: np.ndarray, dw: np.ndarray, z: np.ndarray, w: np.ndarray, kind: SpaceKind
) -> np.ndarray:
    """Frame coefficients of ambient vectors, stacked on a leading axis of 3."""
    sigma: int = 1 if kind is SpaceKind.BERGER else -1
    norms = frame_norms(kind)
    fields = frame_fields(z, w, kind)
    return np.stack(
        [quadric_bracket(dz, dw, fz, fw, sigma) / n for (fz, fw), n in zip(fields, norms)]
    )


# ---------------------------------------------------------------------------
# Frame, metric, Killing field
# ---------------------------------------------------------------------------


def _check_point(p: AmbientPoint, space: SpaceParams) -> None:
    if p.kind is not space.kind:
        raise DomainError(f"point lives on the {p.kind.value} quadric, space is {space.kind.value}")


def tangent_components(
    u: AmbientVector, p: AmbientPoint, space: SpaceParams
) -> tuple[complex, complex]:
    """Return u re-projected onto the tangent space at p.

    Raises:
        DomainError: If |<u, p>_sigma| exceeds :data:`TANGENCY_TOL`.
    """
    _check_point(p, space)
    sigma: int = space.sigma
    normal_part: float = float(quadric_bracket(u.dz, u.dw, p.z, p.w, sigma))
    if abs(normal_part) > TANGENCY_TOL:
        raise DomainError(
            f"vector ({u.dz}, {u.dw}) is not tangent at ({p.z}, {p.w}): "
            f"<u, p> = {normal_part:.3e}"
        )
    # <p, p>_sigma = 1 on both quadrics.
    return u.dz - normal_part * p.z, u.dw - normal_part * p.w


def frame_at(p: AmbientPoint, space: SpaceParams) -> Frame:
    """Global frame (E1, E2, V) at p.

    Berger: E1 = (-conj w, conj z), E2 = (-i conj w, i conj z).
    Sl(2,R): E1 = (conj w, conj z), E2 = (i conj w, i conj z).
    Both: V = (iz, iw).
    """
    _check_point(p, space)
    fields = frame_fields(np.asarray(p.z), np.asarray(p.w), space.kind)
    e1, e2, v = (AmbientVector(dz=complex(fz), dw=complex(fw)) for fz, fw in fields)
    return Frame(e1=e1, e2=e2, v=v)


def frame_coefficients(u: AmbientVector, p: AmbientPoint, space: SpaceParams) -> np.ndarray:
    """Coefficients (c1, c2, cV) of a tangent vector in the frame at p."""
    dz, dw = tangent_components(u, p, space)
    return frame_coefficient_arrays(
        np.asarray(dz), np.asarray(dw), np.asarray(p.z), np.asarray(p.w), space.kind
    )


def metric_eval(
    u: AmbientVector, v: AmbientVector, p: AmbientPoint, space: SpaceParams
) -> float:
    """Evaluate g(u, v) at p.

    Berger uses the ambient formula
    (4/kappa)[<u,v> + (4 tau^2/kappa - 1)<u,V><v,V>]; Sl(2,R) uses the
    bilinear extension of the diagonal frame metric.

    Raises:
        DomainError: If u or v is not tangent at p.
    """
    uz, uw = tangent_components(u, p, space)
    vz, vw = tangent_components(v, p, space)
    if space.kind is SpaceKind.BERGER:
        vert = (1j * p.z, 1j * p.w)
        round_uv: float = float(quadric_bracket(uz, uw, vz, vw, 1))
        u_v: float = float(quadric_bracket(uz, uw, vert[0], vert[1], 1))
        v_v: float = float(quadric_bracket(vz, vw, vert[0], vert[1], 1))
        ratio: float = 4.0 * space.tau**2 / space.kappa
        return (4.0 / space.kappa) * (round_uv + (ratio - 1.0) * u_v * v_v)
    cu = frame_coefficient_arrays(np.asarray(uz), np.asarray(uw), p.z, p.w, space.kind)
    cv = frame_coefficient_arrays(np.asarray(vz), np.asarray(vw), p.z, p.w, space.kind)
    return float(np.sum(frame_metric_diagonal(space) * cu * cv))


def killing_field(p: AmbientPoint, space: SpaceParams) -> AmbientVector:
    """Unit vertical Killing field: (kappa/4tau) V (Berger), -(kappa/4tau) V (Sl(2,R))."""
    v = frame_at(p, space).v
    factor: float = space.kappa / (4.0 * space.tau)
    return v.scaled(factor if space.kind is SpaceKind.BERGER else -factor)


# ---------------------------------------------------------------------------
# Connection table
# ---------------------------------------------------------------------------

KAPPA, TAU = sympy.symbols("kappa tau", real=True)

_Triple = tuple[sympy.Expr, sympy.Expr, sympy.Expr]


def _table_entries(kind: SpaceKind) -> dict[tuple[FrameField, FrameField], _Triple]:
    a: sympy.Expr = 4 * TAU**2 / KAPPA
    zero: sympy.Expr = sympy.Integer(0)
    one: sympy.Expr = sympy.Integer(1)
    # Sign of the E1/E2 bracket term; the remaining entries coincide.
    eps: sympy.Expr = -one if kind is SpaceKind.BERGER else one
    e1, e2, v = FRAME_ORDER
    return {
        (e1, e1): (zero, zero, zero),
        (e1, e2): (zero, zero, eps),
        (e1, v): (zero, a, zero),
        (e2, e1): (zero, zero, -eps),
        (e2, e2): (zero, zero, zero),
        (e2, v): (-a, zero, zero),
        (v, e1): (zero, a - 2, zero),
        (v, e2): (-(a - 2), zero, zero),
        (v, v): (zero, zero, zero),
    }


class ConnectionTable:
    """Levi-Civita connection on the global frame.

    ``table[(A, B)]`` is the triple of exact coefficients of nabla_A B in
    (E1, E2, V), rational in (kappa, tau).

    Example:
        >>> space = SpaceParams(kind="berger", kappa=4.0, tau=0.4)
        >>> table = connection_table(space)
        >>> table.coefficients(FrameField.E1, FrameField.E2)
        (0, 0, -1)
        >>> table.numeric()[0, 2]
        array([0.  , 0.16, 0.  ])
    """

    __slots__ = ("_entries", "_kind", "_space")

    def __init__(self, space: SpaceParams) -> None:
        self._space: SpaceParams = space
        self._kind: SpaceKind = space.kind
        self._entries: dict[tuple[FrameField, FrameField], _Triple] = _table_entries(space.kind)

    def coefficients(self, a: FrameField, b: FrameField) -> _Triple:
        """Exact coefficients of nabla_a b."""
        return self._entries[(a, b)]

    def numeric(self) -> np.ndarray:
        """Float array G with G[i, j, k] the F_k-coefficient of nabla_{F_i} F_j."""
        evaluate = _lambdified_table(self._kind)
        return np.asarray(evaluate(self._space.kappa, self._space.tau), dtype=float)


@lru_cache(maxsize=None)
def _lambdified_table(kind: SpaceKind) -> Callable[[float, float], object]:
    entries = _table_entries(kind)
    nested = [[list(entries[(a, b)]) for b in FRAME_ORDER] for a in FRAME_ORDER]
    logger.debug("Lambdifying %s connection table", kind.value)
    return sympy.lambdify((KAPPA, TAU), nested, modules="numpy")


def connection_table(space: SpaceParams) -> ConnectionTable:
    """Return the nine covariant derivatives nabla_A B for A, B in the frame."""
    return ConnectionTable(space)

"""Generating-curve dynamics of rotational CMC surfaces.

A rotationally invariant surface is the preimage of a profile curve

    Berger:   gamma(s) = (cos x(s) e^{i y(s)}, sin x(s))
    Sl(2,R):  gamma(s) = (cosh x(s) e^{i y(s)}, sinh x(s))

parametrized by arc length with turning angle alpha(s). Writing
(c, s) = (cos x, sin x) or (cosh x, sinh x), b = 4 tau^2 / |kappa|,
A = c^2 + b s^2 and D^2 = cos^2(alpha) A + b sin^2(alpha), the profile
satisfies

    x' = cos alpha
    y' = sin alpha / c
    alpha' = (1/A) [2H D^3 / tau - (sin alpha / (s c)) K(x, alpha)]

where K depends on the space, and conserves the energy

    E = tau s c sin(alpha) / D - H s^2.

This module provides the right-hand side, the tilt C, the energy and its
inversion (sin alpha, cos alpha) on an energy shell, the reduced alpha'
polynomial form, the graph derivatives of x(y), event-driven integration
with reflection continuation across turning points and the Berger pole,
and the curve symmetries.

Example:
    >>> import math
    >>> from core.space_models import SpaceParams
    >>> from core.profile_dynamics import energy
    >>> space = SpaceParams(kind="berger", kappa=4.0, tau=0.4)
    >>> round(energy(math.asin(math.sqrt(0.5)), 0.5 * math.pi, 0.0, space), 12)
    0.5
"""

import logging
import math
from enum import Enum
from typing import Callable, NamedTuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.integrate import solve_ivp

from core.errors import DomainError, IntegrationError, SingularEvaluationError
from core.numerics_kernel import integrate_endpoint_singular
from core.space_models import SpaceKind, SpaceParams

logger: logging.Logger = logging.getLogger(__name__)

_HALF_PI: float = 0.5 * math.pi
_TWO_PI: float = 2.0 * math.pi
_STATIONARY_TOL: float = 1e-12
_BAND_SLACK: float = 1e-12
_POLE_CHAIN_TOL: float = 1e-12
_SNAP_WARN: float = 1e-8


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class FlowParams(BaseModel):
    """Mean curvature and energy of a profile.

    H >= 0 is the normalized convention; negative H is accepted here so
    that the curve symmetries (which flip the sign of H and E) can be
    expressed. Admissibility of the pair is checked by
    :func:`core.bounds_classify.admissible`.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    H: float = Field(allow_inf_nan=False, description="Mean curvature")
    E: float = Field(allow_inf_nan=False, description="Energy")


class ProfileState(BaseModel):
    """Point (s, x, y, alpha) of a profile; alpha is tracked without wrapping."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    s: float = Field(allow_inf_nan=False, description="Arc length")
    x: float = Field(allow_inf_nan=False, description="Latitude (Berger) or hyperbolic coordinate")
    y: float = Field(allow_inf_nan=False, description="Angular coordinate, radians")
    alpha: float = Field(allow_inf_nan=False, description="Turning angle, radians")


class EventKind(str, Enum):
    """Kinds of events recorded along an integrated profile."""

    TURNING_POINT = "TurningPoint"
    AXIS_TOUCH = "AxisTouch"
    REFLECTION = "Reflection"
    POLE_TOUCH = "PoleTouch"


class ProfileEvent(BaseModel):
    """Event at a sample index of a :class:`ProfileCurve`."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    index: int = Field(ge=0)
    kind: EventKind


class ProfileCurve(BaseModel):
    """Sampled profile with its events.

    Attributes:
        samples: States ordered by arc length.
        events: Events sorted by sample index.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    samples: tuple[ProfileState, ...]
    events: tuple[ProfileEvent, ...] = ()

    @model_validator(mode="after")
    def _check_events(self) -> "ProfileCurve":
        indices: list[int] = [event.index for event in self.events]
        if indices != sorted(indices):
            raise ValueError("events must be sorted by index")
        if indices and indices[-1] >= len(self.samples):
            raise ValueError("event index beyond the last sample")
        return self

    @classmethod
    def from_arrays(
        cls,
        s: np.ndarray,
        x: np.ndarray,
        y: np.ndarray,
        alpha: np.ndarray,
        events: list[ProfileEvent] | tuple[ProfileEvent, ...] = (),
    ) -> "ProfileCurve":
        samples: tuple[ProfileState, ...] = tuple(
            ProfileState(s=float(a), x=float(b), y=float(c), alpha=float(d))
            for a, b, c, d in zip(s, x, y, alpha)
        )
        return cls(samples=samples, events=tuple(sorted(events, key=lambda e: e.index)))

    def arrays(self) -> dict[str, np.ndarray]:
        """Column arrays keyed by ``s``, ``x``, ``y`` and ``alpha``."""
        return {
            name: np.array([getattr(state, name) for state in self.samples], dtype=float)
            for name in ("s", "x", "y", "alpha")
        }

    def event_states(self, kind: EventKind) -> list[ProfileState]:
        """States at the events of the given kind, in order."""
        return [self.samples[event.index] for event in self.events if event.kind is kind]


class IntegrationOptions(BaseModel):
    """Tolerances and guards of :func:`integrate_profile`."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    rtol: float = Field(default=1e-10, gt=0.0, description="ODE relative tolerance")
    atol: float = Field(default=1e-12, gt=0.0, description="ODE absolute tolerance")
    energy_tol: float = Field(
        default=1e-8,
        gt=0.0,
        description="Maximum energy drift relative to (1 + |E|) max(1, sinh^2 x)",
    )
    sample_step: float = Field(default=0.01, gt=0.0, description="Arc-length sample spacing")
    axis_guard: float = Field(default=1e-8, gt=0.0, description="Stop distance from the axis")
    pole_guard: float = Field(
        default=1e-3, gt=0.0, description="Distance from the pole where the ODE hands over to quadrature"
    )
    escape_x: float = Field(default=5.0, gt=0.0, description="Escape bound on |x| (open curves)")
    max_pieces: int = Field(default=10_000, ge=1, description="Maximum number of curve pieces")
    reflect_at_turning: bool = Field(
        default=True, description="Continue across turning points by reflection"
    )


# ---------------------------------------------------------------------------
# Pointwise geometry
# ---------------------------------------------------------------------------


def _chart(x: np.ndarray | float, kind: SpaceKind) -> tuple[np.ndarray, np.ndarray]:
    """(c, s) = (cos x, sin x) for Berger or (cosh x, sinh x) for Sl(2,R)."""
    if kind is SpaceKind.BERGER:
        return np.cos(x), np.sin(x)
    return np.cosh(x), np.sinh(x)


def _tilt_denominator(
    c: np.ndarray, s: np.ndarray, sa: np.ndarray, ca: np.ndarray, b: float
) -> np.ndarray:
    return np.sqrt(ca * ca * (c * c + b * s * s) + b * sa * sa)


def _as_output(value: np.ndarray) -> np.ndarray | float:
    return float(value) if np.ndim(value) == 0 else value


def tilt_C(x: np.ndarray | float, alpha: np.ndarray | float, space: SpaceParams) -> np.ndarray | float:
    """C = <N, xi> = c cos(alpha) / sqrt(cos^2(alpha) A + b sin^2(alpha)), in [-1, 1]."""
    c, s = _chart(np.asarray(x, dtype=float), space.kind)
    sa, ca = np.sin(alpha), np.cos(alpha)
    value: np.ndarray = c * ca / _tilt_denominator(c, s, sa, ca, space.bundle_ratio)
    return _as_output(np.clip(value, -1.0, 1.0))


def energy(
    x: np.ndarray | float, alpha: np.ndarray | float, H: float, space: SpaceParams
) -> np.ndarray | float:
    """First integral tau s c sin(alpha)/D - H s^2, smooth at cos alpha = 0."""
    c, s = _chart(np.asarray(x, dtype=float), space.kind)
    sa, ca = np.sin(alpha), np.cos(alpha)
    denom: np.ndarray = _tilt_denominator(c, s, sa, ca, space.bundle_ratio)
    return _as_output(space.tau * s * c * sa / denom - H * s * s)


def _alpha_prime_raw(
    x: np.ndarray | float, alpha: np.ndarray | float, H: float, space: SpaceParams
) -> np.ndarray:
    b: float = space.bundle_ratio
    c, s = _chart(np.asarray(x, dtype=float), space.kind)
    sa, ca = np.sin(alpha), np.cos(alpha)
    area: np.ndarray = c * c + b * s * s
    denom: np.ndarray = _tilt_denominator(c, s, sa, ca, b)
    ca2: np.ndarray = ca * ca
    if space.kind is SpaceKind.BERGER:
        kernel: np.ndarray = (1.0 - b) * c**4 * ca2 + b * (c * c - s * s)
    else:
        kernel = (1.0 + b) * c**4 * ca2 - b * (2.0 * ca2 - 1.0) * (c * c + s * s)
    return (2.0 * H * denom**3 / space.tau - sa / (s * c) * kernel) / area


def ode_rhs(state: ProfileState, H: float, space: SpaceParams) -> tuple[float, float, float]:
    """Right-hand side (x', y', alpha') of the profile system at a state.

    Raises:
        SingularEvaluationError: On the rotation axis (sin x = 0), where
            alpha' is singular.
    """
    space.require_positive_tau()
    c, s = _chart(state.x, space.kind)
    if s == 0.0:
        raise SingularEvaluationError(f"alpha' is singular on the axis (x = {state.x})")
    return (
        math.cos(state.alpha),
        math.sin(state.alpha) / float(c),
        float(_alpha_prime_raw(state.x, state.alpha, H, space)),
    )


def band_value(x: np.ndarray | float, flow: FlowParams, space: SpaceParams) -> np.ndarray:
    """s^2 c^2 - (4/|kappa|) u^2 with u = E + H s^2; non-negative exactly on the admissible band."""
    c, s = _chart(np.asarray(x, dtype=float), space.kind)
    u: np.ndarray = flow.E + flow.H * s * s
    return s * s * c * c - 4.0 / abs(space.kappa) * u * u


def alpha_from_energy(
    x: float, branch: int, flow: FlowParams, space: SpaceParams
) -> tuple[float, float]:
    """(sin alpha, cos alpha) on the energy shell at x; branch picks the sign of cos alpha.

    With u = E + H s^2 and Q = u^2 (c^2 + b s^2 - b) + tau^2 s^2 c^2:

        sin alpha = sign(s) u sqrt(c^2 + b s^2) / sqrt(Q)
        cos alpha = branch * tau sqrt(s^2 c^2 - (4/|kappa|) u^2) / sqrt(Q)

    Raises:
        DomainError: If x lies outside the admissible band.
        SingularEvaluationError: On the axis with u = 0, where alpha is undetermined.
    """
    space.require_positive_tau()
    if branch not in (1, -1):
        raise DomainError(f"branch must be +1 or -1, got {branch}")
    tau, b = space.tau, space.bundle_ratio
    c, s = (float(v) for v in _chart(x, space.kind))
    u: float = flow.E + flow.H * s * s
    p: float = float(band_value(x, flow, space))
    scale: float = max(s * s * c * c, 4.0 / abs(space.kappa) * u * u, 1e-300)
    if p < -_BAND_SLACK * scale:
        raise DomainError(f"x = {x} lies outside the admissible band for {flow}")
    p = max(p, 0.0)
    quad: float = u * u * (c * c + b * s * s - b) + tau * tau * s * s * c * c
    if quad <= 0.0:
        raise SingularEvaluationError(f"turning angle undetermined at x = {x}")
    root: float = math.sqrt(quad)
    sign_s: float = 1.0 if s >= 0.0 else -1.0
    sin_alpha: float = sign_s * u * math.sqrt(c * c + b * s * s) / root
    cos_alpha: float = branch * tau * math.sqrt(p) / root
    return sin_alpha, cos_alpha


def q_poly(t: np.ndarray | float, flow: FlowParams, space: SpaceParams) -> np.ndarray | float:
    """Cubic q(t) of the reduced Berger alpha' formula, t = sin^2 x.

    q(t) = (H/k^2)(k - 4tau^2) m t^3 + (1/k)(k - 4tau^2)(12 E H^2/k - E - 2H) t^2
           + (12 H E^2 (k - 4tau^2)/k^2 + 2E + H) t + 4 E^3 (k - 4tau^2)/k^2 - E

    with k = kappa and m = 4H^2 + kappa.
    """
    if space.kind is not SpaceKind.BERGER:
        raise DomainError("q_poly is defined for Berger spheres only")
    H, E = flow.H, flow.E
    k: float = space.kappa
    shift: float = k - 4.0 * space.tau**2
    m: float = 4.0 * H * H + k
    c3: float = H / k**2 * shift * m
    c2: float = shift / k * (12.0 * E * H * H / k - (E + 2.0 * H))
    c1: float = 12.0 * H * E * E * shift / k**2 + 2.0 * E + H
    c0: float = 4.0 * E**3 * shift / k**2 - E
    t = np.asarray(t, dtype=float)
    return _as_output(((c3 * t + c2) * t + c1) * t + c0)


def alpha_prime_reduced(x: float, flow: FlowParams, space: SpaceParams) -> float:
    """alpha' on the energy shell as a function of x alone.

    Berger uses alpha' = tau^2 tan(x) q(sin^2 x) / (cos x sqrt(A) R^{3/2}),
    R = tau^2 sin^2 x + (1 - b) u^2. Sl(2,R) evaluates the raw formula at the
    turning angle reconstructed from the energy (alpha' depends only on
    sin alpha and cos^2 alpha).

    Raises:
        SingularEvaluationError: On the axis.
        DomainError: Outside the admissible band.
    """
    space.require_positive_tau()
    c, s = (float(v) for v in _chart(x, space.kind))
    if s == 0.0:
        raise SingularEvaluationError(f"alpha' is singular on the axis (x = {x})")
    if space.kind is SpaceKind.SL2R:
        sin_alpha, cos_alpha = alpha_from_energy(x, 1, flow, space)
        return float(_alpha_prime_raw(x, math.atan2(sin_alpha, cos_alpha), flow.H, space))
    if float(band_value(x, flow, space)) < -_BAND_SLACK:
        raise DomainError(f"x = {x} lies outside the admissible band for {flow}")
    tau, b = space.tau, space.bundle_ratio
    t: float = s * s
    u: float = flow.E + flow.H * t
    area: float = c * c + b * t
    rad: float = tau * tau * t + (1.0 - b) * u * u
    return tau * tau * (s / c) * float(q_poly(t, flow, space)) / (c * math.sqrt(area) * rad**1.5)


def graph_slope(x: np.ndarray | float, alpha: np.ndarray | float, space: SpaceParams) -> np.ndarray | float:
    """dx/dy = c cot(alpha) of the profile viewed as a graph x(y)."""
    c, _ = _chart(np.asarray(x, dtype=float), space.kind)
    return _as_output(c * np.cos(alpha) / np.sin(alpha))


def graph_second_derivative(x: float, flow: FlowParams, space: SpaceParams) -> float:
    """d^2x/dy^2 of the graph x(y) on the energy shell.

    Independent of the cos(alpha) branch:
    d^2x/dy^2 = (c/sin alpha) [c_x cos^2(alpha)/sin(alpha) - c alpha'/sin^2(alpha)]
    with c_x = dc/dx. For Berger this equals
    -tau^2 s c/(A^2 u^3) [c^2 q(s^2) + A u (s^2 c^2 - (4/kappa) u^2)].

    Raises:
        SingularEvaluationError: Where sin(alpha) = 0 (u = 0) or on the axis.
    """
    sin_alpha, cos_alpha = alpha_from_energy(x, 1, flow, space)
    if sin_alpha == 0.0:
        raise SingularEvaluationError(f"graph x(y) has a vertical slope at x = {x}")
    c, s = (float(v) for v in _chart(x, space.kind))
    dc: float = -s if space.kind is SpaceKind.BERGER else s
    turn: float = alpha_prime_reduced(x, flow, space)
    inner: float = dc * cos_alpha**2 / sin_alpha - c * turn / sin_alpha**2
    return c / sin_alpha * inner


# ---------------------------------------------------------------------------
# Curve symmetries
# ---------------------------------------------------------------------------


def translate_curve(curve: ProfileCurve, dy: float) -> ProfileCurve:
    """Shift along the rotation: y -> y + dy. Preserves (H, E)."""
    cols: dict[str, np.ndarray] = curve.arrays()
    return ProfileCurve.from_arrays(cols["s"], cols["x"], cols["y"] + dy, cols["alpha"], curve.events)


def reflect_curve(curve: ProfileCurve, y0: float) -> ProfileCurve:
    """Mirror across the line y = y0: (y, alpha) -> (2 y0 - y, -alpha). Maps (H, E) to (-H, -E)."""
    cols: dict[str, np.ndarray] = curve.arrays()
    return ProfileCurve.from_arrays(
        cols["s"], cols["x"], 2.0 * y0 - cols["y"], -cols["alpha"], curve.events
    )


def reverse_curve(curve: ProfileCurve) -> ProfileCurve:
    """Reverse the parameter: s -> s0 + s1 - s, alpha -> alpha + pi. Maps (H, E) to (-H, -E)."""
    cols: dict[str, np.ndarray] = curve.arrays()
    last: int = len(curve.samples) - 1
    s: np.ndarray = cols["s"][0] + cols["s"][-1] - cols["s"][::-1]
    events: list[ProfileEvent] = [
        ProfileEvent(index=last - event.index, kind=event.kind) for event in curve.events
    ]
    return ProfileCurve.from_arrays(
        s, cols["x"][::-1], cols["y"][::-1], cols["alpha"][::-1] + math.pi, events
    )


# ---------------------------------------------------------------------------
# Integration
# ---------------------------------------------------------------------------


class _End(str, Enum):
    TURNING = "turning"
    POLE = "pole"
    AXIS = "axis"
    ESCAPE = "escape"
    SPAN = "span"


_CRITICAL: frozenset[_End] = frozenset({_End.TURNING, _End.POLE})


class _Piece(NamedTuple):
    s: np.ndarray
    x: np.ndarray
    y: np.ndarray
    alpha: np.ndarray
    start: _End | None
    end: _End
    turnings: tuple[float, ...] = ()


def _event(fn: Callable[[float, np.ndarray], float], terminal: bool, direction: float):
    fn.terminal = terminal  # type: ignore[attr-defined]
    fn.direction = direction  # type: ignore[attr-defined]
    return fn


def _is_turning(alpha: float) -> bool:
    return abs(math.cos(alpha)) < _STATIONARY_TOL


def _snap_turning(alpha: float) -> float:
    return _HALF_PI + round((alpha - _HALF_PI) / math.pi) * math.pi


def _pole_tail(x: float, flow: FlowParams, space: SpaceParams) -> tuple[float, float]:
    """(ds, dy) from latitude x up to the pole along an E = -H profile.

    With u = -H c^2 the factors of c cancel from the energy-shell formulas:

        dy/dx = -H sqrt(A) / (tau sqrt(s^2 - 4 H^2 c^2 / kappa))
        ds/dx = sqrt(H^2 c^4 (1 - b) + tau^2 s^2) / (tau sqrt(s^2 - 4 H^2 c^2 / kappa))

    Both are smooth up to x = pi/2, where the ODE itself is singular.
    """
    H, tau, b = flow.H, space.tau, space.bundle_ratio
    lead: float = 4.0 * H * H / space.kappa

    def chart(hi: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        c: np.ndarray = np.sin(hi)
        s: np.ndarray = np.cos(hi)
        return c, s, tau * np.sqrt(s * s - lead * c * c)

    def dy_dx(_x: np.ndarray, _lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        c, s, root = chart(hi)
        return -H * np.sqrt(c * c + b * s * s) / root

    def ds_dx(_x: np.ndarray, _lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        c, s, root = chart(hi)
        return np.sqrt(H * H * c**4 * (1.0 - b) + tau * tau * s * s) / root

    return (
        integrate_endpoint_singular(ds_dx, x, _HALF_PI),
        integrate_endpoint_singular(dy_dx, x, _HALF_PI),
    )


def _ode_piece(
    state: ProfileState,
    flow: FlowParams,
    space: SpaceParams,
    s_limit: float,
    opts: IntegrationOptions,
) -> _Piece:
    """Integrate from state until the first terminal event or s_limit."""
    H: float = flow.H
    kind: SpaceKind = space.kind
    start_kind: _End | None = _End.TURNING if _is_turning(state.alpha) else None

    def rhs(_s: float, v: np.ndarray) -> np.ndarray:
        c, _ = _chart(v[0], kind)
        return np.array(
            [math.cos(v[2]), math.sin(v[2]) / c, float(_alpha_prime_raw(v[0], v[2], H, space))]
        )

    turn0: float = float(_alpha_prime_raw(state.x, state.alpha, H, space))
    if start_kind is _End.TURNING:
        heading: float = math.copysign(1.0, -math.sin(state.alpha) * turn0)
        stationary: bool = abs(turn0) < _STATIONARY_TOL
    else:
        heading = math.copysign(1.0, math.cos(state.alpha))
        stationary = False

    events: list = [
        _event(lambda _s, v: abs(v[0]) - opts.axis_guard, True, -1.0),
        _event(lambda _s, v: opts.escape_x - abs(v[0]), True, -1.0),
    ]
    kinds: list[_End] = [_End.AXIS, _End.ESCAPE]
    if kind is SpaceKind.BERGER and abs(flow.E + H) <= _POLE_CHAIN_TOL:
        events.append(_event(lambda _s, v: (_HALF_PI - v[0]) - opts.pole_guard, True, -1.0))
        kinds.append(_End.POLE)
    if not stationary:
        if opts.reflect_at_turning:
            events.append(_event(lambda _s, v: math.cos(v[2]), True, -heading))
        else:
            events.append(_event(lambda _s, v: math.cos(v[2]), False, 0.0))
        kinds.append(_End.TURNING)

    y0: np.ndarray = np.array([state.x, state.y, state.alpha])
    sol = solve_ivp(
        rhs,
        (state.s, s_limit),
        y0,
        method="DOP853",
        rtol=opts.rtol,
        atol=opts.atol,
        events=events,
        dense_output=True,
    )
    if sol.status < 0:
        last = ProfileState(s=float(sol.t[-1]), x=float(sol.y[0, -1]), y=float(sol.y[1, -1]), alpha=float(sol.y[2, -1]))
        raise IntegrationError(f"profile integration failed: {sol.message}", state=last)

    s_end: float = float(sol.t[-1])
    end: _End = _End.SPAN
    turnings: tuple[float, ...] = ()
    for event_kind, times, fn in zip(kinds, sol.t_events, events):
        if fn.terminal and sol.status == 1 and len(times) and times[-1] == s_end:
            end = event_kind
        elif not fn.terminal:
            turnings = tuple(float(t) for t in times if t > state.s + opts.sample_step * 1e-6)

    n_grid: int = max(int(math.ceil((s_end - state.s) / opts.sample_step - 1e-9)), 1)
    grid: np.ndarray = state.s + opts.sample_step * np.arange(n_grid)
    values: np.ndarray = sol.sol(grid) if n_grid > 1 else y0[:, None]
    values = np.column_stack([values, sol.y[:, -1]])
    values[:, 0] = y0
    s_all: np.ndarray = np.append(grid, s_end)
    x_all, y_all, a_all = values[0].copy(), values[1].copy(), values[2].copy()

    if end is _End.TURNING:
        snapped: float = _snap_turning(a_all[-1])
        if abs(snapped - a_all[-1]) > _SNAP_WARN:
            logger.warning("Turning angle snapped by %.3e at s=%.6g", snapped - a_all[-1], s_end)
        a_all[-1] = snapped
    elif end is _End.POLE:
        ds, dy = _pole_tail(float(x_all[-1]), flow, space)
        s_all[-1] += ds
        y_all[-1] += dy
        x_all[-1] = _HALF_PI
        a_all[-1] = round(a_all[-1] / _TWO_PI) * _TWO_PI
    logger.debug("Piece [%.6g, %.6g] ended by %s", state.s, s_all[-1], end.value)
    return _Piece(s_all, x_all, y_all, a_all, start_kind, end, turnings)


def _reflect_piece(piece: _Piece) -> _Piece:
    """Continue a piece past its critical end by the reflection rule.

    The mirrored piece starts at the critical point itself. At a turning
    point that sample repeats the last one; at the pole y jumps by pi, so
    both pole samples belong to the curve.
    """
    s_b, y_b, a_b = piece.s[-1], piece.y[-1], piece.alpha[-1]
    s: np.ndarray = 2.0 * s_b - piece.s[::-1]
    x: np.ndarray = piece.x[::-1]
    if piece.end is _End.TURNING:
        y: np.ndarray = 2.0 * y_b - piece.y[::-1]
        alpha: np.ndarray = 2.0 * a_b - piece.alpha[::-1]
    else:
        y = 2.0 * y_b + math.pi - piece.y[::-1]
        alpha = 2.0 * a_b - math.pi - piece.alpha[::-1]
    start: _End = piece.end
    end: _End = piece.start if piece.start is not None else _End.SPAN
    return _Piece(s, x, y, alpha, start, end)


def _state(piece: _Piece, i: int = -1) -> ProfileState:
    return ProfileState(
        s=float(piece.s[i]), x=float(piece.x[i]), y=float(piece.y[i]), alpha=float(piece.alpha[i])
    )


class _CurveBuilder:
    """Accumulates pieces and events of a profile."""

    def __init__(self) -> None:
        self.columns: list[list[np.ndarray]] = [[], [], [], []]
        self.size: int = 0
        self.events: list[ProfileEvent] = []

    def add(self, piece: _Piece, s_max: float, skip_first: bool = False) -> bool:
        """Append the samples of a piece with s <= s_max; return False when truncated.

        skip_first drops the first sample, which repeats the last one
        already stored. The piece itself is left whole so that it can
        still be reflected at either end.
        """
        keep: np.ndarray = piece.s <= s_max
        if skip_first:
            keep[0] = False
        count: int = int(np.count_nonzero(keep))
        for column, values in zip(self.columns, (piece.s, piece.x, piece.y, piece.alpha)):
            column.append(values[keep])
        for s_turn in piece.turnings:
            index: int = self.size + int(np.searchsorted(piece.s[keep], s_turn))
            self.events.append(ProfileEvent(index=min(index, self.size + count - 1), kind=EventKind.TURNING_POINT))
        self.size += count
        return count == len(piece.s) - int(skip_first)

    def add_reflection(self, piece: _Piece, s_max: float) -> bool:
        """Append a mirrored piece and flag its first new sample as a reflection."""
        first: int = self.size
        at_turning: bool = piece.start is _End.TURNING
        complete: bool = self.add(piece, s_max, skip_first=at_turning)
        if not at_turning and self.size > first:
            self.mark(EventKind.REFLECTION, offset=first)
        return complete

    def mark(self, kind: EventKind, offset: int = -1) -> None:
        index: int = self.size + offset if offset < 0 else offset
        self.events.append(ProfileEvent(index=index, kind=kind))

    def build(self) -> ProfileCurve:
        s, x, y, alpha = (np.concatenate(column) for column in self.columns)
        return ProfileCurve.from_arrays(s, x, y, alpha, self.events)


def _mark_end(builder: _CurveBuilder, end: _End, reflected: bool) -> None:
    if end is _End.TURNING:
        builder.mark(EventKind.TURNING_POINT)
        if reflected:
            builder.mark(EventKind.REFLECTION)
    elif end is _End.POLE:
        builder.mark(EventKind.POLE_TOUCH)
    elif end is _End.AXIS:
        builder.mark(EventKind.AXIS_TOUCH)


def integrate_profile(
    start: ProfileState,
    flow: FlowParams,
    space: SpaceParams,
    span: float,
    opts: IntegrationOptions | None = None,
) -> ProfileCurve:
    """Integrate a profile over an arc-length span with reflection continuation.

    The ODE is integrated with an adaptive DOP853 pair until a terminal
    event: a turning point (cos alpha = 0), the axis, the escape bound or,
    on an E = -H Berger profile, the pole guard. The last stretch to the
    pole is integrated in x by quadrature. Once a piece runs between two
    critical points (turning points or the pole), the rest of the curve is
    generated by reflecting the last piece at its end:

        turning point B: (s, y, alpha) -> (2 s_B - s, 2 y_B - y, 2 alpha_B - alpha)
        pole B:          (s, y, alpha) -> (2 s_B - s, 2 y_B + pi - y, 2 alpha_B - pi - alpha)

    The axis and the escape bound end the curve.

    Args:
        start: Initial state; its energy must equal ``flow.E``.
        flow: Mean curvature and energy.
        space: Ambient space (tau > 0).
        span: Arc length to cover (> 0).
        opts: Integration options.

    Returns:
        The sampled curve with TurningPoint, Reflection, PoleTouch and
        AxisTouch events.

    Raises:
        DomainError: If the start is off the energy shell or span <= 0.
        IntegrationError: On solver failure or energy drift above tolerance.
    """
    opts = opts or IntegrationOptions()
    space.require_positive_tau()
    if not span > 0.0:
        raise DomainError(f"span must be positive, got {span}")
    start_energy: float = float(energy(start.x, start.alpha, flow.H, space))
    if abs(start_energy - flow.E) > opts.energy_tol * _drift_scale(start.x, flow, space):
        raise DomainError(
            f"start state has energy {start_energy:.12g}, expected {flow.E:.12g}"
        )

    s_max: float = start.s + span
    builder: _CurveBuilder = _CurveBuilder()
    state: ProfileState = start
    pieces: int = 0
    while True:
        pieces += 1
        if pieces > opts.max_pieces:
            raise IntegrationError(f"exceeded {opts.max_pieces} curve pieces", state=state)
        piece: _Piece = _ode_piece(state, flow, space, s_max, opts)
        if not builder.add(piece, s_max, skip_first=builder.size > 0):
            break
        if piece.end not in _CRITICAL:
            _mark_end(builder, piece.end, reflected=False)
            break
        critical_run: bool = piece.start in _CRITICAL
        if critical_run and (opts.reflect_at_turning or piece.end is _End.POLE):
            _mark_end(builder, piece.end, reflected=True)
            _reflection_run(builder, piece, s_max, opts)
            break
        _mark_end(builder, piece.end, reflected=False)
        if piece.end is _End.TURNING:
            state = _state(piece)
            continue
        mirrored: _Piece = _reflect_piece(piece._replace(start=None))
        if not builder.add_reflection(mirrored, s_max):
            break
        state = _state(mirrored)

    curve: ProfileCurve = builder.build()
    _check_drift(curve, flow, space, opts)
    return curve


def _reflection_run(
    builder: _CurveBuilder, piece: _Piece, s_max: float, opts: IntegrationOptions
) -> None:
    if not piece.s[-1] > piece.s[0]:
        raise IntegrationError("critical points coincide; nothing to reflect", state=_state(piece))
    count: int = 1
    while piece.s[-1] < s_max:
        count += 1
        if count > opts.max_pieces:
            raise IntegrationError(f"exceeded {opts.max_pieces} curve pieces", state=_state(piece))
        piece = _reflect_piece(piece)
        if not builder.add_reflection(piece, s_max):
            return
        _mark_end(builder, piece.end, reflected=True)


def _drift_scale(x: np.ndarray | float, flow: FlowParams, space: SpaceParams) -> np.ndarray | float:
    """(1 + |E|) max(1, s^2): both terms of the first integral grow like s^2 on Sl(2,R)."""
    _, s = _chart(np.asarray(x, dtype=float), space.kind)
    return _as_output((1.0 + abs(flow.E)) * np.maximum(1.0, s * s))


def _check_drift(
    curve: ProfileCurve, flow: FlowParams, space: SpaceParams, opts: IntegrationOptions
) -> None:
    cols: dict[str, np.ndarray] = curve.arrays()
    drift: np.ndarray = np.abs(np.asarray(energy(cols["x"], cols["alpha"], flow.H, space)) - flow.E)
    relative: np.ndarray = drift / np.asarray(_drift_scale(cols["x"], flow, space))
    worst: int = int(np.argmax(relative))
    if relative[worst] > opts.energy_tol:
        raise IntegrationError(
            f"energy drift {drift[worst]:.3e} exceeds tolerance {opts.energy_tol:.1e}",
            state=curve.samples[worst],
        )
    logger.debug("Profile of %d samples, max relative energy drift %.3e", len(curve.samples), relative[worst])

"""Numerical studies built on the classification and closed forms.

- Period curves T(0, E) of minimal unduloids and the search for E* with
  T(0, E*) = 2 pi, which yields an embedded minimal torus that is not a
  Clifford torus.
- The transition value tau0 of the bundle curvature above which no such
  E* exists. At the Clifford endpoint E -> sqrt(kappa)/4 the period tends
  to pi sqrt(1 + kappa/(4 tau^2)), so the transition is expected near
  tau = sqrt(kappa/12); the scan reports what it finds.
- The (tau, H) region of non-embedded CMC spheres (y0 <= -pi).
- Area against enclosed volume for CMC spheres and Clifford tori, their
  comparison on a common volume grid, and the tau at which the minimal
  sphere and the minimal Clifford torus have the same area.

Every scan is deterministic: grids are explicit and roots are refined with
Brent's method inside sign-changing grid cells.
"""

import logging
import math
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.bounds_classify import period_T
from core.closed_forms import (
    sphere_area,
    sphere_discriminant,
    sphere_profile_y,
    sphere_volume,
    torus_area_volume,
    total_volume,
)
from core.errors import BracketError, DomainError
from core.numerics_kernel import RootBracket, find_root
from core.profile_dynamics import FlowParams
from core.space_models import SpaceKind, SpaceParams

logger: logging.Logger = logging.getLogger(__name__)

DEFAULT_GRID_POINTS: int = 400
TWO_PI: float = 2.0 * math.pi


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------


class LocatedRoot(BaseModel):
    """Root refined inside a grid cell."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    value: float
    lo: float
    hi: float
    residual: float = Field(ge=0.0)


class ScanReport(BaseModel):
    """Values of a scalar function on a grid and its located roots.

    Attributes:
        parameter: Name of the scanned parameter.
        grid: Parameter values.
        values: Function values (NaN where undefined).
        roots: Roots refined in sign-changing cells.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    parameter: str
    grid: list[float]
    values: list[float]
    roots: list[LocatedRoot] = []


class PeriodCurve(BaseModel):
    """Sampled T(H, E) with its Clifford-endpoint limit (H = 0)."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    tau: float
    H: float
    E: list[float]
    T: list[float]
    clifford_limit: float | None = None


class Family(str, Enum):
    SPHERE = "Sphere"
    CLIFFORD_TORUS = "CliffordTorus"


class IsoperimetricPoint(BaseModel):
    """(area, enclosed volume) of one member of a family; H is signed by side."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    H: float
    area: float = Field(gt=0.0)
    volume: float = Field(gt=0.0)
    family: Family


class IsoperimetricComparison(BaseModel):
    """Lower envelopes of both families on a common volume grid.

    Attributes:
        volume: Common volume grid.
        sphere_area: Least sphere area per volume (NaN outside the family's range).
        torus_area: Least torus area per volume.
        torus_wins: Volume intervals where tori have strictly less area.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    volume: list[float]
    sphere_area: list[float]
    torus_area: list[float]
    torus_wins: list[tuple[float, float]]


class BoundaryPoint(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    tau: float
    H: float
    residual: float = Field(ge=0.0)


class EmbeddednessRegion(BaseModel):
    """Sign of y0 + pi over a (tau, H) grid and the located boundary.

    ``embedded[i][j]`` refers to (tau_grid[i], H_grid[j]); ``None`` marks
    grid points where no CMC sphere exists.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: SpaceKind
    kappa: float
    tau_grid: list[float]
    H_grid: list[float]
    embedded: list[list[bool | None]]
    boundary: list[BoundaryPoint]


# ---------------------------------------------------------------------------
# Generic scan
# ---------------------------------------------------------------------------


def _safe(fn: Callable[[float], float], value: float) -> float:
    try:
        return fn(value)
    except DomainError:
        return math.nan


def scan_roots(fn: Callable[[float], float], grid: Sequence[float], parameter: str) -> ScanReport:
    """Evaluate fn on a grid and refine a root in every sign-changing cell."""
    points: list[float] = [float(g) for g in grid]
    values: list[float] = [_safe(fn, g) for g in points]
    roots: list[LocatedRoot] = []
    for (lo, f_lo), (hi, f_hi) in zip(zip(points, values), zip(points[1:], values[1:])):
        if not (math.isfinite(f_lo) and math.isfinite(f_hi)) or f_lo * f_hi > 0.0:
            continue
        if f_lo == 0.0 and roots and roots[-1].value == lo:
            continue
        root: float = find_root(fn, RootBracket(lo=lo, hi=hi, f_lo=f_lo, f_hi=f_hi))
        roots.append(LocatedRoot(value=root, lo=lo, hi=hi, residual=abs(fn(root))))
        logger.info("%s root %.12g in [%.6g, %.6g]", parameter, root, lo, hi)
    return ScanReport(parameter=parameter, grid=points, values=values, roots=roots)


# ---------------------------------------------------------------------------
# Lawson scan and tau0
# ---------------------------------------------------------------------------


def clifford_period_limit(space: SpaceParams) -> float:
    """Limit pi sqrt(1 + kappa/(4 tau^2)) of T(0, E) as E approaches sqrt(kappa)/4."""
    return math.pi * math.sqrt(1.0 + space.kappa / (4.0 * space.tau**2))


def _minimal_energy_grid(space: SpaceParams, points: int) -> np.ndarray:
    # open interval (0, sqrt(kappa)/4): both ends are degenerate
    return np.linspace(0.0, 0.25 * math.sqrt(space.kappa), points + 2)[1:-1]


def _require_berger(space: SpaceParams) -> None:
    if space.kind is not SpaceKind.BERGER:
        raise DomainError("this study is defined for Berger spheres only")
    space.require_positive_tau()


def period_curve(
    space: SpaceParams, E_grid: Sequence[float] | None = None, H: float = 0.0
) -> PeriodCurve:
    """T(H, E) sampled on an energy grid (default: 400 interior minimal energies)."""
    _require_berger(space)
    grid: np.ndarray = (
        _minimal_energy_grid(space, DEFAULT_GRID_POINTS) if E_grid is None else np.asarray(E_grid)
    )
    periods: list[float] = [_safe(lambda E: period_T(FlowParams(H=H, E=E), space), E) for E in grid]
    return PeriodCurve(
        tau=space.tau,
        H=H,
        E=[float(E) for E in grid],
        T=periods,
        clifford_limit=clifford_period_limit(space) if H == 0.0 else None,
    )


def lawson_report(space: SpaceParams, E_grid: Sequence[float] | None = None) -> ScanReport:
    """Scan of T(0, E) - 2 pi over minimal energies with refined roots."""
    _require_berger(space)
    grid: np.ndarray = (
        _minimal_energy_grid(space, DEFAULT_GRID_POINTS) if E_grid is None else np.asarray(E_grid)
    )
    grid = grid[(grid > 0.0) & (grid < 0.25 * math.sqrt(space.kappa))]
    return scan_roots(lambda E: period_T(FlowParams(H=0.0, E=E), space) - TWO_PI, grid, "E")


def lawson_scan(space: SpaceParams, E_grid: Sequence[float] | None = None) -> float | None:
    """Energy E* with T(0, E*) = 2 pi, or ``None`` when the grid shows no crossing.

    Example:
        >>> space = SpaceParams(kind="berger", kappa=4.0, tau=0.4)
        >>> lawson_scan(space, E_grid=[0.05, 0.25, 0.45, 0.499]) is not None
        True
    """
    report: ScanReport = lawson_report(space, E_grid)
    if not report.roots:
        logger.info("No T = 2pi crossing at tau=%.6g", space.tau)
        return None
    return report.roots[0].value


def tau0_estimate(
    kappa: float,
    tau_bracket: tuple[float, float] = (0.4, 0.9),
    width: float = 1e-3,
    E_points: int = DEFAULT_GRID_POINTS,
) -> float:
    """Bisection in tau on the predicate "lawson_scan finds E*".

    Raises:
        BracketError: If the predicate does not change across the bracket.
    """
    lo, hi = tau_bracket

    def found(tau: float) -> bool:
        space = SpaceParams(kind=SpaceKind.BERGER, kappa=kappa, tau=tau)
        return lawson_scan(space, _minimal_energy_grid(space, E_points)) is not None

    at_lo, at_hi = found(lo), found(hi)
    if at_lo == at_hi:
        raise BracketError(f"Lawson predicate is {at_lo} at both tau={lo} and tau={hi}")
    while hi - lo > width:
        mid: float = 0.5 * (lo + hi)
        if found(mid) == at_lo:
            lo = mid
        else:
            hi = mid
        logger.info("tau0 bracket [%.6f, %.6f]", lo, hi)
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Embeddedness region
# ---------------------------------------------------------------------------


def embeddedness_region(
    kappa: float,
    tau_grid: Sequence[float],
    H_grid: Sequence[float],
    kind: SpaceKind | None = None,
) -> EmbeddednessRegion:
    """Sign of y0(tau, H) + pi over a grid, with the boundary refined along H."""
    kind = kind or (SpaceKind.BERGER if kappa > 0.0 else SpaceKind.SL2R)
    embedded: list[list[bool | None]] = []
    boundary: list[BoundaryPoint] = []
    for tau in tau_grid:
        space = SpaceParams(kind=kind, kappa=kappa, tau=float(tau))

        def margin(H: float, space: SpaceParams = space) -> float:
            if sphere_discriminant(H, space) <= 0.0:
                raise DomainError("no CMC sphere")
            return float(sphere_profile_y(0.0, H, space)) + math.pi

        report: ScanReport = scan_roots(margin, H_grid, "H")
        embedded.append([None if math.isnan(v) else v > 0.0 for v in report.values])
        boundary.extend(
            BoundaryPoint(tau=float(tau), H=root.value, residual=root.residual) for root in report.roots
        )
    return EmbeddednessRegion(
        kind=kind,
        kappa=kappa,
        tau_grid=[float(t) for t in tau_grid],
        H_grid=[float(H) for H in H_grid],
        embedded=embedded,
        boundary=boundary,
    )


# ---------------------------------------------------------------------------
# Isoperimetric comparison
# ---------------------------------------------------------------------------


def isoperimetric_profile(space: SpaceParams, H_grid: Sequence[float]) -> list[IsoperimetricPoint]:
    """(area, volume) of CMC spheres and Clifford tori for H in the grid and its mirror -H.

    The H >= 0 member encloses vol(Omega_H); its mirror encloses the
    complement total - vol(Omega_H). Tori use the smaller enclosed volume
    and its complement likewise.
    """
    _require_berger(space)
    total: float = total_volume(space)
    points: list[IsoperimetricPoint] = []
    for H in sorted({abs(float(h)) for h in H_grid}):
        area_s: float = sphere_area(H, space)
        vol_s: float = sphere_volume(H, space)
        area_t, vol_t = torus_area_volume(H, space)
        points.append(IsoperimetricPoint(H=H, area=area_s, volume=vol_s, family=Family.SPHERE))
        points.append(IsoperimetricPoint(H=H, area=area_t, volume=vol_t, family=Family.CLIFFORD_TORUS))
        if H > 0.0:
            points.append(
                IsoperimetricPoint(H=-H, area=area_s, volume=total - vol_s, family=Family.SPHERE)
            )
            points.append(
                IsoperimetricPoint(
                    H=-H, area=area_t, volume=total - vol_t, family=Family.CLIFFORD_TORUS
                )
            )
    return points


def _lower_envelope(volumes: np.ndarray, areas: np.ndarray, grid: np.ndarray) -> np.ndarray:
    """Pointwise minimum over the piecewise-linear curve through (volume, area) samples."""
    envelope: np.ndarray = np.full_like(grid, np.inf)
    for v0, v1, a0, a1 in zip(volumes[:-1], volumes[1:], areas[:-1], areas[1:]):
        lo, hi = min(v0, v1), max(v0, v1)
        inside: np.ndarray = (grid >= lo) & (grid <= hi)
        if not np.any(inside):
            continue
        if v1 == v0:
            candidate: np.ndarray = np.full(np.count_nonzero(inside), min(a0, a1))
        else:
            candidate = a0 + (grid[inside] - v0) * (a1 - a0) / (v1 - v0)
        envelope[inside] = np.minimum(envelope[inside], candidate)
    return np.where(np.isfinite(envelope), envelope, np.nan)


def _runs(mask: np.ndarray, grid: np.ndarray) -> list[tuple[float, float]]:
    runs: list[tuple[float, float]] = []
    start: int | None = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((float(grid[start]), float(grid[i - 1])))
            start = None
    if start is not None:
        runs.append((float(grid[start]), float(grid[-1])))
    return runs


def isoperimetric_comparison(
    points: Sequence[IsoperimetricPoint], n_volumes: int = DEFAULT_GRID_POINTS, rel_gap: float = 1e-9
) -> IsoperimetricComparison:
    """Compare least areas of both families at matched volumes.

    Each family is ordered along H (from -H to +H) and its lower envelope
    is evaluated on a common grid over the shared volume range.
    """
    curves: dict[Family, tuple[np.ndarray, np.ndarray]] = {}
    for family in Family:
        members: list[IsoperimetricPoint] = sorted(
            (p for p in points if p.family is family), key=lambda p: -p.H
        )
        if len(members) < 2:
            raise DomainError(f"need at least two {family.value} points")
        curves[family] = (
            np.array([p.volume for p in members]),
            np.array([p.area for p in members]),
        )
    lo: float = max(float(np.min(v)) for v, _ in curves.values())
    hi: float = min(float(np.max(v)) for v, _ in curves.values())
    grid: np.ndarray = np.linspace(lo, hi, n_volumes)
    sphere: np.ndarray = _lower_envelope(*curves[Family.SPHERE], grid)
    torus: np.ndarray = _lower_envelope(*curves[Family.CLIFFORD_TORUS], grid)
    wins: np.ndarray = np.nan_to_num(torus, nan=np.inf) < np.nan_to_num(sphere, nan=-np.inf) * (1.0 - rel_gap)
    return IsoperimetricComparison(
        volume=grid.tolist(),
        sphere_area=sphere.tolist(),
        torus_area=torus.tolist(),
        torus_wins=_runs(wins, grid),
    )


def minimal_area_gap(tau: float, kappa: float) -> float:
    """Area of the minimal sphere minus area of the minimal Clifford torus."""
    space = SpaceParams(kind=SpaceKind.BERGER, kappa=kappa, tau=tau)
    return sphere_area(0.0, space) - torus_area_volume(0.0, space)[0]


def isoperimetric_crossing(kappa: float, tau_bracket: tuple[float, float] | None = None) -> float:
    """tau at which the minimal sphere and the minimal Clifford torus have equal area.

    Both enclose half the total volume, so only the areas are compared.
    The crossing scales with sqrt(kappa); the default bracket is
    (0.05, 0.45) sqrt(kappa).
    """
    if not kappa > 0.0:
        raise DomainError(f"isoperimetric crossing needs kappa > 0, got {kappa}")
    lo, hi = tau_bracket or (0.05 * math.sqrt(kappa), 0.45 * math.sqrt(kappa))
    bracket: RootBracket = RootBracket.from_function(lambda tau: minimal_area_gap(tau, kappa), lo, hi)
    tau_star: float = find_root(lambda tau: minimal_area_gap(tau, kappa), bracket, tol=1e-12)
    logger.info("Isoperimetric crossing at tau=%.8f (kappa=%g)", tau_star, kappa)
    return tau_star

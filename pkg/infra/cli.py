"""Command-line surface of the CMC toolkit.

Every command builds a validated :class:`RunConfig` before computing
anything, writes its data files (CSV, JSON or OBJ) and prints a
schema-versioned JSON summary to stdout. Progress and diagnostics go to
stderr through ``logging``.

Exit codes:
    0  success
    2  invalid parameters (validation or domain errors)
    3  numerical failure (integration, quadrature, singular evaluation)
    4  geometric precondition failure (stereographic pole on the surface)

Environment (optional, also read from a ``.env`` file):
    CMC_LOG_LEVEL   logging level, default INFO
    CMC_OUTPUT_DIR  directory for data files when ``--out`` is omitted,
                    default ``output``

Usage:
    python -m infra.cli classify --space berger --kappa 4 --tau 0.4 --H 0 --E 0.5
    python -m infra.cli profile --H 0.5 --E 0.1 --span 20 --out unduloid.csv
    python -m infra.cli mesh --surface sphere --tau 0.1 --H 0.5 --out sphere.obj
    python -m infra.cli figures --grid 200 --out figures/
"""

import argparse
import logging
import math
import os
import sys
from enum import Enum
from pathlib import Path
from typing import Any, Callable

import numpy as np
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from core.bounds_classify import (
    DEFAULT_QMAX,
    DEFAULT_TOL,
    CliffordTorus,
    GreatSphere,
    Nodoid,
    OpenSphereGraph,
    PoleChain,
    RationalWitness,
    Sphere,
    SurfaceClass,
    TurningBand,
    Unduloid,
    admissible_energy_range,
    classify,
    compactness_test,
    default_start,
    period_T,
    pole_chain_advance,
    turning_points,
)
from core.closed_forms import (
    sphere_area,
    sphere_discriminant,
    sphere_profile,
    sphere_profile_y,
    sphere_volume,
    sphere_volume_complement,
    total_volume,
)
from core.errors import CMCError, DomainError, GeometricPreconditionError
from core.investigations import (
    EmbeddednessRegion,
    IsoperimetricComparison,
    embeddedness_region,
    isoperimetric_comparison,
    isoperimetric_profile,
    lawson_report,
    period_curve,
    tau0_estimate,
)
from core.profile_dynamics import EventKind, FlowParams, ProfileCurve, integrate_profile
from core.space_models import SpaceKind, SpaceParams
from core.verification_oracles import numeric_volume_coarea
from infra.mesh_export import Mesh, profile_mesh, sphere_mesh, torus_mesh
from infra.serialization import (
    SCHEMA_VERSION,
    profile_columns,
    space_metadata,
    write_csv,
    write_json,
    write_obj,
)

logger: logging.Logger = logging.getLogger(__name__)

EXIT_OK: int = 0
EXIT_INVALID: int = 2
EXIT_NUMERICAL: int = 3
EXIT_GEOMETRY: int = 4

DEFAULT_OUTPUT_DIR: str = "output"
DEFAULT_SPAN: float = 20.0
NO_SPHERE_NOTE: str = "no CMC sphere for 4H^2 + kappa <= 0"

FIGURE_PERIOD_TAUS: tuple[float, ...] = (0.4, 0.57, 0.8)
FIGURE_ISOPERIMETRIC_TAUS: tuple[float, ...] = (0.5, 0.407, 0.374, 0.244)
FIGURE_PROFILES: dict[str, tuple[SpaceKind, float, float, float, float]] = {
    # name: (kind, kappa, tau, H, E)
    "profile_unduloid": (SpaceKind.BERGER, 4.0, 0.4, 0.5, 0.1),
    "profile_nodoid": (SpaceKind.BERGER, 4.0, 0.4, 0.5, -0.2),
    "profile_pole_chain": (SpaceKind.BERGER, 4.0, 0.4, 0.5, -0.5),
    "profile_open_sphere": (SpaceKind.SL2R, -4.0, 1.0, 0.9, 0.0),
    "profile_open_unduloid": (SpaceKind.SL2R, -4.0, 1.0, 0.9, 0.1),
    "profile_open_nodoid": (SpaceKind.SL2R, -4.0, 1.0, 0.9, -0.1),
}


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------


class Command(str, Enum):
    CLASSIFY = "classify"
    PROFILE = "profile"
    PERIOD = "period"
    SPHERE = "sphere"
    VOLUME = "volume"
    LAWSON_SCAN = "lawson-scan"
    TAU0 = "tau0"
    EMBEDDEDNESS = "embeddedness"
    ISOPERIMETRIC = "isoperimetric"
    MESH = "mesh"
    FIGURES = "figures"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    OBJ = "obj"


class MeshSurface(str, Enum):
    SPHERE = "sphere"
    TORUS = "torus"
    PROFILE = "profile"


_FORMATS: dict[Command, tuple[OutputFormat, ...]] = {
    Command.CLASSIFY: (OutputFormat.JSON,),
    Command.PROFILE: (OutputFormat.CSV, OutputFormat.JSON),
    Command.PERIOD: (OutputFormat.JSON, OutputFormat.CSV),
    Command.SPHERE: (OutputFormat.JSON, OutputFormat.CSV),
    Command.VOLUME: (OutputFormat.JSON,),
    Command.LAWSON_SCAN: (OutputFormat.JSON, OutputFormat.CSV),
    Command.TAU0: (OutputFormat.JSON,),
    Command.EMBEDDEDNESS: (OutputFormat.CSV, OutputFormat.JSON),
    Command.ISOPERIMETRIC: (OutputFormat.CSV, OutputFormat.JSON),
    Command.MESH: (OutputFormat.OBJ,),
    Command.FIGURES: (OutputFormat.CSV,),
}
"""Allowed formats per command; the first one is the default."""

_BERGER_ONLY: frozenset[Command] = frozenset(
    {Command.VOLUME, Command.LAWSON_SCAN, Command.TAU0, Command.ISOPERIMETRIC}
)


class RunConfig(BaseModel):
    """Validated parameters of one CLI invocation.

    Attributes:
        command: Command to run.
        space: Ambient space.
        H: Mean curvature (required by most commands).
        E: Energy; omitted for grid variants of classify and period.
        grid: Points per grid axis.
        tol: Compactness tolerance.
        qmax: Largest denominator of the compactness witness.
        span: Arc length of integrated profiles.
        surface: Surface exported by ``mesh``.
        sign: Clifford torus branch (+1 or -1).
        mesh_u: Mesh samples along the profile.
        mesh_v: Mesh samples around the axis.
        out: Output file (directory for ``figures``); ``None`` uses the
            default name under the output directory.
        output_dir: Directory used when ``out`` is omitted.
        format: Output format; ``None`` uses the command's default.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: Command
    space: SpaceParams
    H: float | None = Field(default=None, description="Mean curvature")
    E: float | None = Field(default=None, description="Energy")
    grid: int = Field(default=400, ge=2, description="Points per grid axis")
    tol: float = Field(default=DEFAULT_TOL, gt=0.0, description="Compactness tolerance")
    qmax: int = Field(default=DEFAULT_QMAX, ge=1, description="Largest witness denominator")
    span: float = Field(default=DEFAULT_SPAN, gt=0.0, description="Profile arc length")
    surface: MeshSurface = Field(default=MeshSurface.SPHERE, description="Surface for mesh export")
    sign: int = Field(default=1, description="Clifford torus branch")
    mesh_u: int = Field(default=121, ge=3, description="Mesh samples along the profile")
    mesh_v: int = Field(default=64, ge=3, description="Mesh samples around the axis")
    out: Path | None = Field(default=None, description="Output path")
    output_dir: Path = Field(default=Path(DEFAULT_OUTPUT_DIR), description="Default output directory")
    format: OutputFormat | None = Field(default=None, description="Output format")

    @model_validator(mode="after")
    def _check_combination(self) -> "RunConfig":
        allowed: tuple[OutputFormat, ...] = _FORMATS[self.command]
        if self.format is not None and self.format not in allowed:
            names: str = ", ".join(f.value for f in allowed)
            raise ValueError(f"{self.command.value} writes {names}; --format {self.format.value} is not supported")
        if self.command in _BERGER_ONLY and self.space.kind is not SpaceKind.BERGER:
            raise ValueError(f"{self.command.value} is defined for the Berger sphere only; use --space berger")
        needs_H: bool = self.command in (
            Command.CLASSIFY,
            Command.PROFILE,
            Command.SPHERE,
            Command.VOLUME,
            Command.MESH,
        )
        if needs_H and self.H is None:
            raise ValueError(f"{self.command.value} needs --H")
        needs_E: bool = self.command is Command.PROFILE or (
            self.command is Command.MESH and self.surface is MeshSurface.PROFILE
        )
        if needs_E and self.E is None:
            raise ValueError(f"{self.command.value} needs --E")
        if self.sign not in (1, -1):
            raise ValueError(f"--sign must be +1 or -1, got {self.sign}")
        return self

    @property
    def output_format(self) -> OutputFormat:
        return self.format or _FORMATS[self.command][0]

    def flow(self) -> FlowParams:
        if self.H is None or self.E is None:
            raise DomainError(f"{self.command.value} needs both --H and --E")
        return FlowParams(H=self.H, E=self.E)

    def output_path(self, default_name: str) -> Path:
        return self.out if self.out is not None else self.output_dir / default_name

    def metadata(self) -> dict[str, Any]:
        return {**space_metadata(self.space), "tol": self.tol, "qmax": self.qmax}


class CommandResult(BaseModel):
    """Summary printed to stdout after every command."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    schema_version: int = SCHEMA_VERSION
    command: Command
    space: SpaceParams
    outputs: list[str] = []
    report: dict[str, Any] = {}


class ClassifyReport(BaseModel):
    """Classification of one (H, E) pair."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    H: float
    E: float
    surface: SurfaceClass
    band: TurningBand | None = None
    period: float | None = None
    compactness: RationalWitness | None = None
    embedded: bool | None = None
    note: str | None = None


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _result(cfg: RunConfig, outputs: list[Path] | None = None, **report: Any) -> CommandResult:
    return CommandResult(
        command=cfg.command,
        space=cfg.space,
        outputs=[str(p) for p in outputs or []],
        report=report,
    )


def _energy_grid(H: float, space: SpaceParams, points: int) -> np.ndarray:
    """Admissible energies; half-open Sl(2,R) ranges are cut to a unit window."""
    energies = admissible_energy_range(H, space)
    upper: float = energies.upper if energies.upper is not None else 1.0
    lower: float = energies.lower if energies.lower is not None else upper - 1.0
    grid: np.ndarray = np.linspace(lower, upper, points)
    return grid[[energies.contains(float(E)) for E in grid]]


def _tau_grid(kappa: float, lo: float, hi: float, points: int) -> list[float]:
    """tau grid without the space-form value 4 tau^2 = kappa."""
    return [float(t) for t in np.linspace(lo, hi, points) if kappa - 4.0 * t * t != 0.0]


def _sphere_H_grid(space: SpaceParams, points: int, width: float = 2.0) -> np.ndarray:
    if space.kind is SpaceKind.BERGER:
        return np.linspace(0.0, width, points)
    start: float = 0.5 * math.sqrt(-space.kappa) * (1.0 + 1e-3)
    return np.linspace(start, start + width, points)


def _embedded(surface: SurfaceClass) -> bool | None:
    if isinstance(surface, (CliffordTorus, GreatSphere, OpenSphereGraph)):
        return True
    if isinstance(surface, (Sphere, Unduloid)):
        return surface.embedded
    if isinstance(surface, PoleChain):
        return surface.embedded_torus
    if isinstance(surface, Nodoid):
        return False
    return None


def classify_report(flow: FlowParams, space: SpaceParams, tol: float, qmax: int) -> ClassifyReport:
    """Classification with its band, period and compactness witness."""
    surface: SurfaceClass = classify(flow, space, tol, qmax)
    try:
        band: TurningBand | None = turning_points(flow, space)
    except DomainError:
        band = None
    period: float | None = None
    compact: RationalWitness | None = None
    if isinstance(surface, (Unduloid, Nodoid)):
        period, compact = surface.T, surface.compact
    elif isinstance(surface, PoleChain):
        period, compact = pole_chain_advance(flow, space), surface.compact
    note: str | None = None
    if space.kind is SpaceKind.SL2R and sphere_discriminant(flow.H, space) <= 0.0:
        note = NO_SPHERE_NOTE
    return ClassifyReport(
        H=flow.H,
        E=flow.E,
        surface=surface,
        band=band,
        period=period,
        compactness=compact,
        embedded=_embedded(surface),
        note=note,
    )


def integrate_default(flow: FlowParams, space: SpaceParams, span: float) -> ProfileCurve:
    """Profile from the classification's initial condition."""
    return integrate_profile(default_start(flow, space), flow, space, span)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_classify(cfg: RunConfig) -> CommandResult:
    """Classify one (H, E) pair, or every admissible E on a grid when --E is omitted."""
    assert cfg.H is not None
    if cfg.E is not None:
        report: ClassifyReport = classify_report(cfg.flow(), cfg.space, cfg.tol, cfg.qmax)
        return _result(cfg, **report.model_dump(mode="json"))
    reports: list[dict[str, Any]] = []
    for E in _energy_grid(cfg.H, cfg.space, cfg.grid):
        item: ClassifyReport = classify_report(FlowParams(H=cfg.H, E=float(E)), cfg.space, cfg.tol, cfg.qmax)
        reports.append(item.model_dump(mode="json"))
    logger.info("Classified %d energies at H=%g", len(reports), cfg.H)
    return _result(cfg, H=cfg.H, classes=reports)


def cmd_profile(cfg: RunConfig) -> CommandResult:
    """Integrate the profile of (H, E) and write its sample stream."""
    flow: FlowParams = cfg.flow()
    curve: ProfileCurve = integrate_default(flow, cfg.space, cfg.span)
    columns: dict[str, np.ndarray] = profile_columns(curve, flow, cfg.space)
    drift: float = float(np.max(np.abs(columns["E_drift"])))
    if cfg.output_format is OutputFormat.JSON:
        path: Path = write_json(cfg.output_path("profile.json"), curve)
    else:
        path = write_csv(
            cfg.output_path("profile.csv"),
            columns,
            {**cfg.metadata(), "H": flow.H, "E": flow.E, "span": cfg.span},
        )
    return _result(
        cfg,
        [path],
        samples=len(curve.samples),
        events={kind.value: len(curve.event_states(kind)) for kind in EventKind},
        max_energy_drift=drift,
    )


def cmd_period(cfg: RunConfig) -> CommandResult:
    """T(H, E) with its compactness witness, or the T(H, E) curve over E."""
    H: float = cfg.H if cfg.H is not None else 0.0
    if cfg.E is not None:
        flow = FlowParams(H=H, E=cfg.E)
        T: float = period_T(flow, cfg.space)
        witness: RationalWitness | None = compactness_test(T, cfg.tol, cfg.qmax)
        return _result(cfg, H=H, E=cfg.E, T=T, compact=witness.model_dump() if witness else None)
    if H == 0.0 and cfg.space.kind is SpaceKind.BERGER:
        curve = period_curve(cfg.space, np.linspace(0.0, 0.25 * math.sqrt(cfg.space.kappa), cfg.grid + 2)[1:-1])
        E_values, T_values = curve.E, curve.T
        limit: float | None = curve.clifford_limit
    else:
        E_values = [float(E) for E in _energy_grid(H, cfg.space, cfg.grid)]
        T_values = []
        for E in E_values:
            try:
                T_values.append(period_T(FlowParams(H=H, E=E), cfg.space))
            except DomainError:
                T_values.append(float("nan"))
        limit = None
    if cfg.output_format is OutputFormat.CSV:
        path: Path = write_csv(cfg.output_path("period.csv"), {"E": E_values, "T": T_values}, {**cfg.metadata(), "H": H})
    else:
        path = write_json(
            cfg.output_path("period.json"), {"H": H, "E": E_values, "T": T_values, "clifford_limit": limit}
        )
    return _result(cfg, [path], H=H, points=len(E_values), clifford_limit=limit)


def cmd_sphere(cfg: RunConfig) -> CommandResult:
    """Closed-form profile, embeddedness and area of the CMC sphere."""
    assert cfg.H is not None
    profile = sphere_profile(cfg.H, cfg.space)
    area: float = sphere_area(cfg.H, cfg.space)
    volume: float | None = sphere_volume(cfg.H, cfg.space) if cfg.space.kind is SpaceKind.BERGER else None
    outputs: list[Path] = []
    if cfg.output_format is OutputFormat.CSV:
        lo: float = 0.0 if cfg.space.kind is SpaceKind.BERGER else -profile.a
        x: np.ndarray = np.linspace(lo, profile.a, cfg.grid)
        y: np.ndarray = np.asarray(sphere_profile_y(x, cfg.H, cfg.space))
        outputs.append(write_csv(cfg.output_path("sphere.csv"), {"x": x, "y": y}, {**cfg.metadata(), "H": cfg.H}))
    return _result(
        cfg,
        outputs,
        H=cfg.H,
        a=profile.a,
        y0=profile.y0,
        embedded=profile.embedded,
        area=area,
        volume=volume,
    )


def cmd_volume(cfg: RunConfig) -> CommandResult:
    """Enclosed volume of the CMC sphere, its complement and a co-area check."""
    assert cfg.H is not None
    return _result(
        cfg,
        H=cfg.H,
        volume=sphere_volume(cfg.H, cfg.space),
        complement=sphere_volume_complement(cfg.H, cfg.space),
        total=total_volume(cfg.space),
        coarea=numeric_volume_coarea(cfg.H, cfg.space),
    )


def cmd_lawson_scan(cfg: RunConfig) -> CommandResult:
    """Scan T(0, E) - 2 pi over minimal energies and refine its roots."""
    grid: np.ndarray = np.linspace(0.0, 0.25 * math.sqrt(cfg.space.kappa), cfg.grid + 2)[1:-1]
    report = lawson_report(cfg.space, grid)
    E_star: float | None = report.roots[0].value if report.roots else None
    outputs: list[Path] = []
    if cfg.output_format is OutputFormat.CSV:
        outputs.append(
            write_csv(cfg.output_path("lawson.csv"), {"E": report.grid, "T_minus_2pi": report.values}, cfg.metadata())
        )
    elif cfg.out is not None:
        outputs.append(write_json(cfg.out, report))
    return _result(cfg, outputs, E_star=E_star, roots=[r.model_dump() for r in report.roots])


def cmd_tau0(cfg: RunConfig) -> CommandResult:
    """Bisect tau for the disappearance of the T = 2 pi crossing."""
    tau0: float = tau0_estimate(cfg.space.kappa, E_points=cfg.grid)
    return _result(cfg, kappa=cfg.space.kappa, tau0=tau0)


def _embeddedness(kind: SpaceKind, kappa: float, points: int) -> EmbeddednessRegion:
    tau_grid: list[float] = _tau_grid(kappa, 0.02, 1.2, points)
    first_space: SpaceParams = SpaceParams(kind=kind, kappa=kappa, tau=tau_grid[0])
    H_grid: np.ndarray = _sphere_H_grid(first_space, points)
    return embeddedness_region(kappa, tau_grid, H_grid.tolist(), kind)


def _region_columns(region: EmbeddednessRegion) -> dict[str, np.ndarray]:
    tau, H = np.meshgrid(region.tau_grid, region.H_grid, indexing="ij")
    code: np.ndarray = np.array(
        [[np.nan if e is None else float(e) for e in row] for row in region.embedded], dtype=float
    )
    return {"tau": tau.ravel(), "H": H.ravel(), "embedded": code.ravel()}


def cmd_embeddedness(cfg: RunConfig) -> CommandResult:
    """Embedded/non-embedded map of CMC spheres over (tau, H)."""
    region = _embeddedness(cfg.space.kind, cfg.space.kappa, cfg.grid)
    if cfg.output_format is OutputFormat.CSV:
        path: Path = write_csv(
            cfg.output_path("embeddedness.csv"),
            _region_columns(region),
            {"space": cfg.space.kind.value, "kappa": cfg.space.kappa},
        )
    else:
        path = write_json(cfg.output_path("embeddedness.json"), region)
    return _result(cfg, [path], boundary_points=len(region.boundary))


def _isoperimetric(space: SpaceParams, points: int) -> IsoperimetricComparison:
    H_max: float = 3.0 * math.sqrt(space.kappa)
    return isoperimetric_comparison(isoperimetric_profile(space, np.linspace(0.0, H_max, points).tolist()))


def cmd_isoperimetric(cfg: RunConfig) -> CommandResult:
    """Area against volume for CMC spheres and Clifford tori."""
    comparison = _isoperimetric(cfg.space, cfg.grid)
    if cfg.output_format is OutputFormat.CSV:
        path: Path = write_csv(
            cfg.output_path("isoperimetric.csv"),
            {"volume": comparison.volume, "sphere_area": comparison.sphere_area, "torus_area": comparison.torus_area},
            cfg.metadata(),
        )
    else:
        path = write_json(cfg.output_path("isoperimetric.json"), comparison)
    return _result(cfg, [path], torus_wins=comparison.torus_wins)


def cmd_mesh(cfg: RunConfig) -> CommandResult:
    """Stereographic OBJ mesh of a sphere, Clifford torus or integrated profile."""
    assert cfg.H is not None
    if cfg.surface is MeshSurface.SPHERE:
        mesh: Mesh = sphere_mesh(cfg.H, cfg.space, cfg.mesh_u, cfg.mesh_v)
    elif cfg.surface is MeshSurface.TORUS:
        mesh = torus_mesh(cfg.H, cfg.space, cfg.sign, cfg.mesh_u, cfg.mesh_v)
    else:
        mesh = profile_mesh(integrate_default(cfg.flow(), cfg.space, cfg.span), cfg.space, cfg.mesh_v)
    comments: list[str] = [f"{key}={value}" for key, value in cfg.metadata().items()]
    comments += [f"surface={cfg.surface.value}", f"H={cfg.H}", f"self_intersecting={mesh.self_intersecting}"]
    path: Path = write_obj(cfg.output_path(f"{cfg.surface.value}.obj"), mesh.vertices, mesh.faces, mesh.ambient, comments)
    return _result(
        cfg,
        [path],
        vertices=len(mesh.vertices),
        faces=len(mesh.faces),
        euler_characteristic=mesh.euler_characteristic,
        self_intersecting=mesh.self_intersecting,
    )


def cmd_figures(cfg: RunConfig) -> CommandResult:
    """Data files for every figure panel plus a manifest mapping file to figure."""
    out_dir: Path = cfg.out if cfg.out is not None else cfg.output_dir / "figures"
    manifest: dict[str, str] = {}

    def csv(name: str, figure: str, columns: dict[str, Any], metadata: dict[str, Any]) -> None:
        write_csv(out_dir / name, columns, metadata)
        manifest[name] = figure

    for tau in FIGURE_PERIOD_TAUS:
        space = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=tau)
        curve = period_curve(space, np.linspace(0.0, 0.5, cfg.grid + 2)[1:-1])
        csv(
            f"period_tau{tau:g}.csv",
            "period T(0,E) of minimal Clifford-type tori",
            {"E": curve.E, "T": curve.T},
            {**space_metadata(space), "H": 0.0, "clifford_limit": curve.clifford_limit},
        )
        logger.info("Period panel tau=%g done", tau)

    for kind, kappa in ((SpaceKind.BERGER, 4.0), (SpaceKind.SL2R, -4.0)):
        region = _embeddedness(kind, kappa, cfg.grid)
        csv(
            f"embeddedness_{kind.value}.csv",
            f"non-embedded region of CMC spheres ({kind.value})",
            _region_columns(region),
            {"space": kind.value, "kappa": kappa},
        )
        logger.info("Embeddedness panel %s done", kind.value)

    for tau in FIGURE_ISOPERIMETRIC_TAUS:
        space = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=tau)
        comparison = _isoperimetric(space, cfg.grid)
        csv(
            f"isoperimetric_tau{tau:g}.csv",
            "area of CMC spheres and Clifford tori against enclosed volume",
            {"volume": comparison.volume, "sphere_area": comparison.sphere_area, "torus_area": comparison.torus_area},
            {**space_metadata(space), "half_volume": 0.5 * total_volume(space)},
        )

    for name, (kind, kappa, tau, H, E) in FIGURE_PROFILES.items():
        space = SpaceParams(kind=kind, kappa=kappa, tau=tau)
        flow = FlowParams(H=H, E=E)
        curve_samples: ProfileCurve = integrate_default(flow, space, cfg.span)
        csv(
            f"{name}.csv",
            f"profile curve {name.removeprefix('profile_').replace('_', ' ')}",
            profile_columns(curve_samples, flow, space),
            {**space_metadata(space), "H": H, "E": E, "span": cfg.span},
        )

    manifest_path: Path = write_json(out_dir / "manifest.json", manifest)
    return _result(cfg, [manifest_path], files=sorted(manifest))


COMMANDS: dict[Command, Callable[[RunConfig], CommandResult]] = {
    Command.CLASSIFY: cmd_classify,
    Command.PROFILE: cmd_profile,
    Command.PERIOD: cmd_period,
    Command.SPHERE: cmd_sphere,
    Command.VOLUME: cmd_volume,
    Command.LAWSON_SCAN: cmd_lawson_scan,
    Command.TAU0: cmd_tau0,
    Command.EMBEDDEDNESS: cmd_embeddedness,
    Command.ISOPERIMETRIC: cmd_isoperimetric,
    Command.MESH: cmd_mesh,
    Command.FIGURES: cmd_figures,
}


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    """Parser with one sub-command per :class:`Command` and shared flags."""
    common: argparse.ArgumentParser = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", choices=[k.value for k in SpaceKind], default=SpaceKind.BERGER.value)
    common.add_argument("--kappa", type=float, default=None, help="Base curvature (default 4 or -4)")
    common.add_argument("--tau", type=float, default=None, help="Bundle curvature (default 0.4 or 1)")
    common.add_argument("--H", type=float, default=None, help="Mean curvature")
    common.add_argument("--E", type=float, default=None, help="Energy")
    common.add_argument("--grid", type=int, default=400, help="Points per grid axis (default: 400)")
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="Compactness tolerance")
    common.add_argument("--qmax", type=int, default=DEFAULT_QMAX, help="Largest witness denominator")
    common.add_argument("--span", type=float, default=DEFAULT_SPAN, help="Profile arc length")
    common.add_argument("--surface", choices=[s.value for s in MeshSurface], default=MeshSurface.SPHERE.value)
    common.add_argument("--sign", type=int, default=1, help="Clifford torus branch (+1 or -1)")
    common.add_argument("--mesh-u", type=int, default=121, help="Mesh samples along the profile")
    common.add_argument("--mesh-v", type=int, default=64, help="Mesh samples around the axis")
    common.add_argument("--out", type=Path, default=None, help="Output file or directory")
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)

    parser: argparse.ArgumentParser = argparse.ArgumentParser(
        description="Rotational CMC surfaces in Berger spheres and Sl(2,R)",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, handler in COMMANDS.items():
        sub.add_parser(command.value, parents=[common], help=(handler.__doc__ or "").splitlines()[0])
    return parser


def config_from_args(args: argparse.Namespace, output_dir: Path) -> RunConfig:
    """Translate parsed flags into a :class:`RunConfig`.

    Raises:
        pydantic.ValidationError: If the combination is invalid.
    """
    kind = SpaceKind(args.space)
    kappa: float = args.kappa if args.kappa is not None else (4.0 if kind is SpaceKind.BERGER else -4.0)
    tau: float = args.tau if args.tau is not None else (0.4 if kind is SpaceKind.BERGER else 1.0)
    return RunConfig(
        command=Command(args.command),
        space=SpaceParams(kind=kind, kappa=kappa, tau=tau),
        H=args.H,
        E=args.E,
        grid=args.grid,
        tol=args.tol,
        qmax=args.qmax,
        span=args.span,
        surface=MeshSurface(args.surface),
        sign=args.sign,
        mesh_u=args.mesh_u,
        mesh_v=args.mesh_v,
        out=args.out,
        output_dir=output_dir,
        format=OutputFormat(args.format) if args.format else None,
    )


def main(argv: list[str] | None = None) -> int:
    load_dotenv()
    logging.basicConfig(
        level=os.environ.get("CMC_LOG_LEVEL", "INFO").upper(),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    args: argparse.Namespace = build_parser().parse_args(argv)
    output_dir = Path(os.environ.get("CMC_OUTPUT_DIR", DEFAULT_OUTPUT_DIR))

    try:
        cfg: RunConfig = config_from_args(args, output_dir)
        result: CommandResult = COMMANDS[cfg.command](cfg)
    except ValidationError as e:
        messages: str = "; ".join(err["msg"] for err in e.errors())
        print(f"invalid parameters: {messages}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as e:
        print(f"invalid parameters: {e}", file=sys.stderr)
        return EXIT_INVALID
    except GeometricPreconditionError as e:
        print(f"geometric precondition failed: {e}", file=sys.stderr)
        return EXIT_GEOMETRY
    except CMCError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL

    print(result.model_dump_json(indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

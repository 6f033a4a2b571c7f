"""Figure regeneration check.

Regenerates the figure data with ``python -m infra.cli figures`` into a
temporary directory (or ``--out``) and checks the qualitative shape of
every panel:

- period curves: T(0, E) crosses 2 pi at tau = 0.4, stays below it at
  tau = 0.8, and approaches the Clifford limit at the endpoint E -> 1/2;
- non-embedded regions: the Berger map has non-embedded spheres at the
  smallest tau and none at the largest; both maps are fully defined;
- isoperimetric panels: spheres win everywhere at tau = 0.5, tori win
  around half volume at tau = 0.374 and 0.244, the areas nearly agree at
  half volume for tau = 0.407;
- profiles: energy is conserved along every sampled curve.

Usage:
    python -m scripts.check_figures
    python -m scripts.check_figures --grid 120 --out figures/

Output:
    JSON-formatted :class:`FigureCheckResult` to stdout, progress to
    stderr. Exit code 1 when any check fails.
"""

import argparse
import contextlib
import math
import sys
import tempfile
from pathlib import Path

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.space_models import SpaceKind
from infra.cli import FIGURE_ISOPERIMETRIC_TAUS, FIGURE_PERIOD_TAUS, FIGURE_PROFILES
from infra.cli import main as cli_main
from infra.serialization import read_csv

PERIOD_LIMIT_REL_TOL: float = 5e-2
HALF_VOLUME_REL_GAP: float = 1e-2
MAX_ENERGY_DRIFT: float = 1e-8


class PanelCheck(BaseModel):
    """Outcome of the assertions on one data file."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    file: str
    passed: bool
    detail: str = Field(default="", description="Measured quantity or failure reason")


class FigureCheckResult(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    grid: int
    panels: list[PanelCheck]

    @property
    def passed(self) -> bool:
        return all(p.passed for p in self.panels)


# ---------------------------------------------------------------------------
# Panel checks
# ---------------------------------------------------------------------------


def check_period(directory: Path, tau: float) -> PanelCheck:
    name: str = f"period_tau{tau:g}.csv"
    metadata, cols = read_csv(directory / name)
    T: np.ndarray = cols["T"][np.isfinite(cols["T"])]
    limit: float = float(metadata["clifford_limit"])
    crossings: int = int(np.count_nonzero(np.diff(np.sign(T - 2.0 * math.pi))))
    near_limit: bool = abs(T[-1] - limit) <= PERIOD_LIMIT_REL_TOL * limit
    if tau <= 0.4:
        shape_ok: bool = crossings >= 1
    elif tau >= 0.8:
        shape_ok = bool(np.all(T < 2.0 * math.pi))
    else:
        shape_ok = True
    return PanelCheck(
        file=name,
        passed=shape_ok and near_limit and T.size > 0,
        detail=f"crossings={crossings} T_end={T[-1]:.6f} limit={limit:.6f}",
    )


def check_embeddedness(directory: Path, kind: str) -> PanelCheck:
    name: str = f"embeddedness_{kind}.csv"
    _, cols = read_csv(directory / name)
    tau: np.ndarray = cols["tau"]
    code: np.ndarray = cols["embedded"]
    non_embedded: int = int(np.count_nonzero(code == 0.0))
    defined: bool = bool(np.all(np.isfinite(code)))
    passed: bool = defined
    if kind == "berger":
        passed = (
            defined
            and bool(np.any(code[tau == tau.min()] == 0.0))
            and bool(np.all(code[tau == tau.max()] == 1.0))
        )
    return PanelCheck(file=name, passed=passed, detail=f"non_embedded={non_embedded} of {code.size}")


def check_isoperimetric(directory: Path, tau: float) -> PanelCheck:
    name: str = f"isoperimetric_tau{tau:g}.csv"
    metadata, cols = read_csv(directory / name)
    volume, sphere, torus = cols["volume"], cols["sphere_area"], cols["torus_area"]
    both: np.ndarray = np.isfinite(sphere) & np.isfinite(torus)
    half: int = int(np.argmin(np.abs(volume - float(metadata["half_volume"]))))
    gap: float = float((torus[half] - sphere[half]) / sphere[half])
    if tau >= 0.5:
        passed: bool = bool(np.all(sphere[both] <= torus[both] * (1.0 + 1e-9)))
    elif abs(tau - 0.407) < 1e-9:
        passed = abs(gap) < HALF_VOLUME_REL_GAP
    else:
        passed = gap < 0.0
    return PanelCheck(file=name, passed=passed, detail=f"relative gap at half volume={gap:.3e}")


def check_profile(directory: Path, name: str) -> PanelCheck:
    file: str = f"{name}.csv"
    _, cols = read_csv(directory / file)
    kind, _kappa, _tau, _H, E = FIGURE_PROFILES[name]
    sin_x: np.ndarray = np.sin(cols["x"]) if kind is SpaceKind.BERGER else np.sinh(cols["x"])
    scale: np.ndarray = (1.0 + abs(E)) * np.maximum(1.0, sin_x * sin_x)
    drift: float = float(np.max(np.abs(cols["E_drift"]) / scale))
    return PanelCheck(file=file, passed=drift <= MAX_ENERGY_DRIFT, detail=f"max relative E drift={drift:.2e}")


def check_directory(directory: Path, grid: int) -> FigureCheckResult:
    panels: list[PanelCheck] = [check_period(directory, tau) for tau in FIGURE_PERIOD_TAUS]
    panels += [check_embeddedness(directory, kind) for kind in ("berger", "sl2r")]
    panels += [check_isoperimetric(directory, tau) for tau in FIGURE_ISOPERIMETRIC_TAUS]
    panels += [check_profile(directory, name) for name in FIGURE_PROFILES]
    return FigureCheckResult(grid=grid, panels=panels)


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def main() -> int:
    """Regenerate the figure data, check every panel and print the result."""
    parser: argparse.ArgumentParser = argparse.ArgumentParser(
        description="Regenerate figure data and check its qualitative shape",
    )
    parser.add_argument("--grid", type=int, default=200, help="Points per grid axis (default: 200)")
    parser.add_argument("--out", type=Path, default=None, help="Keep the data in this directory")
    args: argparse.Namespace = parser.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        directory: Path = args.out if args.out is not None else Path(tmp)
        print(f"Regenerating figure data (grid={args.grid}) into {directory}", file=sys.stderr)
        with contextlib.redirect_stdout(sys.stderr):
            code: int = cli_main(["figures", "--grid", str(args.grid), "--out", str(directory)])
        if code != 0:
            print(f"figures command failed with exit code {code}", file=sys.stderr)
            return code
        result: FigureCheckResult = check_directory(directory, args.grid)

    for panel in result.panels:
        print(f"  {'ok  ' if panel.passed else 'FAIL'} {panel.file}: {panel.detail}", file=sys.stderr)
    print(result.model_dump_json(indent=2))
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())

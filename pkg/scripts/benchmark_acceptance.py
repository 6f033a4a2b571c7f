"""Acceptance benchmark: accuracy and wall time of the end-to-end scenarios.

Each scenario measures one numerical claim of the library against an
independent computation and times it:

    1. energy conservation of integrated profiles (random flows, both spaces)
    2. closed-form sphere area against the integrated area of the immersion
    3. closed-form sphere volume against the co-area volume
    4. round-sphere limit of both area branches at tau = 1 +- 1e-4
    5. minimal Clifford-type torus with T = 2 pi and the tau0 transition
    6. isoperimetric crossing and the sphere/torus comparison panels
    7. classification witnesses and a grid sweep over (H, E)
    8. numeric mean curvature on surfaces of known H

Usage:
    python -m scripts.benchmark_acceptance
    python -m scripts.benchmark_acceptance --scenario 2 --scenario 3
    python -m scripts.benchmark_acceptance --class-grid 60 --seed 7

Output:
    JSON-formatted :class:`AcceptanceResult` to stdout.
    Per-scenario summaries to stderr.
"""

import argparse
import math
import sys
import time
from typing import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.bounds_classify import admissible_energy_range, classify, default_start, period_T
from core.closed_forms import clifford_radius, sphere_area, sphere_volume
from core.errors import CMCError
from core.investigations import (
    isoperimetric_comparison,
    isoperimetric_crossing,
    isoperimetric_profile,
    lawson_scan,
    tau0_estimate,
)
from core.profile_dynamics import FlowParams, energy, integrate_profile
from core.space_models import SpaceKind, SpaceParams
from core.verification_oracles import (
    clifford_sampler,
    great_sphere_sampler,
    numeric_area,
    numeric_mean_curvature,
    numeric_volume_coarea,
    sphere_sampler,
)


# ---------------------------------------------------------------------------
# Result models
# ---------------------------------------------------------------------------


class ScenarioResult(BaseModel):
    """Outcome of one acceptance scenario.

    Attributes:
        scenario: Scenario number (1-8).
        name: Short description.
        passed: Whether every assertion of the scenario held.
        seconds: Wall time.
        budget_seconds: Allowed wall time; exceeding it fails the scenario.
        detail: Measured errors and counts.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: int = Field(ge=1, le=8)
    name: str
    passed: bool
    seconds: float = Field(ge=0.0)
    budget_seconds: float = Field(gt=0.0)
    detail: dict[str, float | int | str | None] = {}


class AcceptanceResult(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    seed: int
    scenarios: list[ScenarioResult]

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.scenarios)


class _Check(BaseModel):
    """What a scenario body returns before timing is attached."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    passed: bool
    detail: dict[str, float | int | str | None] = {}


def _berger(tau: float, kappa: float = 4.0) -> SpaceParams:
    return SpaceParams(kind=SpaceKind.BERGER, kappa=kappa, tau=tau)


def _sl2r(tau: float, kappa: float = -4.0) -> SpaceParams:
    return SpaceParams(kind=SpaceKind.SL2R, kappa=kappa, tau=tau)


AREA_H_GRID: np.ndarray = np.linspace(0.0, 3.0, 10)
AREA_TAU_GRID: np.ndarray = np.linspace(0.2, 0.9, 10)
SL2R_H_GRID: np.ndarray = np.linspace(1.1, 3.0, 5)
SL2R_TAU_GRID: np.ndarray = np.linspace(0.2, 1.5, 5)


# ---------------------------------------------------------------------------
# Scenarios
# ---------------------------------------------------------------------------


def _random_flow(rng: np.random.Generator, kind: SpaceKind) -> tuple[FlowParams, SpaceParams]:
    while True:
        if kind is SpaceKind.BERGER:
            space = _berger(float(rng.uniform(0.2, 1.0)), float(rng.uniform(1.0, 8.0)))
        else:
            space = _sl2r(float(rng.uniform(0.2, 1.5)), float(rng.uniform(-8.0, -1.0)))
        if abs(space.kappa - 4.0 * space.tau**2) > 1e-3:
            break
    H: float = float(rng.uniform(0.0, 2.0))
    energies = admissible_energy_range(H, space)
    u: float = float(rng.uniform(0.05, 0.95))
    if energies.lower is not None and energies.upper is not None:
        E: float = energies.lower + u * (energies.upper - energies.lower)
    elif energies.upper is not None:
        E = energies.upper - u
    else:
        E = 2.0 * u - 1.0
    return FlowParams(H=H, E=E), space


def scenario_energy(rng: np.random.Generator, count: int = 50) -> _Check:
    worst: float = 0.0
    failures: int = 0
    for k in range(count):
        flow, space = _random_flow(rng, SpaceKind.BERGER if k % 2 == 0 else SpaceKind.SL2R)
        try:
            curve = integrate_profile(default_start(flow, space), flow, space, 30.0)
        except CMCError as e:
            print(f"    H={flow.H:.4f} E={flow.E:.4f} {space.kind.value}: {e}", file=sys.stderr)
            failures += 1
            continue
        cols = curve.arrays()
        drift: np.ndarray = np.abs(np.asarray(energy(cols["x"], cols["alpha"], flow.H, space)) - flow.E)
        sin_x: np.ndarray = np.sin(cols["x"]) if space.kind is SpaceKind.BERGER else np.sinh(cols["x"])
        scale: np.ndarray = (1.0 + abs(flow.E)) * np.maximum(1.0, sin_x * sin_x)
        worst = max(worst, float(np.max(drift / scale)))
    return _Check(passed=failures == 0 and worst <= 1e-8, detail={"max_rel_drift": worst, "failures": failures})


def scenario_area() -> _Check:
    worst: float = 0.0
    for tau in AREA_TAU_GRID:
        for H in AREA_H_GRID:
            space = _berger(float(tau))
            exact: float = sphere_area(float(H), space)
            worst = max(worst, abs(numeric_area(sphere_sampler(float(H), space), space) - exact) / exact)
    for tau in SL2R_TAU_GRID:
        for H in SL2R_H_GRID:
            space = _sl2r(float(tau))
            exact = sphere_area(float(H), space)
            worst = max(worst, abs(numeric_area(sphere_sampler(float(H), space), space) - exact) / exact)
    return _Check(passed=worst <= 1e-6, detail={"max_rel_error": worst})


def scenario_volume() -> _Check:
    worst: float = 0.0
    minimal: float = 0.0
    for tau in AREA_TAU_GRID:
        space = _berger(float(tau))
        for H in AREA_H_GRID:
            worst = max(worst, abs(sphere_volume(float(H), space) - numeric_volume_coarea(float(H), space)))
        minimal = max(minimal, abs(sphere_volume(0.0, space) - 16.0 * math.pi**2 * float(tau) / 16.0))
    return _Check(passed=worst <= 1e-8 and minimal <= 1e-10, detail={"max_error": worst, "minimal_error": minimal})


def scenario_round_limit() -> _Check:
    worst_branch: float = 0.0
    worst_classical: float = 0.0
    for H in (0.0, 0.5, 1.0, 2.0):
        below: float = sphere_area(H, _berger(1.0 - 1e-4))
        above: float = sphere_area(H, _berger(1.0 + 1e-4))
        classical: float = 4.0 * math.pi / (1.0 + H * H)
        worst_branch = max(worst_branch, abs(below - above) / classical)
        worst_classical = max(worst_classical, abs(0.5 * (below + above) - classical) / classical)
    return _Check(
        passed=worst_branch <= 1e-3 and worst_classical <= 1e-3,
        detail={"branch_gap": worst_branch, "classical_gap": worst_classical},
    )


def scenario_lawson() -> _Check:
    space = _berger(0.4)
    E_star: float | None = lawson_scan(space)
    residual: float | None = (
        abs(period_T(FlowParams(H=0.0, E=E_star), space) - 2.0 * math.pi) if E_star is not None else None
    )
    tau0: float = tau0_estimate(4.0)
    return _Check(
        passed=residual is not None and residual <= 1e-8 and 0.50 <= tau0 <= 0.65,
        detail={"E_star": E_star, "residual": residual, "tau0": tau0},
    )


def scenario_isoperimetric() -> _Check:
    tau_star: float = isoperimetric_crossing(4.0)
    H_grid: np.ndarray = np.linspace(0.0, 6.0, 400)
    wins: dict[float, list[tuple[float, float]]] = {
        tau: isoperimetric_comparison(isoperimetric_profile(_berger(tau), H_grid.tolist())).torus_wins
        for tau in (0.5, 0.374, 0.244)
    }

    def around_half(tau: float) -> bool:
        half: float = math.pi**2 * tau
        return any(lo < half < hi for lo, hi in wins[tau])

    return _Check(
        passed=0.402 <= tau_star <= 0.412 and not wins[0.5] and around_half(0.374) and around_half(0.244),
        detail={"tau_star": tau_star, "intervals_tau0.5": len(wins[0.5])},
    )


def scenario_classification(grid: int) -> _Check:
    berger = _berger(0.4)
    top: float = admissible_energy_range(0.5, berger).upper or 0.0
    witnesses: list[tuple[float, float, SpaceParams, str]] = [
        (0.0, 0.0, berger, "GreatSphere"),
        (0.5, 0.0, berger, "Sphere"),
        (0.5, top, berger, "CliffordTorus"),
        (0.5, 0.1, berger, "Unduloid"),
        (0.5, -0.6, berger, "Unduloid"),
        (0.5, -0.2, berger, "Nodoid"),
        (0.5, -0.5, berger, "PoleChain"),
    ]
    wrong: int = sum(classify(FlowParams(H=H, E=E), space).type != expected for H, E, space, expected in witnesses)
    r: float = classify(FlowParams(H=0.5, E=top), berger).r  # type: ignore[union-attr]
    r_ok: bool = math.isclose(r, clifford_radius(0.5, 1, berger), rel_tol=1e-9) or math.isclose(
        r, clifford_radius(0.5, -1, berger), rel_tol=1e-9
    )
    sl2r_sphere: int = 0
    for H in np.linspace(0.0, 1.0, 11):
        energies = admissible_energy_range(float(H), _sl2r(1.0))
        E: float = (energies.upper - 0.5) if energies.upper is not None else 0.0
        sl2r_sphere += classify(FlowParams(H=float(H), E=E), _sl2r(1.0)).type == "Sphere"
    errors: int = 0
    for H in np.linspace(0.0, 3.0, grid):
        energies = admissible_energy_range(float(H), berger)
        for E in np.linspace(energies.lower or 0.0, energies.upper or 0.0, grid):
            try:
                classify(FlowParams(H=float(H), E=float(E)), berger)
            except CMCError:
                errors += 1
    return _Check(
        passed=wrong == 0 and r_ok and sl2r_sphere == 0 and errors == 0,
        detail={"wrong_witnesses": wrong, "sl2r_spheres": sl2r_sphere, "grid_errors": errors, "grid": grid},
    )


def scenario_oracles() -> _Check:
    space = _berger(0.4)
    minimal: float = max(
        abs(numeric_mean_curvature(great_sphere_sampler(), (1.0, 0.5), space)),
        abs(numeric_mean_curvature(clifford_sampler(clifford_radius(0.0, 1, space)), (0.3, 0.8), space)),
    )
    worst: float = 0.0
    for H in (0.3, 0.7, 1.5):
        surf = sphere_sampler(H, space)
        for x in (-0.5, 0.2, 0.6):
            a: float = surf.s_range[1]
            worst = max(worst, abs(abs(numeric_mean_curvature(surf, (x * a, 0.4), space)) - H))
    return _Check(passed=minimal <= 1e-6 and worst <= 1e-5, detail={"minimal_H": minimal, "sphere_H_error": worst})


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def run_scenario(number: int, name: str, budget: float, body: Callable[[], _Check]) -> ScenarioResult:
    """Time one scenario; a numerical error counts as a failure."""
    start: float = time.perf_counter()
    try:
        check: _Check = body()
    except CMCError as e:
        check = _Check(passed=False, detail={"error": str(e)})
    seconds: float = time.perf_counter() - start
    result = ScenarioResult(
        scenario=number,
        name=name,
        passed=check.passed and seconds <= budget,
        seconds=seconds,
        budget_seconds=budget,
        detail=check.detail,
    )
    print(f"  [{number}] {name}: {'ok' if result.passed else 'FAIL'} ({seconds:.1f}s) {check.detail}", file=sys.stderr)
    return result


def main() -> int:
    """Run the selected acceptance scenarios and output JSON result."""
    parser: argparse.ArgumentParser = argparse.ArgumentParser(
        description="Accuracy and timing of the acceptance scenarios",
    )
    parser.add_argument(
        "--scenario",
        type=int,
        action="append",
        choices=range(1, 9),
        help="Scenario to run (repeatable; default: all)",
    )
    parser.add_argument("--seed", type=int, default=20240601, help="Seed of the random flows (default: 20240601)")
    parser.add_argument(
        "--class-grid",
        type=int,
        default=200,
        help="Points per axis of the classification sweep (default: 200)",
    )
    args: argparse.Namespace = parser.parse_args()
    rng: np.random.Generator = np.random.default_rng(args.seed)

    table: dict[int, tuple[str, float, Callable[[], _Check]]] = {
        1: ("energy conservation", 10.0, lambda: scenario_energy(rng)),
        2: ("sphere area", 60.0, scenario_area),
        3: ("sphere volume", 60.0, scenario_volume),
        4: ("round-sphere limit", 10.0, scenario_round_limit),
        5: ("minimal torus and tau0", 300.0, scenario_lawson),
        6: ("isoperimetric crossing", 60.0, scenario_isoperimetric),
        7: ("classification", 120.0, lambda: scenario_classification(args.class_grid)),
        8: ("oracle coherence", 10.0, scenario_oracles),
    }
    selected: list[int] = sorted(set(args.scenario or table))
    print(f"Acceptance benchmark: scenarios {selected}, seed={args.seed}", file=sys.stderr)

    result = AcceptanceResult(
        seed=args.seed,
        scenarios=[run_scenario(n, *table[n]) for n in selected],
    )
    print(result.model_dump_json(indent=2))
    return 0 if result.passed else 1


if __name__ == "__main__":
    sys.exit(main())

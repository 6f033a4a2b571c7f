"""File formats for curves, reports and meshes.

- CSV: ``numpy.savetxt`` with a ``#``-prefixed metadata block (one
  ``key=value`` per line: space, tolerances, artifact version) followed by
  the comma-separated column names.
- JSON: pydantic ``model_dump_json(indent=2)``; every report carries
  ``schema_version``.
- OBJ: ``v``/``f`` records only, each vertex preceded by a comment with
  its ambient coordinates (Re z, Im z, Re w, Im w).

Outputs are deterministic: no timestamps, fixed float formats.
"""

import json
import logging
from pathlib import Path
from typing import Any, Mapping

import numpy as np
from pydantic import BaseModel

from core.profile_dynamics import EventKind, FlowParams, ProfileCurve, energy, tilt_C
from core.space_models import SpaceParams

logger: logging.Logger = logging.getLogger(__name__)

ARTIFACT_VERSION: str = "0.1.0"
SCHEMA_VERSION: int = 1

EVENT_CODES: dict[EventKind, int] = {
    EventKind.TURNING_POINT: 1,
    EventKind.AXIS_TOUCH: 2,
    EventKind.REFLECTION: 4,
    EventKind.POLE_TOUCH: 8,
}
"""Bit flags of the ``event`` column; several events may share a sample."""

_FLOAT_FORMAT: str = "%.17g"


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------


def space_metadata(space: SpaceParams) -> dict[str, Any]:
    return {"space": space.kind.value, "kappa": space.kappa, "tau": space.tau}


def write_csv(
    path: Path,
    columns: Mapping[str, np.ndarray | list[float]],
    metadata: Mapping[str, Any],
) -> Path:
    """Write equal-length columns with a metadata header.

    Raises:
        ValueError: If the columns have different lengths.
    """
    names: list[str] = list(columns)
    arrays: list[np.ndarray] = [np.asarray(columns[name], dtype=float) for name in names]
    if len({a.shape for a in arrays}) > 1:
        raise ValueError(f"columns have different lengths: {[a.shape for a in arrays]}")
    header_lines: list[str] = [f"artifact_version={ARTIFACT_VERSION}"]
    header_lines += [f"{key}={value}" for key, value in metadata.items()]
    header_lines.append(",".join(names))
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(
        path,
        np.column_stack(arrays) if arrays and arrays[0].size else np.empty((0, len(names))),
        delimiter=",",
        header="\n".join(header_lines),
        comments="# ",
        fmt=_FLOAT_FORMAT,
    )
    logger.info("Wrote %s (%d rows)", path, arrays[0].size if arrays else 0)
    return path


def read_csv(path: Path) -> tuple[dict[str, str], dict[str, np.ndarray]]:
    """Read a file written by :func:`write_csv` into (metadata, columns)."""
    header: list[str] = []
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            if not line.startswith("#"):
                break
            header.append(line[1:].strip())
    names: list[str] = header[-1].split(",")
    metadata: dict[str, str] = dict(item.split("=", 1) for item in header[:-1])
    table: np.ndarray = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    if table.size == 0:
        table = np.empty((0, len(names)))
    return metadata, {name: table[:, i] for i, name in enumerate(names)}


def profile_columns(curve: ProfileCurve, flow: FlowParams, space: SpaceParams) -> dict[str, np.ndarray]:
    """Columns s, x, y, alpha, C, E_drift and the event bit flags."""
    cols: dict[str, np.ndarray] = curve.arrays()
    codes: np.ndarray = np.zeros(len(curve.samples))
    for event in curve.events:
        codes[event.index] = int(codes[event.index]) | EVENT_CODES[event.kind]
    return {
        **cols,
        "C": np.asarray(tilt_C(cols["x"], cols["alpha"], space)),
        "E_drift": np.asarray(energy(cols["x"], cols["alpha"], flow.H, space)) - flow.E,
        "event": codes,
    }


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def write_json(path: Path, payload: BaseModel | Mapping[str, Any]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(payload, BaseModel):
        text: str = payload.model_dump_json(indent=2)
    else:
        text = json.dumps(payload, indent=2, sort_keys=True)
    path.write_text(text + "\n", encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


# ---------------------------------------------------------------------------
# OBJ
# ---------------------------------------------------------------------------


def write_obj(
    path: Path,
    vertices: np.ndarray,
    faces: np.ndarray,
    ambient: np.ndarray | None = None,
    comments: list[str] | None = None,
) -> Path:
    """Write a triangle mesh; faces are 0-based in memory and 1-based in the file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        handle.write(f"# cmc-rotational-surfaces {ARTIFACT_VERSION}\n")
        for line in comments or []:
            handle.write(f"# {line}\n")
        for i, v in enumerate(vertices):
            if ambient is not None:
                p = ambient[i]
                handle.write(f"# p {p[0]:.12f} {p[1]:.12f} {p[2]:.12f} {p[3]:.12f}\n")
            handle.write(f"v {v[0]:.9f} {v[1]:.9f} {v[2]:.9f}\n")
        for tri in faces:
            a, b, c = tri + 1
            handle.write(f"f {a} {b} {c}\n")
    logger.info("Wrote %s (%d vertices, %d faces)", path, len(vertices), len(faces))
    return path


def read_obj(path: Path) -> tuple[np.ndarray, np.ndarray]:
    """Vertices and 0-based faces of an OBJ file written by :func:`write_obj`."""
    vertices: list[list[float]] = []
    faces: list[list[int]] = []
    with path.open(encoding="utf-8") as handle:
        for line in handle:
            parts: list[str] = line.split()
            if not parts or parts[0] == "#":
                continue
            if parts[0] == "v":
                vertices.append([float(v) for v in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(v.split("/")[0]) - 1 for v in parts[1:4]])
    return np.array(vertices, dtype=float), np.array(faces, dtype=int).reshape(-1, 3)

"""Unit tests for infra.serialization module.

Tests the CSV metadata header, the profile column layout with event bit
flags, JSON reports and the OBJ writer and reader.
"""

from pathlib import Path

import numpy as np
import pytest

from core.bounds_classify import default_start
from core.profile_dynamics import EventKind, FlowParams, ProfileCurve, ProfileEvent, integrate_profile
from core.space_models import SpaceKind, SpaceParams
from infra.serialization import (
    ARTIFACT_VERSION,
    EVENT_CODES,
    profile_columns,
    read_csv,
    read_obj,
    space_metadata,
    write_csv,
    write_json,
    write_obj,
)

BERGER: SpaceParams = SpaceParams(kind=SpaceKind.BERGER, kappa=4.0, tau=0.4)


# ---------------------------------------------------------------------------
# CSV Tests
# ---------------------------------------------------------------------------


class TestCsv:
    """Tests for write_csv and read_csv."""

    def test_header_and_values(self, tmp_path: Path) -> None:
        """Metadata lines precede the column names; values survive exactly."""
        path: Path = tmp_path / "data.csv"
        values: np.ndarray = np.array([0.1, 1.0 / 3.0, np.pi])
        write_csv(path, {"a": values, "b": 2.0 * values}, space_metadata(BERGER))
        lines: list[str] = path.read_text(encoding="utf-8").splitlines()
        assert lines[0] == f"# artifact_version={ARTIFACT_VERSION}"
        assert lines[1] == "# space=berger"
        assert lines[4] == "# a,b"
        metadata, columns = read_csv(path)
        assert metadata["kappa"] == "4.0"
        np.testing.assert_array_equal(columns["a"], values)
        np.testing.assert_array_equal(columns["b"], 2.0 * values)

    def test_nan_round_trip(self, tmp_path: Path) -> None:
        """NaN marks undefined samples."""
        path: Path = write_csv(tmp_path / "nan.csv", {"T": [1.0, float("nan")]}, {})
        _, columns = read_csv(path)
        assert np.isnan(columns["T"][1])

    def test_single_row(self, tmp_path: Path) -> None:
        """One-row files still read as columns."""
        _, columns = read_csv(write_csv(tmp_path / "one.csv", {"x": [1.5], "y": [2.5]}, {}))
        assert columns["y"].tolist() == [2.5]

    def test_length_mismatch(self, tmp_path: Path) -> None:
        """Columns must have equal lengths."""
        with pytest.raises(ValueError, match="different lengths"):
            write_csv(tmp_path / "bad.csv", {"a": [1.0], "b": [1.0, 2.0]}, {})

    def test_deterministic(self, tmp_path: Path) -> None:
        """Writing the same data twice gives identical bytes."""
        columns = {"x": np.linspace(0.0, 1.0, 7)}
        first: bytes = write_csv(tmp_path / "a.csv", columns, {"k": 1}).read_bytes()
        second: bytes = write_csv(tmp_path / "b.csv", columns, {"k": 1}).read_bytes()
        assert first == second


class TestProfileColumns:
    """Tests for profile_columns."""

    def test_column_names(self) -> None:
        """Profile files carry s, x, y, alpha, C, E_drift and event."""
        flow: FlowParams = FlowParams(H=0.0, E=0.3)
        curve: ProfileCurve = integrate_profile(default_start(flow, BERGER), flow, BERGER, 4.0)
        columns = profile_columns(curve, flow, BERGER)
        assert list(columns) == ["s", "x", "y", "alpha", "C", "E_drift", "event"]
        assert np.max(np.abs(columns["E_drift"])) < 1e-8

    def test_event_bits_combine(self) -> None:
        """Events on the same sample are OR-ed together."""
        flow: FlowParams = FlowParams(H=0.0, E=0.3)
        start = default_start(flow, BERGER)
        curve: ProfileCurve = ProfileCurve(
            samples=(start, start),
            events=(
                ProfileEvent(index=1, kind=EventKind.TURNING_POINT),
                ProfileEvent(index=1, kind=EventKind.REFLECTION),
            ),
        )
        codes: np.ndarray = profile_columns(curve, flow, BERGER)["event"]
        assert codes.tolist() == [0.0, float(EVENT_CODES[EventKind.TURNING_POINT] | EVENT_CODES[EventKind.REFLECTION])]
        assert codes[1] == 5.0


# ---------------------------------------------------------------------------
# JSON Tests
# ---------------------------------------------------------------------------


class TestJson:
    """Tests for write_json."""

    def test_model_payload(self, tmp_path: Path) -> None:
        """Pydantic models are dumped with their field names."""
        text: str = write_json(tmp_path / "space.json", BERGER).read_text(encoding="utf-8")
        assert '"kind": "berger"' in text
        assert text.endswith("\n")

    def test_mapping_sorted(self, tmp_path: Path) -> None:
        """Plain mappings are written with sorted keys."""
        text: str = write_json(tmp_path / "m.json", {"b": 1, "a": 2}).read_text(encoding="utf-8")
        assert text.index('"a"') < text.index('"b"')


# ---------------------------------------------------------------------------
# OBJ Tests
# ---------------------------------------------------------------------------


class TestObj:
    """Tests for write_obj and read_obj."""

    def test_one_based_faces(self, tmp_path: Path) -> None:
        """Faces are 1-based in the file and 0-based in memory."""
        vertices: np.ndarray = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
        faces: np.ndarray = np.array([[0, 1, 2]])
        path: Path = write_obj(tmp_path / "tri.obj", vertices, faces)
        assert "f 1 2 3" in path.read_text(encoding="utf-8").splitlines()
        read_vertices, read_faces = read_obj(path)
        np.testing.assert_allclose(read_vertices, vertices)
        np.testing.assert_array_equal(read_faces, faces)

    def test_ambient_comments(self, tmp_path: Path) -> None:
        """Each vertex is preceded by its ambient coordinates."""
        vertices: np.ndarray = np.zeros((2, 3))
        ambient: np.ndarray = np.array([[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0]])
        path: Path = write_obj(tmp_path / "p.obj", vertices, np.empty((0, 3), dtype=int), ambient, ["H=0.5"])
        lines: list[str] = path.read_text(encoding="utf-8").splitlines()
        assert "# H=0.5" in lines
        assert sum(line.startswith("# p ") for line in lines) == 2
        assert lines[lines.index("# p 0.000000000000 1.000000000000 0.000000000000 0.000000000000") + 1].startswith("v ")

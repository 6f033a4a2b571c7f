"""Triangle meshes of rotational surfaces, stereographically projected to R^3.

A surface is sampled on a closed (s, t) parameter grid, triangulated and
welded: coincident ambient points (the periodic seams and the collapsed
rows on the rotation axis) are merged with a KD-tree, degenerate faces are
dropped. The welded mesh is closed wherever the surface is, which is what
makes the Euler characteristic meaningful.

Sl(2,R) points are first normalized onto S^3 by (z, w) / |(z, w)|, a
diffeomorphism of the quadric onto an open subset of S^3. The projection
is taken from the pole (z, w) = (0, i):

    (Re z, Im z, Re w) / (1 - Im w).

Example:
    >>> from core.space_models import SpaceParams
    >>> from infra.mesh_export import torus_mesh
    >>> space = SpaceParams(kind="berger", kappa=4.0, tau=0.4)
    >>> torus_mesh(0.0, space, nu=24, nv=24).euler_characteristic
    0
"""

import logging
import math
from typing import NamedTuple

import numpy as np
from scipy.spatial import cKDTree

from core.closed_forms import clifford_immersion, clifford_radius, sphere_half_domain, sphere_immersion_arrays
from core.errors import DomainError, GeometricPreconditionError
from core.profile_dynamics import ProfileCurve
from core.space_models import SpaceKind, SpaceParams

logger: logging.Logger = logging.getLogger(__name__)

WELD_TOL: float = 1e-9
POLE_CLEARANCE: float = 1e-6
_INTERSECT_EPS: float = 1e-9


class Mesh(NamedTuple):
    """Welded triangle mesh.

    Attributes:
        vertices: (n, 3) stereographic coordinates.
        faces: (m, 3) 0-based vertex indices.
        ambient: (n, 4) ambient coordinates (Re z, Im z, Re w, Im w).
        self_intersections: Number of edge-triangle crossings found by the sweep.
    """

    vertices: np.ndarray
    faces: np.ndarray
    ambient: np.ndarray
    self_intersections: int

    @property
    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(unique_edges(self.faces)) + len(self.faces)

    @property
    def self_intersecting(self) -> bool:
        return self.self_intersections > 0


# ---------------------------------------------------------------------------
# Projection
# ---------------------------------------------------------------------------


def stereographic(z: np.ndarray, w: np.ndarray, kind: SpaceKind) -> tuple[np.ndarray, np.ndarray]:
    """Project ambient points to R^3 from the pole (0, i) of S^3.

    Returns:
        ``(points, ambient)`` with shapes (..., 3) and (..., 4).

    Raises:
        GeometricPreconditionError: If a point lies on (or within
            ``POLE_CLEARANCE`` of) the projection pole.
    """
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    ambient: np.ndarray = np.stack([z.real, z.imag, w.real, w.imag], axis=-1)
    unit: np.ndarray = ambient
    if kind is SpaceKind.SL2R:
        unit = ambient / np.linalg.norm(ambient, axis=-1, keepdims=True)
    gap: np.ndarray = 1.0 - unit[..., 3]
    if np.any(gap < POLE_CLEARANCE):
        raise GeometricPreconditionError(
            "the stereographic pole (z, w) = (0, i) lies on the surface; "
            "choose a surface that avoids it (e.g. H > 0 for spheres)"
        )
    return unit[..., :3] / gap[..., None], ambient


# ---------------------------------------------------------------------------
# Triangulation
# ---------------------------------------------------------------------------


def grid_faces(nu: int, nv: int) -> np.ndarray:
    """Two triangles per cell of an nu x nv vertex grid (row-major)."""
    i, j = np.meshgrid(np.arange(nu - 1), np.arange(nv - 1), indexing="ij")
    a: np.ndarray = (i * nv + j).ravel()
    b: np.ndarray = a + nv
    return np.concatenate([np.stack([a, b, a + 1], axis=1), np.stack([a + 1, b, b + 1], axis=1)])


def weld(points: np.ndarray, faces: np.ndarray, tol: float = WELD_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Merge points closer than ``tol`` and drop faces that become degenerate.

    Returns:
        ``(keep, faces)``: indices of the surviving points and the
        re-indexed faces.
    """
    n: int = len(points)
    parent: np.ndarray = np.arange(n)

    def find(k: int) -> int:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = int(parent[k])
        return k

    for p, q in cKDTree(points).query_pairs(tol):
        rp, rq = find(p), find(q)
        if rp != rq:
            parent[max(rp, rq)] = min(rp, rq)
    roots: np.ndarray = np.array([find(k) for k in range(n)])
    keep, inverse = np.unique(roots, return_inverse=True)
    mapped: np.ndarray = inverse[faces]
    alive: np.ndarray = (
        (mapped[:, 0] != mapped[:, 1]) & (mapped[:, 1] != mapped[:, 2]) & (mapped[:, 0] != mapped[:, 2])
    )
    if n - len(keep):
        logger.debug("Welded %d duplicate vertices, dropped %d faces", n - len(keep), int((~alive).sum()))
    return keep, mapped[alive]


def unique_edges(faces: np.ndarray) -> np.ndarray:
    edges: np.ndarray = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    return np.unique(np.sort(edges, axis=1), axis=0)


# ---------------------------------------------------------------------------
# Self-intersection sweep
# ---------------------------------------------------------------------------


def _segment_hits(p0: np.ndarray, p1: np.ndarray, tris: np.ndarray) -> np.ndarray:
    """Strict interior crossings of segment p0-p1 with each triangle (Moller-Trumbore)."""
    d: np.ndarray = p1 - p0
    e1: np.ndarray = tris[:, 1] - tris[:, 0]
    e2: np.ndarray = tris[:, 2] - tris[:, 0]
    h: np.ndarray = np.cross(d, e2)
    det: np.ndarray = np.einsum("ij,ij->i", e1, h)
    ok: np.ndarray = np.abs(det) > _INTERSECT_EPS * np.linalg.norm(d) * np.linalg.norm(e1, axis=1) * np.linalg.norm(
        e2, axis=1
    )
    inv: np.ndarray = np.divide(1.0, det, out=np.zeros_like(det), where=ok)
    sv: np.ndarray = p0 - tris[:, 0]
    u: np.ndarray = inv * np.einsum("ij,ij->i", sv, h)
    q: np.ndarray = np.cross(sv, e1)
    v: np.ndarray = inv * (q @ d)
    t: np.ndarray = inv * np.einsum("ij,ij->i", e2, q)
    eps: float = _INTERSECT_EPS
    return ok & (u > eps) & (v > eps) & (u + v < 1.0 - eps) & (t > eps) & (t < 1.0 - eps)


def count_self_intersections(vertices: np.ndarray, faces: np.ndarray) -> int:
    """Count edge-triangle crossings between non-adjacent elements.

    Every edge is tested against the triangles near it (KD-tree on the
    triangle centroids) that share none of its vertices. A transverse
    self-intersection of two sheets always produces such a crossing.
    """
    if len(faces) == 0:
        return 0
    tris: np.ndarray = vertices[faces]
    centroids: np.ndarray = tris.mean(axis=1)
    tri_radius: float = float(np.max(np.linalg.norm(tris - centroids[:, None, :], axis=2)))
    edges: np.ndarray = unique_edges(faces)
    p0: np.ndarray = vertices[edges[:, 0]]
    p1: np.ndarray = vertices[edges[:, 1]]
    half: float = float(np.max(np.linalg.norm(p1 - p0, axis=1))) / 2.0
    tree: cKDTree = cKDTree(centroids)
    neighbours: list[list[int]] = tree.query_ball_point((p0 + p1) / 2.0, tri_radius + half)

    hits: int = 0
    for k, candidates in enumerate(neighbours):
        if not candidates:
            continue
        cand: np.ndarray = np.asarray(candidates)
        a, b = edges[k]
        cand = cand[~np.any((faces[cand] == a) | (faces[cand] == b), axis=1)]
        if cand.size:
            hits += int(_segment_hits(p0[k], p1[k], tris[cand]).sum())
    logger.debug("Self-intersection sweep: %d edges, %d crossings", len(edges), hits)
    return hits


# ---------------------------------------------------------------------------
# Surfaces
# ---------------------------------------------------------------------------


def mesh_from_grid(z: np.ndarray, w: np.ndarray, kind: SpaceKind, sweep: bool = True) -> Mesh:
    """Build a welded mesh from (nu, nv) grids of ambient coordinates."""
    nu, nv = z.shape
    if nu < 2 or nv < 2:
        raise DomainError(f"mesh grid needs at least 2 x 2 samples, got {nu} x {nv}")
    points, ambient = stereographic(z, w, kind)
    flat_ambient: np.ndarray = ambient.reshape(-1, 4)
    keep, faces = weld(flat_ambient, grid_faces(nu, nv))
    vertices: np.ndarray = points.reshape(-1, 3)[keep]
    crossings: int = count_self_intersections(vertices, faces) if sweep else 0
    return Mesh(vertices=vertices, faces=faces, ambient=flat_ambient[keep], self_intersections=crossings)


def sphere_mesh(H: float, space: SpaceParams, nu: int = 121, nv: int = 64, sweep: bool = True) -> Mesh:
    """Mesh of the rotational CMC sphere with mean curvature H."""
    a: float = sphere_half_domain(H, space)
    x, t = np.meshgrid(np.linspace(-a, a, nu), np.linspace(-math.pi, math.pi, nv), indexing="ij")
    z, w = sphere_immersion_arrays(x, t, H, space)
    return mesh_from_grid(z, w, space.kind, sweep)


def torus_mesh(H: float, space: SpaceParams, sign: int = 1, nu: int = 96, nv: int = 64, sweep: bool = True) -> Mesh:
    """Mesh of the CMC Clifford torus of radius clifford_radius(H, sign)."""
    r: float = clifford_radius(H, sign, space)
    s, t = np.meshgrid(
        np.linspace(0.0, 2.0 * math.pi * r, nu), np.linspace(-math.pi, math.pi, nv), indexing="ij"
    )
    z, w = clifford_immersion(s, t, r)
    return mesh_from_grid(z, w, space.kind, sweep)


def profile_mesh(curve: ProfileCurve, space: SpaceParams, nv: int = 64, sweep: bool = True) -> Mesh:
    """Surface of revolution (c(x) e^{iy}, s(x) e^{it}) of a sampled profile."""
    cols: dict[str, np.ndarray] = curve.arrays()
    x: np.ndarray = cols["x"][:, None]
    y: np.ndarray = cols["y"][:, None]
    t: np.ndarray = np.linspace(-math.pi, math.pi, nv)[None, :]
    if space.kind is SpaceKind.BERGER:
        z: np.ndarray = np.cos(x) * np.exp(1j * y) * np.ones_like(t)
        w: np.ndarray = np.sin(x) * np.exp(1j * t)
    else:
        z = np.cosh(x) * np.exp(1j * y) * np.ones_like(t)
        w = np.sinh(x) * np.exp(1j * t)
    return mesh_from_grid(z, w, space.kind, sweep)

"""Infrastructure layer: command-line surface, file formats and mesh export."""

from infra.mesh_export import Mesh, profile_mesh, sphere_mesh, stereographic, torus_mesh
from infra.serialization import read_csv, write_csv, write_json, write_obj

__all__: list[str] = [
    "Mesh",
    "profile_mesh",
    "read_csv",
    "sphere_mesh",
    "stereographic",
    "torus_mesh",
    "write_csv",
    "write_json",
    "write_obj",
]

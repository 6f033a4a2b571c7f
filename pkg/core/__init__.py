"""Core domain layer for rotational CMC surfaces.

This package holds the ambient-space models of the Berger spheres and
Sl(2,R), the profile ODE and its integrator, the classification of
rotational CMC surfaces, the closed-form spheres and Clifford tori, the
quadrature/root kernel, the parameter investigations and the independent
numerical oracles. All parameter records are frozen pydantic models.
"""

from core.bounds_classify import (
    BandShape,
    EnergyRange,
    RationalWitness,
    SurfaceClass,
    TurningBand,
    admissible_energy_range,
    classify,
    compactness_test,
    default_start,
    period_T,
    turning_points,
)
from core.closed_forms import (
    SphereProfile,
    clifford_radius,
    sphere_area,
    sphere_immersion,
    sphere_profile,
    sphere_volume,
    torus_area_volume,
)
from core.errors import (
    BracketError,
    CMCError,
    DomainError,
    GeometricPreconditionError,
    IntegrationError,
    NoSphereError,
    NumericalError,
    QuadratureError,
    SingularEvaluationError,
)
from core.investigations import (
    IsoperimetricPoint,
    ScanReport,
    embeddedness_region,
    isoperimetric_crossing,
    lawson_scan,
    tau0_estimate,
)
from core.numerics_kernel import QuadratureSpec, RootBracket, find_root, integrate_endpoint_singular
from core.profile_dynamics import (
    EventKind,
    FlowParams,
    IntegrationOptions,
    ProfileCurve,
    ProfileState,
    energy,
    integrate_profile,
    ode_rhs,
)
from core.space_models import AmbientPoint, AmbientVector, SpaceKind, SpaceParams, connection_table
from core.verification_oracles import numeric_area, numeric_mean_curvature, numeric_volume_coarea

__all__: list[str] = [
    "AmbientPoint",
    "AmbientVector",
    "BandShape",
    "BracketError",
    "CMCError",
    "DomainError",
    "EnergyRange",
    "EventKind",
    "FlowParams",
    "GeometricPreconditionError",
    "IntegrationError",
    "IntegrationOptions",
    "IsoperimetricPoint",
    "NoSphereError",
    "NumericalError",
    "ProfileCurve",
    "ProfileState",
    "QuadratureError",
    "QuadratureSpec",
    "RationalWitness",
    "RootBracket",
    "ScanReport",
    "SingularEvaluationError",
    "SpaceKind",
    "SpaceParams",
    "SphereProfile",
    "SurfaceClass",
    "TurningBand",
    "admissible_energy_range",
    "classify",
    "clifford_radius",
    "compactness_test",
    "connection_table",
    "default_start",
    "embeddedness_region",
    "energy",
    "find_root",
    "integrate_endpoint_singular",
    "integrate_profile",
    "isoperimetric_crossing",
    "lawson_scan",
    "numeric_area",
    "numeric_mean_curvature",
    "numeric_volume_coarea",
    "ode_rhs",
    "period_T",
    "sphere_area",
    "sphere_immersion",
    "sphere_profile",
    "sphere_volume",
    "tau0_estimate",
    "torus_area_volume",
    "turning_points",
]

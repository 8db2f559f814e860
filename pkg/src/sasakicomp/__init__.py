"""Numerical verification of comparison geometry on sub-Riemannian Sasakian models.

The package implements, at desk scale, the machinery behind conjugate-time,
ball-volume and sub-Laplacian comparison bounds driven by two transverse
curvature constants (k1, k2): closed-form model geodesics (flat group and
sphere), the canonical Jacobi and Riccati flows with their constant-curvature
closed forms, ball volumes by quadrature over the covector cylinder, and a
finite-difference certification of the Laplacian comparison on the flat
equality model.
"""

from .comparison import (
    CurvatureBounds,
    EffectiveCurvature,
    PoleProximityError,
    conjugate_bounds,
    effective_curvature,
    laplacian_bound,
    trace_bound,
    volume_density,
)
from .distance_field import (
    LaplacianSample,
    horizontal_gradient_norm,
    reeb_derivative,
    sub_laplacian_fd,
    verify_laplacian_comparison,
)
from .geometry import (
    CanonicalCurvature,
    Covector,
    CylCoord,
    StructuralConstants,
    assemble_structural,
    constant_curvature_matrix,
    from_cylindrical,
    to_cylindrical,
)
from .jacobi import (
    ConjugateIndeterminate,
    JacobiIntegrationError,
    JacobiSolution,
    PoleEvaluationError,
    RiccatiSolution,
    RiccatiState,
    constant_conjugate_time,
    first_conjugate_time,
    integrate_jacobi,
    integrate_riccati,
    riccati_oracle,
)
from .models import (
    DistanceSolverError,
    GeodesicSample,
    ModelKind,
    ModelSpace,
    curvature_along,
    cut_time,
    heisenberg_distance,
    heisenberg_geodesic,
    hopf_geodesic,
)
from .volume import BishopViolation, VolumeResult, ball_volume, bishop_check, sphere_area

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Covector",
    "CylCoord",
    "StructuralConstants",
    "CanonicalCurvature",
    "assemble_structural",
    "to_cylindrical",
    "from_cylindrical",
    "constant_curvature_matrix",
    "ModelKind",
    "ModelSpace",
    "GeodesicSample",
    "DistanceSolverError",
    "heisenberg_geodesic",
    "hopf_geodesic",
    "cut_time",
    "heisenberg_distance",
    "curvature_along",
    "JacobiSolution",
    "RiccatiState",
    "RiccatiSolution",
    "JacobiIntegrationError",
    "ConjugateIndeterminate",
    "PoleEvaluationError",
    "integrate_jacobi",
    "first_conjugate_time",
    "integrate_riccati",
    "riccati_oracle",
    "constant_conjugate_time",
    "CurvatureBounds",
    "EffectiveCurvature",
    "PoleProximityError",
    "effective_curvature",
    "conjugate_bounds",
    "trace_bound",
    "laplacian_bound",
    "volume_density",
    "VolumeResult",
    "BishopViolation",
    "ball_volume",
    "bishop_check",
    "sphere_area",
    "LaplacianSample",
    "sub_laplacian_fd",
    "horizontal_gradient_norm",
    "reeb_derivative",
    "verify_laplacian_comparison",
]

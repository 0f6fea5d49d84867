"""Workspace-topology classification of 3R orthogonal positioning manipulators.

The package classifies the zero-last-offset orthogonal family by the number
of cusps and nodes on the singular-curve images in the (rho, z) half
cross-section of the workspace, both through closed-form separating surfaces
in the length parameters and through an independent numerical tracer, and
reproduces the parameter-space partition figures.
"""

from .kinematics import (
    CartesianPoint,
    Geometry,
    HalfSectionPoint,
    IKOutcome,
    JointConfig,
    QuarticPoly,
    RootPattern,
    forward_kinematics,
    ik_details,
    ik_quartic,
    inverse_kinematics,
    jacobian_det_closed,
    jacobian_det_numeric,
    solve_roots,
    wrap_angle,
)
from .surfaces import (
    AuxAB,
    BranchReport,
    SurfaceId,
    branch_report,
    cr_residual,
    cr_residual_scaled,
    surface_value,
)
from .tracing import (
    CuspPoint,
    FeatureCount,
    NodePoint,
    SingularCurve,
    aspect_count,
    count_features,
    detect_cusps,
    detect_nodes,
    isolated_singular_points,
    singular_theta2,
    trace_singular_set,
    workspace_image,
)
from .classify import (
    WT_FEATURE_TABLE,
    Classification,
    classify,
    classify_by_surfaces,
    classify_numeric,
    nearest_boundary_distance,
)
from .sweep import (
    PartitionRaster,
    RegionStats,
    boundary_overlay,
    region_stats,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AuxAB",
    "BranchReport",
    "CartesianPoint",
    "Classification",
    "CuspPoint",
    "FeatureCount",
    "Geometry",
    "HalfSectionPoint",
    "IKOutcome",
    "JointConfig",
    "NodePoint",
    "PartitionRaster",
    "QuarticPoly",
    "RegionStats",
    "RootPattern",
    "SingularCurve",
    "SurfaceId",
    "WT_FEATURE_TABLE",
    "aspect_count",
    "boundary_overlay",
    "branch_report",
    "classify",
    "classify_by_surfaces",
    "classify_numeric",
    "count_features",
    "cr_residual",
    "cr_residual_scaled",
    "detect_cusps",
    "detect_nodes",
    "forward_kinematics",
    "ik_details",
    "ik_quartic",
    "inverse_kinematics",
    "isolated_singular_points",
    "jacobian_det_closed",
    "jacobian_det_numeric",
    "nearest_boundary_distance",
    "region_stats",
    "singular_theta2",
    "solve_roots",
    "surface_value",
    "sweep",
    "trace_singular_set",
    "workspace_image",
    "wrap_angle",
]

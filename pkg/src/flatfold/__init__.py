"""Decide whether a polygon gluing folds flat and reconstruct the result.

Pipeline: parse_spec -> refine -> check_alexandrov -> build_surface ->
all_pairs -> find_rim -> reconstruct.
"""

from .gluing import (
    ANGLE_TOL,
    LENGTH_TOL,
    AlexandrovReport,
    BoundaryArc,
    ConePoint,
    GluingSpec,
    InstanceError,
    PolygonSpec,
    RefinedGluing,
    check_alexandrov,
    check_tiling,
    cone_points,
    gauss_bonnet_residual,
    parse_spec,
    refine,
)
from .surface import BuildError, Surface, build_surface
from .geodesic import (
    TIE_TOL,
    GeodesicError,
    GeodesicPath,
    ShortestPathSet,
    all_pairs,
    oracle_shortest_path,
    shortest_paths_from,
)
from .rim import RimCandidate, SearchLog, bisects, find_rim, is_simple
from .layout import (
    CutMesh,
    DevelopedHalf,
    FlatPolyhedron,
    LayoutError,
    develop_half,
    reconstruct,
    render_svg,
    result_document,
    split_surface,
)

__version__ = "0.1.0"

__all__ = [
    "ANGLE_TOL",
    "LENGTH_TOL",
    "TIE_TOL",
    "AlexandrovReport",
    "BoundaryArc",
    "BuildError",
    "ConePoint",
    "CutMesh",
    "DevelopedHalf",
    "FlatPolyhedron",
    "GeodesicError",
    "GeodesicPath",
    "GluingSpec",
    "InstanceError",
    "LayoutError",
    "PolygonSpec",
    "RefinedGluing",
    "RimCandidate",
    "SearchLog",
    "ShortestPathSet",
    "Surface",
    "all_pairs",
    "bisects",
    "build_surface",
    "check_alexandrov",
    "check_tiling",
    "cone_points",
    "develop_half",
    "find_rim",
    "gauss_bonnet_residual",
    "is_simple",
    "oracle_shortest_path",
    "parse_spec",
    "reconstruct",
    "refine",
    "render_svg",
    "result_document",
    "shortest_paths_from",
    "split_surface",
]

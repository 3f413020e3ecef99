from .ambient import (
    ConformalSpace,
    CurvatureClaim,
    CurvatureData,
    CurvatureSample,
    CurvatureScan,
    curvature_at,
    curvature_scan,
    default_ambient_box,
    power_family_sectional,
    ricci_normal_umbilical,
    sectional,
    sectional_closed_form,
)
from .hypersurface import (
    AbsMeanCurvatureForms,
    ChartKind,
    ImmersionChart,
    LocalSurface,
    PointGeometry,
    geometry_at,
    r2_cross_check,
    ricci_projections,
    surface_scalar_calculus,
)

__all__ = [
    "AbsMeanCurvatureForms",
    "ChartKind",
    "ConformalSpace",
    "CurvatureClaim",
    "CurvatureData",
    "CurvatureSample",
    "CurvatureScan",
    "ImmersionChart",
    "LocalSurface",
    "PointGeometry",
    "curvature_at",
    "curvature_scan",
    "default_ambient_box",
    "geometry_at",
    "power_family_sectional",
    "r2_cross_check",
    "ricci_normal_umbilical",
    "ricci_projections",
    "sectional",
    "sectional_closed_form",
    "surface_scalar_calculus",
]

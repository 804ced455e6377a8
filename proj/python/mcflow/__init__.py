"""Mean-curvature Dirichlet problems on strictly convex planar domains."""

from ._core import (
    AlphaOne,
    ConfigError,
    Domain,
    Error,
    Mesh,
    NoCriticalPoint,
    NonConvergence,
    Problem,
    RadialSolution,
    SlopeBlowup,
    Solution,
    check_bounds,
    phi,
    psi,
    residual,
    series_start,
    solve,
    solve_radial,
    triangulate,
    verify,
)

__all__ = [
    "AlphaOne",
    "ConfigError",
    "Domain",
    "Error",
    "Mesh",
    "NoCriticalPoint",
    "NonConvergence",
    "Problem",
    "RadialSolution",
    "SlopeBlowup",
    "Solution",
    "check_bounds",
    "phi",
    "psi",
    "residual",
    "series_start",
    "solve",
    "solve_radial",
    "triangulate",
    "verify",
]

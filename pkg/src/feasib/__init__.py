"""Convex feasibility solvers built on feasible inexact projections.

The package pairs alternating (and averaged) projection schemes with a
Frank-Wolfe inner loop that computes projections inexactly but without ever
leaving the set, plus exact-projection baselines, independent test oracles
and an experiment CLI.
"""

from .bodies import (
    Ball,
    Box,
    ConvexBody,
    Ellipsoid,
    Halfspace,
    MEMBER_TOL,
    UnsupportedOracleError,
    as_vector,
)
from .condg import (
    CondGLimits,
    CondGResult,
    CondGStop,
    ForcingParams,
    condg_project,
    phi,
)
from .oracles import (
    OracleConfig,
    brute_project,
    dist_ellipse_halfspace,
    dist_two_bodies,
)
from .solvers import (
    ForcingSchedule,
    Regime,
    SolveReport,
    StopCode,
    StoppingConfig,
    acondg1,
    acondg2,
    averaged_projection,
    default_schedule,
    exact_alternating,
    schedule_update,
)

__all__ = [
    "Ball",
    "Box",
    "CondGLimits",
    "CondGResult",
    "CondGStop",
    "ConvexBody",
    "Ellipsoid",
    "ForcingParams",
    "ForcingSchedule",
    "Halfspace",
    "MEMBER_TOL",
    "OracleConfig",
    "Regime",
    "SolveReport",
    "StopCode",
    "StoppingConfig",
    "UnsupportedOracleError",
    "acondg1",
    "acondg2",
    "as_vector",
    "averaged_projection",
    "brute_project",
    "condg_project",
    "default_schedule",
    "dist_ellipse_halfspace",
    "dist_two_bodies",
    "exact_alternating",
    "phi",
    "schedule_update",
]

__version__ = "0.1.0"

"""Adaptive Hessian-barrier interior-point solvers over symmetric cones.

Minimize a smooth (possibly non-convex) objective over the intersection of a
product of symmetric cones (orthant, second-order, PSD) with an affine set
{x : A x = b}, using a first-order method (AHBA) or a cubic-regularized
second-order method (SAHBA).  Runs terminate with machine-checkable
approximate KKT certificates.
"""

from .ahba import AhbaConfig, SolveReport, ahba_restart_solve, ahba_solve
from .cones import (
    Barrier,
    ConeSpec,
    Lorentz,
    Orthant,
    Psd,
    omega,
    smat,
    svec,
)
from .cubic import CubicModel, CubicSolution, certify_global, solve_cubic
from .errors import (
    DomainError,
    MaxIterExceeded,
    NoConvergence,
    NoInitialPoint,
    NoSecondOrderOracle,
    NotInterior,
    ObjectiveFailure,
    ParseError,
    SingularModel,
    SingularSystem,
    SolverError,
    ValidationError,
)
from .io import load_problem, problem_from_dict, report_to_dict, write_report
from .kkt import (
    KKTCertificate,
    KKTVerdict,
    check_2kkt,
    check_eps_kkt,
    reduced_second_order_matrix,
)
from .metric import FeasibleSet, MetricWorkspace, bregman_div, reduce_to_nullspace
from .problem import ObjectiveOracle, Potential, Problem, analytic_center
from .sahba import SahbaConfig, sahba_solve, so_linesearch_check
from .trace import TraceBuffer, TraceRecord, write_trace_csv

__version__ = "0.1.0"

__all__ = [
    "AhbaConfig",
    "Barrier",
    "ConeSpec",
    "CubicModel",
    "CubicSolution",
    "DomainError",
    "FeasibleSet",
    "KKTCertificate",
    "KKTVerdict",
    "Lorentz",
    "MaxIterExceeded",
    "MetricWorkspace",
    "NoConvergence",
    "NoInitialPoint",
    "NoSecondOrderOracle",
    "NotInterior",
    "ObjectiveFailure",
    "ObjectiveOracle",
    "Orthant",
    "ParseError",
    "Potential",
    "Problem",
    "Psd",
    "SahbaConfig",
    "SingularModel",
    "SingularSystem",
    "SolveReport",
    "SolverError",
    "TraceBuffer",
    "TraceRecord",
    "ValidationError",
    "ahba_restart_solve",
    "ahba_solve",
    "analytic_center",
    "bregman_div",
    "certify_global",
    "check_2kkt",
    "check_eps_kkt",
    "load_problem",
    "omega",
    "problem_from_dict",
    "reduce_to_nullspace",
    "reduced_second_order_matrix",
    "report_to_dict",
    "sahba_solve",
    "smat",
    "so_linesearch_check",
    "solve_cubic",
    "svec",
    "write_report",
    "write_trace_csv",
]

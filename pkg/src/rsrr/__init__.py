"""Contour-integral eigensolver for nonlinear eigenvalue problems.

Builds an eigenspace by sampling the resolvent on a contour, projects the
problem onto it (Rayleigh-Ritz), and solves the small projected problem
with a block Hankel moment pencil. Includes the moment-scheme baseline for
comparison, benchmark problem generators, Chebyshev interpolation for
black-box matrices, and a CLI.
"""

from .contour import (Contour, EllipseContour, QuadratureSet,
                      RectangleContour, ellipse_trapezoid, rectangle_gauss,
                      scaled_basis_value)
from .driver import EigenSolution, RsrrConfig, solve_rsrr, solve_ssrr, verify_residuals
from .linalg import EigResult, SvdResult, eig_dense, numerical_rank, solve_dense, svd
from .mmio import load_matrix_market, write_matrix_market
from .problems import (NepProblem, SumFormNep, make_acoustic_1d,
                       make_biot_damped, make_gun_form, make_linear_pencil,
                       make_loaded_string)
from .reduced import (ChebyshevReducedNep, EigencountReport, MomentSet,
                      ReducedNep, SumReducedNep, count_eigenvalues,
                      extract_eigenpairs, hankel_pencil, reduced_moments,
                      solve_reduced)
from .subspace import (ProbeMatrix, SubspaceBasis, build_moment_matrix,
                       build_sampling_matrix, make_probe, orthonormal_basis,
                       vandermonde_rank_experiment)
from .chebfit import (ChebyshevMatrixPoly, chebyshev_nodes, interpolate_matrix,
                      reduce_interpolant)

__version__ = "0.1.0"

__all__ = [
    "Contour", "EllipseContour", "RectangleContour", "QuadratureSet",
    "ellipse_trapezoid", "rectangle_gauss", "scaled_basis_value",
    "EigenSolution", "RsrrConfig", "solve_rsrr", "solve_ssrr",
    "verify_residuals",
    "EigResult", "SvdResult", "eig_dense", "numerical_rank", "solve_dense",
    "svd",
    "load_matrix_market", "write_matrix_market",
    "NepProblem", "SumFormNep", "make_acoustic_1d", "make_biot_damped",
    "make_gun_form", "make_linear_pencil", "make_loaded_string",
    "ChebyshevReducedNep", "EigencountReport", "MomentSet", "ReducedNep",
    "SumReducedNep", "count_eigenvalues", "extract_eigenpairs",
    "hankel_pencil", "reduced_moments", "solve_reduced",
    "ProbeMatrix", "SubspaceBasis", "build_moment_matrix",
    "build_sampling_matrix", "make_probe", "orthonormal_basis",
    "vandermonde_rank_experiment",
    "ChebyshevMatrixPoly", "chebyshev_nodes", "interpolate_matrix",
    "reduce_interpolant",
    "__version__",
]

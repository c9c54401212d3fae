"""Periodic functional-differential systems with measure-valued delays.

The package analyzes resonance structure of the linear part, certifies
saturation-type existence conditions by sampling the resonant kernel
sphere, and computes 2 pi periodic solutions by spectral harmonic
balance with pointwise defect verification.
"""

from .errors import (AliasingError, BlockStructureError, DimensionMismatch,
                     FdeError, GridTooSmall, NotInImageError,
                     ProblemFormatError, R2ViolationError, RefinementError,
                     ScanBoundExceeded)
from .trigpoly import TrigPoly, analyze_grid, eval_grid, differentiate
from .measures import (ConstProfile, Density, MeasureMatrix, PolyProfile,
                       ScalarMeasure, SinProfile, apply_deviation,
                       matrix_transform, total_variation_bound)
from .nonlinearity import (BoundedNonlinearity, ComponentProfile, DelayTap,
                           HistoryPerturbation, PerturbationTerm,
                           nemytskii_eval, saturating)
from .problem import MatrixPolynomial, ProblemSpec, SolveConfig
from .resonance import (ConditionFlags, KernelElement, ResonanceReport,
                        ResonantMode, apply_symbol, check_linear_conditions,
                        image_defect, project_kernel, resonant_set,
                        right_inverse, right_inverse_gain, scan_bound, symbol)
from .lazer_leach import (SphereSample, SphereScan, degree_product,
                          degree_winding, gamma_convergence, gamma_tilde,
                          gamma_unit, ll_margin, small_set_measure,
                          sphere_samples, sphere_scan)
from .solver import (SolveResult, assemble_residual, coefficient_jacobian,
                     seed_kernel, solve_best, solve_periodic,
                     time_shift_gauge, verify_pointwise)
from .catalog import EXAMPLE_IDS, build_example, emit_example
from .cli import load_problem, parse_problem

__version__ = "0.1.0"

__all__ = [
    "AliasingError", "BlockStructureError", "DimensionMismatch", "FdeError",
    "GridTooSmall", "NotInImageError", "ProblemFormatError",
    "R2ViolationError", "RefinementError", "ScanBoundExceeded",
    "TrigPoly", "analyze_grid", "eval_grid", "differentiate",
    "ConstProfile", "Density", "MeasureMatrix", "PolyProfile",
    "ScalarMeasure", "SinProfile", "apply_deviation", "matrix_transform",
    "total_variation_bound",
    "BoundedNonlinearity", "ComponentProfile", "DelayTap",
    "HistoryPerturbation", "PerturbationTerm", "nemytskii_eval", "saturating",
    "MatrixPolynomial", "ProblemSpec", "SolveConfig",
    "ConditionFlags", "KernelElement", "ResonanceReport", "ResonantMode",
    "apply_symbol", "check_linear_conditions", "image_defect",
    "project_kernel", "resonant_set", "right_inverse", "right_inverse_gain",
    "scan_bound", "symbol",
    "SphereSample", "SphereScan", "degree_product", "degree_winding",
    "gamma_convergence", "gamma_tilde", "gamma_unit", "ll_margin",
    "small_set_measure", "sphere_samples", "sphere_scan",
    "SolveResult", "assemble_residual", "coefficient_jacobian", "seed_kernel",
    "solve_best", "solve_periodic", "time_shift_gauge", "verify_pointwise",
    "EXAMPLE_IDS", "build_example", "emit_example",
    "load_problem", "parse_problem",
]

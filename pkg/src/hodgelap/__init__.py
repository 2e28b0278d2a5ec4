"""Weighted Hodge Laplacians on clique complexes: operators, norm bounds, Bloch symbols."""

from .complex import (LineComplex, WeightedComplex, WeightedGraph, build_complex, face_degree,
                      line_complex, up_down_degrees)
from .cochains import Cochain, WeightedMetric, evaluate, inner_product, orientation_sign
from .hodge import (MetricOperator, adjoint, apply_laplacian_local, coboundary, codifferential,
                    compose, down_laplacian, energy_identity_check, laplacian_block,
                    normalized_block, top_reduction, up_laplacian)
from .spectral import ConvergenceError, HermitianMatrix, SpectrumResult, eig_hermitian, operator_norm
from .bounds import (BoundReport, ComparabilityConstants, certify, edge_block_bounds, form_bound,
                     schur_bound, schur_form_bound, top_bound, weighted_bound, weighted_constant)
from .coloring import (Coloring, ColoringError, color_sign, greedy_coloring, intertwine_residuals,
                       parity_check, unitary_apply)
from .bloch import PeriodicCell, bz_maximum, catalog, compare_table, sup_norm, symbol

__version__ = "0.1.0"

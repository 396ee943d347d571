"""G-Wishart normalising constants by four independent routes.

The constant C_G(delta, D) of a Gaussian graphical model on graph G is
computed exactly for chordal graphs (clique factorisation), exactly for
graphs one edge short of chordal (a one-dimensional Fourier integral),
stochastically for any graph (Monte Carlo), and by a conjectured closed
form built on positive definite completion and Isserlis matrices.  The
package's experiments compare the routes: the closed form is exact on
chordal graphs, provably wrong in general, and empirically very accurate.
"""

from .completion import (CompletionError, CompletionResult, isserlis,
                         isserlis_complement_block, isserlis_full, pd_complete)
from .constants import (WishartParams, approx_ratio, chordal_constant,
                        complete_constant, complex_chordal_constant,
                        cycle4_identity, multivariate_gammaln, path4_identity,
                        roverato_estimate, roverato_estimate_eq2,
                        stirling_rel_error, true_ratio_c4)
from .experiments import (IrisConfig, IrisRow, IrisTable, ScatterConventionError,
                          ViolinData, ViolinGraph, figure1_table, iris_table,
                          load_iris_virginica, nonchordal_graphs_4, violin_data)
from .fourier import (FourierDiagnostics, QuadratureConfig, QuadratureError,
                      beta_integral_check, fourier_constant, fourier_constant_info)
from .graphs import (CliqueDecomposition, Graph, NotChordalError,
                     PairClassification, classify_pair, clique_decomposition,
                     common_neighbor_count, graph_to_text, is_chordal,
                     maximal_cliques, parse_graph)
from .montecarlo import (DegenerateSampleError, McEstimate, mc_constant,
                         mc_replicates)
from .symmat import (LogScalar, NotPositiveDefiniteError, PerturbationEdge,
                     complex_logdet, is_positive_definite, load_matrix_csv,
                     logdet, principal_submatrix, save_matrix_csv, scatter_matrix)

__version__ = "0.1.0"

__all__ = [
    "CliqueDecomposition", "CompletionError", "CompletionResult",
    "DegenerateSampleError", "FourierDiagnostics", "Graph", "IrisConfig",
    "IrisRow", "IrisTable", "LogScalar", "McEstimate", "NotChordalError",
    "NotPositiveDefiniteError", "PairClassification", "PerturbationEdge",
    "QuadratureConfig", "QuadratureError", "ScatterConventionError",
    "ViolinData", "ViolinGraph", "WishartParams", "approx_ratio",
    "beta_integral_check", "chordal_constant", "classify_pair",
    "clique_decomposition", "common_neighbor_count", "complete_constant",
    "complex_chordal_constant", "complex_logdet", "cycle4_identity",
    "figure1_table", "fourier_constant", "fourier_constant_info",
    "graph_to_text", "iris_table", "is_chordal", "is_positive_definite",
    "isserlis", "isserlis_complement_block", "isserlis_full",
    "load_iris_virginica", "load_matrix_csv", "logdet", "maximal_cliques",
    "mc_constant", "mc_replicates", "multivariate_gammaln",
    "nonchordal_graphs_4", "parse_graph", "path4_identity", "pd_complete",
    "principal_submatrix", "roverato_estimate", "roverato_estimate_eq2",
    "save_matrix_csv", "scatter_matrix", "stirling_rel_error", "true_ratio_c4",
    "violin_data",
]

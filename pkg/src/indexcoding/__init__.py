"""Linear index coding over GF(2): minrank, the graphs G_k, vector coloring and rounding."""

__version__ = "0.1.0"

from .coloring import (Coloring, NotBipartite, PreconditionViolation, color_graph, g_exponent,
                       greedy_coloring, independent_set_minrank3, minrank_basic, two_color)
from .gf2 import (BiRepresentation, BitMatrix, MinrankResult, check_bi_representation, gf2_rank,
                  minrank_oracle, minrank_upper_from_matrix, represents)
from .gk import (LabeledGkGraph, automorphism_from_matrix, build_gk, canonical_independent_set, kappa,
                 quotient_matrix, theta_gk_complement)
from .graph import (Graph, complement, gen_bounded_minrank_instance, induced_subgraph, load_edge_list,
                    max_degree_vertex, save_edge_list)
from .index_code import (LinearIndexCode, code_from_coloring, code_from_matrix, decode_receiver, encode,
                         verify_code)
from .rounding import (AnalysisPoint, RoundingParams, analysis_functions, augmented_kms, augmented_params,
                       find_best_c, greedy_independent_set, inverse_normal_tail, kms_prime, kms_threshold,
                       normal_tail, shell_condition_margin)
from .spectral import eigenvalues_sym, quotient_spectrum_check, spectrum
from .vector_coloring import (SdpAssignment, VectorColoring, check_vector_coloring, solve_vector_coloring,
                              symmetrize_gram, tensor_combine)

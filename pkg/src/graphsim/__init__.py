"""Vertex similarity between directed graphs.

Scores come from the normalized even-iterate fixed point of
``Z <- B Z A^T + B^T Z A``, with hub/authority, central, self-similarity
and rank-one special cases, plus central-score synonym ranking over a
dictionary graph.
"""

from .generators import bowtie_graph, cycle_graph, hub_authority_graph, path_graph
from .graph import (
    DirectedGraph,
    GraphFormatError,
    ProductGraph,
    degrees,
    from_edge_list,
    is_normal,
    is_regular,
    product_graph,
    symmetrize,
    to_edge_list,
    weakly_connected_components,
)
from .linalg import (
    ConvergenceReport,
    StopReason,
    ZeroOperatorError,
    dense_projection_oracle,
    even_iterate_limit,
    frobenius_norm,
    kronecker_operator,
    one_norm,
    spectral_radius,
    spmm,
)
from .similarity import (
    FastPathMismatch,
    IterationConfig,
    ScoreKind,
    ScoreVector,
    SimilarityMatrix,
    central_scores,
    hub_authority_scores,
    rank_one_similarity,
    self_similarity,
    similarity_matrix,
    support_pattern,
)
from .synonyms import (
    DictionaryGraph,
    NeighborhoodGraph,
    SynonymRanking,
    UnknownWordError,
    build_dictionary_graph,
    neighborhood_graph,
    rank_synonyms,
)

__version__ = "0.1.0"

"""Centrality from pseudo-Hermitian continuous-time quantum walks on directed graphs."""

from .centrality import (
    CentralityScores,
    PageRankParams,
    ctqw_centrality,
    ctqw_centrality_quadrature,
    eigenvector_centrality,
    eta_ctqw_centrality,
    pagerank,
)
from .graphcore import (
    DirectedGraph,
    Hamiltonian,
    InterdependentSpec,
    WeightedGraph,
    build_interdependent,
    check_interdependent_theorem,
    complete_laplacian_direct,
    from_edge_list,
    hamiltonian,
    weights_from_hermitized,
)
from .randnet import RandomGraphSpec, generate
from .spectral import (
    build_eta,
    classify,
    decompose_evolution,
    eigen_biorthonormal,
    eta_decomposition,
    hermitize,
)
from .stats import agresti_coull, jaccard_topk, kendall_tau, run_ensemble, vigna_tau
from .walk import evolve_eta, evolve_nonunitary, kronecker_sum, trajectory

__version__ = "0.1.0"

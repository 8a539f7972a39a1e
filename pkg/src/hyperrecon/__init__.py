"""Reconstruction of heterogeneous random hypergraphs from their graph projections."""

from .cover_oracle import (
    Cover,
    DeltaProfile,
    EdgeSet,
    clique_g_closed_form,
    delta_profile,
    enumerate_covers,
    g_restricted,
    g_value,
    is_valid_cover,
    relaxation_upper_bound,
    star_g_closed_form,
)
from .estimator import CliqueSet, maximal_cliques_of_size, recover
from .exact import NEG_INF
from .harness import ExperimentConfig, SweepRow, run_sweep, run_trial
from .metrics import RecoveryReport, achievability_predicate, recovery_report
from .model import (
    DegreeClassSpec,
    Hypergraph,
    ModelParams,
    ProjectedGraph,
    edge_probability,
    project,
    sample_hypergraph,
)
from .probability import (
    ProbBounds,
    implied_prob_exact,
    mc_subgraph_prob,
    subgraph_prob_bounds,
    subgraph_prob_exact,
)

__version__ = "0.1.0"

"""Structure learning for binary pairwise Markov networks.

Pipeline: pairwise penalized likelihood-ratio screening into correlation
neighborhoods, per-variable greedy blanket search with OR/AND combination,
and a second global hill-climbing pass, all scored by logistic
pseudo-likelihood with an extended-BIC penalty. A synthetic benchmark
harness (grid/hub generators, Gibbs sampler, Hamming metrics) is included.
"""

__version__ = "0.1.0"

from .data_model import (
    BinaryDataset,
    ContingencyTable,
    UndirectedGraph,
    bfs_within,
    count_configurations,
    graph_distances,
    load_dataset,
    load_graph,
    write_dataset,
    write_graph,
)
from .evaluation import MetricsReport, aggregate, compare_graphs
from .neighborhoods import (
    PlrResult,
    SearchSpaces,
    build_search_spaces,
    plr_inclusion_report,
    plr_screen,
)
from .scoring import (
    BlanketScore,
    ScoreCache,
    ScoreConfig,
    bic_score,
    fit_logistic,
    loglik_empty,
    score_blanket,
)
from .search import (
    BlanketEstimate,
    EdgeDeltaCache,
    LearnResult,
    LearnStats,
    combine,
    iamb_blanket,
    learn_structure,
    phase1,
    phase2,
)
from .synthesis import (
    GibbsConfig,
    PairwiseModel,
    exact_joint,
    gibbs_sample,
    make_grid,
    make_hub,
    sample_potentials,
)

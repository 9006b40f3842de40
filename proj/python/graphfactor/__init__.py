"""k-factors of regular bipartite graphs via exact fractional rounding."""

from ._core import (  # noqa: F401
    BipartiteMultigraph,
    FactorSubgraph,
    FractionalMatching,
    InvariantViolation,
    LemmaMainResult,
    OracleGraph,
    ParityStat,
    RefusalError,
    ResidualReport,
    StructuralError,
    UnsupportedParameters,
    Window,
    WindowFactorResult,
    edge_color_regular_bipartite,
    enumerate_k_factors,
    gen_oracle,
    gen_random_regular_bipartite,
    graph_from_json,
    graph_to_json,
    k_factor,
    k_factor_window,
    lemma_main,
    lemma_main_window,
    make_torus,
    make_window,
    parity_obstruction_experiment,
    round_to_acyclic,
    two_factor,
    uniform_matching,
    verify_factor,
    window_residual_experiment,
)

__all__ = [name for name in dir() if not name.startswith("_")]

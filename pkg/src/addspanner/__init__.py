"""Additive graph spanners built from weak constrained shortest paths."""
from .csssp import (
    GrayEdgeSet,
    PathTree,
    oracle_budgeted_csssp,
    oracle_gshort_exists,
    oracle_gshort_min_gray,
    weak_csssp,
    weighted_weak_csssp,
)
from .graph import (
    Graph,
    GraphError,
    Params,
    build_graph,
    default_params,
    parse_edge_list,
    random_graph,
    serialize_edge_list,
)
from .spanner import (
    ClusterAssignment,
    SpannerBuild,
    chechik_baseline,
    fast_plus4,
    heavy_edge_set,
    heavy_nodes,
    lightweight_init,
    weighted_plus4,
)
from .verify import (
    StretchReport,
    check_three_neighbors_lemma,
    heavy_dist,
    size_report,
    verify_additive_stretch,
    verify_weighted_stretch,
)

__version__ = "0.1.0"

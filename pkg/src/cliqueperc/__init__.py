"""k-clique percolation community detection over maximal cliques."""
from ._jit import USING_NUMBA
from .bloom import BloomFilter
from .cliques import (
    CliqueCapExceeded,
    CliqueStore,
    clique_size_distribution,
    enumerate_k_cliques,
    enumerate_maximal_cliques,
)
from .engines import (
    Cover,
    IncidenceState,
    NaiveCapExceeded,
    RunStats,
    alg1_percolate,
    get_unvisited_adjacent_cliques,
    intersection_size_at_least,
    naive_percolate,
)
from .graph import Graph, degree, load_graph, parse_edge_list
from .harness import (
    EdgeBudget,
    GNParams,
    count_clique_graph_edges,
    equivalence_sweep,
    generate_gn,
    largest_community_proportion,
)
from .scp import scp_percolate
from .tree import CliqueTree, alg2_percolate, build_clique_tree, reset_visited, tree_search_unvisited_neighbors

__version__ = "0.1.0"

"""Synthetic networks, dataset-scale measurements and the cross-engine sweep.

All generators draw from numpy's Philox counter-based bit generator, one
uniform per candidate node pair in lexicographic pair order, so a (params,
seed) pair names a graph exactly.
"""
from __future__ import annotations

import csv
import itertools
import json
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import kernels
from .cliques import CliqueStore, enumerate_maximal_cliques
from .engines import STATS_COLUMNS, Cover, alg1_percolate, naive_percolate, _check_k
from .graph import Graph, parse_edge_list
from .scp import scp_percolate
from .tree import alg2_percolate, build_clique_tree


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def _pairs_graph(n: int, prob: np.ndarray, seed: int) -> Graph:
    iu, ju = np.triu_indices(n, 1)
    keep = _rng(seed).random(len(iu)) < prob
    return Graph.from_edges(n, np.stack([iu[keep], ju[keep]], axis=1))


@dataclass
class GNParams:
    num_communities: int
    community_size: int = 32
    p_in: float = 0.9
    p_out: float | None = None  # None: one expected external neighbour per node
    seed: int = 0

    def __post_init__(self):
        if self.p_out is None:
            outside = (self.num_communities - 1) * self.community_size
            self.p_out = min(1.0 / outside, self.p_in) if outside else 0.0
        if self.community_size < 2:
            raise ValueError("community_size must be >= 2")
        if not 0.0 <= self.p_out <= self.p_in <= 1.0:
            raise ValueError("need 0 <= p_out <= p_in <= 1")


def generate_gn(params: GNParams) -> Graph:
    """Planted partition: equal blocks, within-block pairs kept with p_in, cross-block with p_out."""
    n = params.num_communities * params.community_size
    block = np.arange(n) // params.community_size
    iu, ju = np.triu_indices(n, 1)
    prob = np.where(block[iu] == block[ju], params.p_in, params.p_out)
    return _pairs_graph(n, prob, params.seed)


def generate_er(n: int, p: float, seed: int) -> Graph:
    return _pairs_graph(n, np.full(n * (n - 1) // 2, p), seed)


def generate_planted_cliques(
    n: int, n_groups: int, size_range: tuple[int, int] = (5, 15), edge_drop: float = 0.1, seed: int = 0
) -> Graph:
    """Random intersection graph: each group is a random node subset made complete, then
    each edge is deleted with probability ``edge_drop``. Heavy group overlap plus
    missing edges produce many overlapping maximal cliques."""
    rng = _rng(seed)
    lo, hi = size_range
    edges = set()
    for _ in range(n_groups):
        size = int(rng.integers(lo, hi + 1))
        members = np.sort(rng.choice(n, size=size, replace=False)).tolist()
        edges.update(itertools.combinations(members, 2))
    e = np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
    e = e[rng.random(len(e)) >= edge_drop]
    return Graph.from_edges(n, e)


# --- fixtures ----------------------------------------------------------------------------


def k6_minus_two_edges() -> Graph:
    """K6 on 0..5 without edges (0,1) and (2,3): four maximal 4-cliques."""
    e = [p for p in itertools.combinations(range(6), 2) if p not in ((0, 1), (2, 3))]
    return Graph.from_edges(6, e)


def bowtie() -> Graph:
    return Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])


def triangle() -> Graph:
    return parse_edge_list("0 1\n1 2\n2 0\n")


def non_composable_fixture() -> Graph:
    """A percolated 4-clique ring plus an outside 4-clique that must stay separate.

    Nodes 0..8 each link to every node within ring distance 3, so the nine
    sliding windows {i, i+1, i+2, i+3} (mod 9) form one 4-clique community. The
    triangle {0, 3, 6} lies inside that community's node set but inside none of
    its 4-cliques. Node 9 completes it to the 4-clique {0, 3, 6, 9}, which
    shares only 3 nodes with the ring as a set, never with any single window.
    """
    ring = [(a, b) for a, b in itertools.combinations(range(9), 2) if min((b - a) % 9, (a - b) % 9) <= 3]
    return Graph.from_edges(10, ring + [(0, 9), (3, 9), (6, 9)])


def brute_force_communities(g: Graph, k: int) -> list[tuple[int, ...]]:
    """k-clique communities straight from the definition: all k-subsets, joined on k-1 overlaps."""
    adj = g.adjacency_sets()
    kc = [c for c in itertools.combinations(range(g.node_count), k) if all(b in adj[a] for a, b in itertools.combinations(c, 2))]
    parent = list(range(len(kc)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in itertools.combinations(range(len(kc)), 2):
        if len(set(kc[i]) & set(kc[j])) == k - 1:
            parent[find(i)] = find(j)
    groups: dict[int, set[int]] = {}
    for i, c in enumerate(kc):
        groups.setdefault(find(i), set()).update(c)
    return sorted(tuple(sorted(s)) for s in groups.values())


# --- measurements -------------------------------------------------------------------------


@dataclass
class EdgeBudget:
    max_pairs: int | None = None
    max_duration: float | None = None  # seconds

    def __post_init__(self):
        if self.max_pairs is None and self.max_duration is None:
            raise ValueError("EdgeBudget needs max_pairs or max_duration")


def count_clique_graph_edges(
    store: CliqueStore, k: int, budget: EdgeBudget, chunk_rows: int = 256
) -> tuple[int, bool]:
    """Edges of the maximal-clique graph thresholded at overlap k-1, over cliques of size >= k.

    Returns ``(count, exact)``. When the budget runs out the count is a lower bound.
    """
    _check_k(k)
    deadline = None if budget.max_duration is None else time.perf_counter() + budget.max_duration
    pairs_left = np.iinfo(np.int64).max if budget.max_pairs is None else int(budget.max_pairs)
    stamp = np.zeros(len(store), dtype=np.int64)
    total = 0
    for row0 in range(0, len(store), chunk_rows):
        if deadline is not None and time.perf_counter() > deadline:
            return total, False
        row1 = min(row0 + chunk_rows, len(store))
        edges, pairs, hit = kernels.count_overlap_edges(
            store.ptr, store.nodes, store.sizes, store.node_ptr, store.node_cliques, k, row0, row1, pairs_left, stamp
        )
        total += int(edges)
        pairs_left -= int(pairs)
        if hit:
            return total, False
    return total, True


def largest_community_proportion(cover: Cover) -> float:
    """Share of community-assigned nodes that belong to the largest community."""
    if len(cover) == 0:
        raise ValueError("largest-community proportion is undefined for an empty cover")
    union = np.unique(np.concatenate(cover.node_sets))
    return max(len(s) for s in cover.node_sets) / len(union)


# --- cross-engine sweep ----------------------------------------------------------------------

ENGINES = ("naive", "alg1", "alg2", "scp")


@dataclass
class Mismatch:
    network: str
    k: int
    families: dict[str, list]
    witness_edges: list[tuple[str, str]] = field(default_factory=list)


@dataclass
class SweepReport:
    rows: list[dict] = field(default_factory=list)
    mismatches: list[Mismatch] = field(default_factory=list)
    forest_violations: list[dict] = field(default_factory=list)
    families: dict[int, list] = field(default_factory=dict)  # k -> agreed node family
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.forest_violations

    def merge(self, other: "SweepReport") -> None:
        self.rows += other.rows
        self.mismatches += other.mismatches
        self.forest_violations += other.forest_violations

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.DictWriter(fh, fieldnames=STATS_COLUMNS)
            w.writeheader()
            w.writerows(self.rows)

    def write_json(self, path) -> None:
        doc = {
            "meta": self.meta,
            "ok": self.ok,
            "mismatches": [asdict(m) for m in self.mismatches],
            "forest_violations": self.forest_violations,
        }
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, default=str)


def _families_at(g: Graph, k: int) -> tuple[dict[str, list], list]:
    store = enumerate_maximal_cliques(g, min_size=3)
    runs = []
    if store.max_size >= k:
        runs.append(naive_percolate(store, k))
        runs.append(alg1_percolate(store, k))
        runs.append(alg2_percolate(build_clique_tree(store), store, k))
    else:
        runs += [(Cover(k, np.zeros(0, np.int64), [], []), None)] * 3
    res = scp_percolate(g, k)
    runs.append((res.cover, res.stats))
    return {name: cov.node_family() for name, (cov, _) in zip(ENGINES, runs)}, [st for _, st in runs]


def _disagree(fams: dict[str, list]) -> bool:
    ref = fams["naive"]
    return any(f != ref for f in fams.values())


def minimize_witness(g: Graph, k: int) -> Graph:
    """Greedily delete nodes while the engines still disagree at ``k``."""
    cur = g
    changed = True
    while changed:
        changed = False
        for v in range(cur.node_count):
            sub = cur.subgraph(u for u in range(cur.node_count) if u != v)
            if _disagree(_families_at(sub, k)[0]):
                cur = sub
                changed = True
                break
    return cur


def sweep_graphs(er: int = 200, er_max_nodes: int = 30, gn_graphs: int = 50, seed: int = 0):
    """The seeded graph family used by the cross-engine sweep: ``(name, graph, params)`` triples.

    Erdos-Renyi graphs cycle p over 0.2/0.4/0.6 with 8..er_max_nodes nodes; the
    planted-partition graphs use 2..8 blocks of 8 nodes.
    """
    probs = (0.2, 0.4, 0.6)
    for i in range(er):
        n = 8 + (i * 7) % (er_max_nodes - 7)
        p = probs[i % 3]
        yield f"er-n{n}-p{p}-s{seed + i}", generate_er(n, p, seed + i), {"n": n, "p": p, "seed": seed + i}
    for i in range(gn_graphs):
        params = GNParams(2 + i % 7, 8, 0.8, 0.05, seed=seed + i)
        yield f"gn-{params.num_communities}x8-s{params.seed}", generate_gn(params), asdict(params)


def equivalence_sweep(g: Graph, k_range=None, network: str = "graph", minimize: bool = True) -> SweepReport:
    """Run all four engines for every k and compare node-community families.

    ``k_range`` defaults to 3..largest clique size. Disagreements are recorded
    (with a node-minimal witness subgraph) rather than raised.
    """
    report = SweepReport()
    store = enumerate_maximal_cliques(g, min_size=3)
    if k_range is None:
        k_range = range(3, store.max_size + 1)
    tree = build_clique_tree(store) if len(store) else None
    for k in k_range:
        results = {}
        if len(store):
            results["naive"] = naive_percolate(store, k)
            results["alg1"] = alg1_percolate(store, k)
            tree.reset_visited()
            results["alg2"] = alg2_percolate(tree, store, k)
        else:
            empty = Cover(k, np.zeros(0, np.int64), [], [])
            for name in ("naive", "alg1", "alg2"):
                results[name] = (empty, None)
        scp = scp_percolate(g, k)
        results["scp"] = (scp.cover, scp.stats)
        fams = {name: cov.node_family() for name, (cov, _) in results.items()}
        report.families[k] = fams["naive"]
        for name, (_, st) in results.items():
            if st is None:
                continue
            report.rows.append(st.row(network))
            if not st.spanning_forest_ok():
                report.forest_violations.append({"network": network, "k": k, "algorithm": name})
        if _disagree(fams):
            w = minimize_witness(g, k) if minimize else g
            witness = [(w.labels[u], w.labels[v]) for u, v in w.edges().tolist()]
            report.mismatches.append(Mismatch(network, k, fams, witness))
    return report

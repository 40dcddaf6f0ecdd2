"""k-clique percolation over maximal cliques: the overlap-matrix oracle and the
incidence-list expansion engine."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from . import kernels
from .cliques import CliqueStore

DEFAULT_NAIVE_CAP = 20000

STATS_COLUMNS = (
    "network", "k", "algorithm", "cliques", "components", "successful_tests", "failed_tests",
    "candidate_pairs", "elapsed_ms", "internal_probes", "leaf_tests", "bloom_bits_total",
)


class NaiveCapExceeded(RuntimeError):
    def __init__(self, n_cliques: int, cap: int):
        super().__init__(f"naive-cap exceeded: {n_cliques} cliques > {cap}")
        self.cap_name = "naive-cap"
        self.cap = cap


@dataclass
class Cover:
    """One percolation result.

    ``component_of[i]`` is the community of clique ``i`` or -1 when the clique
    is smaller than ``k``. Communities partition the assigned cliques; their
    node sets may overlap.
    """

    k: int
    component_of: np.ndarray
    communities: list[np.ndarray]
    node_sets: list[np.ndarray]

    def __len__(self) -> int:
        return len(self.communities)

    def node_family(self) -> list[tuple[int, ...]]:
        """Community node sets as a sorted list of tuples (a multiset, order-free)."""
        return sorted(tuple(s.tolist()) for s in self.node_sets)

    @property
    def assigned(self) -> int:
        return int((self.component_of >= 0).sum())


@dataclass
class RunStats:
    algorithm: str
    k: int
    cliques: int = 0
    successful_tests: int = 0
    failed_tests: int = 0
    candidate_pairs: int = 0
    components: int = 0
    assigned_cliques: int = 0
    elapsed: float = 0.0
    internal_probes: int | None = None
    leaf_tests: int | None = None
    bloom_bits_total: int | None = None
    extra: dict = field(default_factory=dict)

    def spanning_forest_ok(self) -> bool:
        return self.successful_tests == self.assigned_cliques - self.components

    def row(self, network: str) -> dict:
        def opt(x):
            return "" if x is None else x

        return {
            "network": network,
            "k": self.k,
            "algorithm": self.algorithm,
            "cliques": self.cliques,
            "components": self.components,
            "successful_tests": self.successful_tests,
            "failed_tests": self.failed_tests,
            "candidate_pairs": self.candidate_pairs,
            "elapsed_ms": f"{self.elapsed * 1000:.3f}",
            "internal_probes": opt(self.internal_probes),
            "leaf_tests": opt(self.leaf_tests),
            "bloom_bits_total": opt(self.bloom_bits_total),
        }


def _check_k(k: int) -> None:
    if k < 3:
        raise ValueError(f"k={k}: k-clique percolation needs k >= 3 (use connected components for k=2)")


def build_cover(k: int, component_of: np.ndarray, n_components: int, ptr: np.ndarray, nodes: np.ndarray) -> Cover:
    component_of = np.asarray(component_of, dtype=np.int64)
    assigned = np.flatnonzero(component_of >= 0)
    order = assigned[np.argsort(component_of[assigned], kind="stable")]
    bounds = np.searchsorted(component_of[order], np.arange(n_components + 1))
    communities, node_sets = [], []
    for c in range(n_components):
        members = order[bounds[c] : bounds[c + 1]]
        communities.append(members)
        if len(members):
            node_sets.append(np.unique(np.concatenate([nodes[ptr[i] : ptr[i + 1]] for i in members])))
        else:
            node_sets.append(np.zeros(0, dtype=np.int64))
    return Cover(k, component_of, communities, node_sets)


def intersection_size_at_least(a, b, threshold: int) -> tuple[bool, int | None]:
    """``(|a & b| >= threshold, exact size or None if the merge stopped early)`` for sorted arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    cnt, exact = kernels.overlap_at_least(a, 0, len(a), b, 0, len(b), threshold)
    return bool(cnt >= threshold), (int(cnt) if exact else None)


def naive_percolate(store: CliqueStore, k: int, cap: int = DEFAULT_NAIVE_CAP) -> tuple[Cover, RunStats]:
    """Build the full clique-clique overlap matrix, threshold at k-1, take components.

    Reference oracle. Successful tests are counted as the edges of a spanning
    forest of the thresholded overlap graph.
    """
    _check_k(k)
    if len(store) > cap:
        raise NaiveCapExceeded(len(store), cap)
    t0 = time.perf_counter()
    eligible = np.flatnonzero(store.sizes >= k)
    n = len(eligible)
    stats = RunStats("naive", k, cliques=len(store))
    component_of = np.full(len(store), -1, dtype=np.int64)
    n_comp = 0
    if n:
        rows = np.repeat(np.arange(n), store.sizes[eligible])
        cols = np.concatenate([store[i] for i in eligible])
        B = sparse.csr_matrix((np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(n, store.n_nodes))
        overlap = sparse.triu(B @ B.T, k=1).tocoo()
        hit = overlap.data >= k - 1
        adj = sparse.csr_matrix(
            (np.ones(int(hit.sum()), dtype=np.int8), (overlap.row[hit], overlap.col[hit])), shape=(n, n)
        )
        n_comp, labels = csgraph.connected_components(adj, directed=False)
        forest = csgraph.minimum_spanning_tree(adj)
        # relabel components in order of their smallest clique index
        first = np.full(n_comp, n, dtype=np.int64)
        np.minimum.at(first, labels, np.arange(n))
        rank = np.empty(n_comp, dtype=np.int64)
        rank[np.argsort(first)] = np.arange(n_comp)
        component_of[eligible] = rank[labels]
        pairs = n * (n - 1) // 2
        stats.candidate_pairs = pairs
        stats.successful_tests = int(forest.nnz)
        stats.failed_tests = pairs - adj.nnz
        stats.extra["percolating_pairs"] = int(adj.nnz)
    cover = build_cover(k, component_of, n_comp, store.ptr, store.nodes)
    stats.components = n_comp
    stats.assigned_cliques = n
    stats.elapsed = time.perf_counter() - t0
    return cover, stats


def alg1_percolate(store: CliqueStore, k: int) -> tuple[Cover, RunStats]:
    """Expand components clique by clique, drawing candidate neighbours only from
    the incidence lists of the current clique's nodes and deleting visited
    cliques from those lists."""
    _check_k(k)
    if store.min_size > k:
        raise ValueError(f"store built with min_size={store.min_size} > k={k}")
    t0 = time.perf_counter()
    comp, n_comp, succ, fail = kernels.alg1_run(store.ptr, store.nodes, store.sizes, store.n_nodes, k)
    cover = build_cover(k, comp, int(n_comp), store.ptr, store.nodes)
    stats = RunStats(
        "alg1", k, cliques=len(store), successful_tests=int(succ), failed_tests=int(fail),
        candidate_pairs=int(succ + fail), components=int(n_comp), assigned_cliques=cover.assigned,
    )
    stats.elapsed = time.perf_counter() - t0
    return cover, stats


class IncidenceState:
    """Mutable per-run copy of the node -> cliques map, for stepping the expansion by hand."""

    def __init__(self, store: CliqueStore, k: int):
        self.store = store
        self.k = k
        eligible = store.sizes >= k
        self.start, self.length, self.inc, self.pos = kernels.build_incidence(
            store.ptr, store.nodes, eligible, store.n_nodes
        )
        self.visited = np.zeros(len(store), dtype=bool)
        self._stamp = np.zeros(len(store), dtype=np.int64)
        self._token = 0
        self._buf = np.empty(len(store), dtype=np.int64)

    def visit(self, c: int) -> None:
        if not self.visited[c]:
            self.visited[c] = True
            kernels.remove_clique(c, self.store.ptr, self.store.nodes, self.start, self.length, self.inc, self.pos)

    def incidence(self, v: int) -> np.ndarray:
        return self.inc[self.start[v] : self.start[v] + self.length[v]]


def get_unvisited_adjacent_cliques(current: int, state: IncidenceState) -> list[int]:
    state._token += 1
    s = state.store
    n = kernels.unvisited_adjacent(
        current, s.ptr, s.nodes, state.start, state.length, state.inc, state._stamp, state._token, state._buf
    )
    return state._buf[:n].tolist()


def format_cover(cover: Cover, labels: Sequence[str]) -> str:
    """``k<TAB>community_id<TAB>labels`` per community, labels sorted."""
    return "".join(
        f"{cover.k}\t{cid}\t{' '.join(sorted(labels[v] for v in ns.tolist()))}\n"
        for cid, ns in enumerate(cover.node_sets)
    )

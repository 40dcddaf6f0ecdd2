"""Binary tree over maximal cliques with per-subtree node-set summaries.

Tree nodes live in heap layout: node ``t`` has children ``2t+1`` and ``2t+2``.
With ``L`` leaves there are ``L-1`` internal nodes and leaves occupy indices
``L-1 .. 2L-2``. Cliques are assigned to leaves in left-to-right order after
sorting their member arrays lexicographically, so neighbouring leaves tend to
share nodes and subtree unions stay small.
"""
from __future__ import annotations

import time

import numpy as np

from . import kernels
from .bloom import bit_positions, hash_pair, optimal_bits, optimal_hashes
from .cliques import CliqueStore
from .engines import Cover, RunStats, _check_k, build_cover

EXACT_UNION_LIMIT = 16

LEAF, EXACT, BLOOM = 0, 1, 2


class EmptyTreeError(ValueError):
    pass


def _leaves_left_to_right(n_leaves: int) -> np.ndarray:
    """Heap indices of the leaves in in-order (left-to-right) sequence."""
    first = n_leaves - 1
    out = []
    stack = [0]
    while stack:
        t = stack.pop()
        if t >= first:
            out.append(t)
        else:
            stack.append(2 * t + 2)
            stack.append(2 * t + 1)
    return np.array(out, dtype=np.int64)


class CliqueTree:
    def __init__(self, store: CliqueStore, fpr: float = 0.01, exact_limit: int = EXACT_UNION_LIMIT):
        if len(store) == 0:
            raise EmptyTreeError("cannot build a clique tree over an empty store")
        if not 0.0 < fpr < 1.0:
            raise ValueError("fpr must lie in (0, 1)")
        self.store = store
        self.fpr = fpr
        L = len(store)
        self.n_leaves = L
        self.n_internal = L - 1
        n_tree = 2 * L - 1

        # CliqueStore is already lexicographic, so clique order == leaf order
        leaf_order = sorted(range(L), key=lambda i: store[i].tolist())
        heap_leaves = _leaves_left_to_right(L)
        self.tree_clique = np.full(n_tree, -1, dtype=np.int64)
        self.tree_clique[heap_leaves] = leaf_order
        self.leaf_of = np.empty(L, dtype=np.int64)
        self.leaf_of[leaf_order] = heap_leaves

        self.kind = np.zeros(n_tree, dtype=np.int8)
        self.union_size = np.zeros(n_tree, dtype=np.int64)
        ex_sizes = np.zeros(max(L - 1, 0) + 1, dtype=np.int64)
        self.bl_off = np.zeros(n_tree, dtype=np.int64)
        self.bl_m = np.zeros(n_tree, dtype=np.int64)
        self.bl_h = np.zeros(n_tree, dtype=np.int64)

        unions: dict[int, np.ndarray] = {}
        exact_parts: list[tuple[int, np.ndarray]] = []
        bloom_parts: list[np.ndarray] = []
        bloom_bytes = 0
        h1_all, h2_all = hash_pair(np.arange(store.n_nodes))
        for t in range(n_tree - 1, -1, -1):
            if t >= L - 1:
                unions[t] = store[self.tree_clique[t]]
                self.union_size[t] = len(unions[t])
                continue
            u = np.union1d(unions.pop(2 * t + 1), unions.pop(2 * t + 2))
            unions[t] = u
            self.union_size[t] = len(u)
            if len(u) < exact_limit:
                self.kind[t] = EXACT
                ex_sizes[t] = len(u)
                exact_parts.append((t, u))
            else:
                self.kind[t] = BLOOM
                m = optimal_bits(len(u), fpr)
                h = optimal_hashes(m, len(u))
                pos = bit_positions(h1_all[u], h2_all[u], m, h).reshape(-1)
                bits = np.zeros(m, dtype=bool)
                bits[pos] = True
                packed = np.packbits(bits, bitorder="little")
                self.bl_off[t] = bloom_bytes
                self.bl_m[t] = m
                self.bl_h[t] = h
                bloom_bytes += len(packed)
                bloom_parts.append(packed)

        # exact summaries indexed by internal node id
        self.ex_ptr = np.zeros(max(L - 1, 0) + 1, dtype=np.int64)
        np.cumsum(ex_sizes[: L - 1], out=self.ex_ptr[1:])
        self.ex_nodes = np.zeros(int(self.ex_ptr[-1]), dtype=np.int64)
        for t, u in exact_parts:
            self.ex_nodes[self.ex_ptr[t] : self.ex_ptr[t + 1]] = u
        self.bits = np.concatenate(bloom_parts) if bloom_parts else np.zeros(1, dtype=np.uint8)
        self.h1, self.h2 = h1_all, h2_all
        self.visited = np.zeros(n_tree, dtype=np.uint8)
        self._stack = np.empty(256, dtype=np.int64)
        self._out = np.empty(L, dtype=np.int64)

    @property
    def n_tree(self) -> int:
        return 2 * self.n_leaves - 1

    @property
    def height(self) -> int:
        return int(np.floor(np.log2(self.n_tree))) if self.n_tree > 1 else 0

    @property
    def bloom_bits_total(self) -> int:
        return int(self.bl_m.sum())

    def is_leaf(self, t: int) -> bool:
        return t >= self.n_leaves - 1

    def summary_contains(self, t: int, v: int) -> bool:
        """Membership query against the summary at tree node ``t`` (exact for leaves and small unions)."""
        if self.is_leaf(t):
            c = self.store[self.tree_clique[t]]
            return bool(np.isin(v, c))
        if self.kind[t] == EXACT:
            return bool(np.isin(v, self.ex_nodes[self.ex_ptr[t] : self.ex_ptr[t + 1]]))
        return bool(
            kernels.bloom_contains(self.bits, self.bl_off[t], self.bl_m[t], self.bl_h[t], self.h1[v], self.h2[v])
        )

    def overlap_estimate(self, t: int, clique) -> int:
        """Count of ``clique`` members reported present in node ``t``'s summary (no early exit)."""
        return sum(self.summary_contains(t, v) for v in np.asarray(clique).tolist())

    def mark_visited(self, clique_index: int) -> None:
        kernels.mark_visited(self.leaf_of[clique_index], self.visited)

    def reset_visited(self) -> None:
        self.visited[:] = 0

    def _arrays(self):
        return (
            self.kind, self.ex_ptr, self.ex_nodes, self.bl_off, self.bl_m, self.bl_h, self.bits, self.h1, self.h2,
        )


def build_clique_tree(store: CliqueStore, fpr_target: float = 0.01) -> CliqueTree:
    return CliqueTree(store, fpr_target)


def reset_visited(tree: CliqueTree) -> None:
    tree.reset_visited()


def tree_search_unvisited_neighbors(
    tree: CliqueTree, current: int, k: int, counters: np.ndarray | None = None
) -> list[int]:
    """Unvisited cliques overlapping clique ``current`` in at least k-1 nodes.

    Found cliques are marked visited (flags propagate upward).
    """
    _check_k(k)
    if counters is None:
        counters = np.zeros(2, dtype=np.int64)
    s = tree.store
    n = kernels.tree_search(
        current, k, s.ptr, s.nodes, tree.n_leaves, tree.tree_clique, *tree._arrays(),
        tree.visited, tree._stack, tree._out, counters,
    )
    return sorted(tree._out[:n].tolist())


def alg2_percolate(tree: CliqueTree, store: CliqueStore, k: int) -> tuple[Cover, RunStats]:
    """Component expansion using pruned tree descent to find unvisited neighbours.

    The tree must have all flags clear; call ``reset_visited`` between runs.
    """
    _check_k(k)
    if tree.store is not store:
        raise ValueError("tree was built over a different CliqueStore")
    if store.min_size > k:
        raise ValueError(f"store built with min_size={store.min_size} > k={k}")
    if tree.visited.any():
        raise ValueError("tree has visited flags set; call reset_visited(tree) first")
    t0 = time.perf_counter()
    comp, n_comp, succ, probes, leaf_tests = kernels.alg2_run(
        k, store.ptr, store.nodes, store.sizes, tree.n_leaves, tree.tree_clique, tree.leaf_of,
        *tree._arrays(), tree.visited,
    )
    cover = build_cover(k, comp, int(n_comp), store.ptr, store.nodes)
    stats = RunStats(
        "alg2", k, cliques=len(store), successful_tests=int(succ), failed_tests=int(leaf_tests - succ),
        candidate_pairs=int(leaf_tests), components=int(n_comp), assigned_cliques=cover.assigned,
        internal_probes=int(probes), leaf_tests=int(leaf_tests), bloom_bits_total=tree.bloom_bits_total,
    )
    stats.elapsed = time.perf_counter() - t0
    return cover, stats

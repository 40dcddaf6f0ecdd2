"""Maximal clique and k-clique enumeration."""
from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

import numpy as np

from .graph import Graph

DEFAULT_CLIQUE_CAP = 10**8


class CliqueCapExceeded(RuntimeError):
    """Enumeration produced more cliques than the configured cap."""

    def __init__(self, cap_name: str, cap: int):
        super().__init__(f"{cap_name} exceeded ({cap})")
        self.cap_name = cap_name
        self.cap = cap


class CliqueStore:
    """Maximal cliques as one flat CSR array plus per-node incidence lists.

    Clique ``i`` is ``nodes[ptr[i]:ptr[i+1]]`` (ascending ids). Cliques are
    kept in lexicographic order of their member arrays.
    """

    def __init__(self, cliques: Iterable[Sequence[int]], n_nodes: int, min_size: int = 1):
        cl = sorted(tuple(sorted(c)) for c in cliques)
        self.n_nodes = n_nodes
        self.min_size = min_size
        self.sizes = np.array([len(c) for c in cl], dtype=np.int64)
        self.ptr = np.zeros(len(cl) + 1, dtype=np.int64)
        np.cumsum(self.sizes, out=self.ptr[1:])
        self.nodes = np.fromiter((v for c in cl for v in c), dtype=np.int64, count=int(self.ptr[-1]))
        owner = np.repeat(np.arange(len(cl), dtype=np.int64), self.sizes)
        order = np.argsort(self.nodes, kind="stable")
        self.node_cliques = owner[order]
        self.node_ptr = np.zeros(n_nodes + 1, dtype=np.int64)
        np.cumsum(np.bincount(self.nodes, minlength=n_nodes), out=self.node_ptr[1:])
        for a in (self.sizes, self.ptr, self.nodes, self.node_cliques, self.node_ptr):
            a.setflags(write=False)

    def __len__(self) -> int:
        return len(self.sizes)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.nodes[self.ptr[i] : self.ptr[i + 1]]

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def as_tuples(self) -> list[tuple[int, ...]]:
        return [tuple(c.tolist()) for c in self]

    def node_incidence(self, v: int) -> np.ndarray:
        return self.node_cliques[self.node_ptr[v] : self.node_ptr[v + 1]]

    @property
    def max_size(self) -> int:
        return int(self.sizes.max()) if len(self) else 0


def degeneracy_order(adj: list[set[int]]) -> list[int]:
    """Repeatedly remove a minimum-degree vertex (bucket queue)."""
    n = len(adj)
    deg = [len(a) for a in adj]
    buckets: list[set[int]] = [set() for _ in range(max(deg, default=0) + 1)]
    for v, d in enumerate(deg):
        buckets[d].add(v)
    removed = [False] * n
    order = []
    d = 0
    for _ in range(n):
        d = max(d - 1, 0)
        while not buckets[d]:
            d += 1
        v = min(buckets[d])  # deterministic tie-break
        buckets[d].discard(v)
        removed[v] = True
        order.append(v)
        for u in adj[v]:
            if not removed[u]:
                buckets[deg[u]].discard(u)
                deg[u] -= 1
                buckets[deg[u]].add(u)
    return order


def iter_maximal_cliques(g: Graph, min_size: int = 1, cap: int = DEFAULT_CLIQUE_CAP):
    """Yield maximal cliques of size >= min_size as ascending tuples (Bron-Kerbosch, pivoting)."""
    if min_size < 1:
        raise ValueError("min_size must be >= 1")
    adj = g.adjacency_sets()
    emitted = 0

    def expand(R: list[int], P: set[int], X: set[int]):
        nonlocal emitted
        if not P:
            if not X and len(R) >= min_size:
                emitted += 1
                if emitted > cap:
                    raise CliqueCapExceeded("clique-cap", cap)
                yield tuple(sorted(R))
            return
        if len(R) + len(P) < min_size:
            return
        # pivot maximises |P & N(u)|; ties broken by lowest id
        pivot = max(sorted(P | X), key=lambda u: len(P & adj[u]))
        for v in sorted(P - adj[pivot]):
            nv = adj[v]
            R.append(v)
            yield from expand(R, P & nv, X & nv)
            R.pop()
            P.discard(v)
            X.add(v)

    order = degeneracy_order(adj)
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        later = {u for u in adj[v] if position[u] > position[v]}
        earlier = adj[v] - later
        yield from expand([v], later, earlier)


def enumerate_maximal_cliques(g: Graph, min_size: int = 1, cap: int = DEFAULT_CLIQUE_CAP) -> CliqueStore:
    return CliqueStore(iter_maximal_cliques(g, min_size, cap), g.node_count, min_size)


def enumerate_k_cliques(g: Graph, k: int, cap: int = DEFAULT_CLIQUE_CAP) -> np.ndarray:
    """All k-node complete subgraphs as rows of a (count, k) array, in lexicographic order.

    Each clique is generated once by extending only through higher-id neighbours.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    fwd = [sorted(u for u in g.neighbors(v).tolist() if u > v) for v in range(g.node_count)]
    fwd_sets = [set(f) for f in fwd]
    out: list[tuple[int, ...]] = []

    def extend(prefix: list[int], cand: list[int]):
        if len(prefix) == k:
            if len(out) >= cap:
                raise CliqueCapExceeded("clique-cap", cap)
            out.append(tuple(prefix))
            return
        need = k - len(prefix)
        for i, u in enumerate(cand):
            if len(cand) - i < need:
                break
            prefix.append(u)
            extend(prefix, [w for w in cand[i + 1 :] if w in fwd_sets[u]])
            prefix.pop()

    for v in range(g.node_count):
        if len(fwd[v]) >= k - 1:
            extend([v], fwd[v])
    return np.array(out, dtype=np.int64).reshape(len(out), k)


def clique_size_distribution(cliques) -> dict[int, int]:
    """Histogram size -> count for a CliqueStore, a (count, k) array, or any list of cliques."""
    if isinstance(cliques, CliqueStore):
        sizes = cliques.sizes.tolist()
    elif isinstance(cliques, np.ndarray) and cliques.ndim == 2:
        sizes = [cliques.shape[1]] * cliques.shape[0]
    else:
        sizes = [len(c) for c in cliques]
    return dict(sorted(Counter(sizes).items()))


def format_cliques(store: CliqueStore, labels: Sequence[str]) -> str:
    return "".join(" ".join(sorted(labels[v] for v in c.tolist())) + "\n" for c in store)

"""Undirected simple graphs over dense integer node ids."""
from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class EdgeListParseError(ValueError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: expected 2 tokens, got {len(line.split())}: {line!r}")
        self.lineno = lineno


@dataclass
class ParseReport:
    lines: int = 0
    comments: int = 0
    duplicate_edges: int = 0
    self_loops: int = 0


@dataclass(eq=False)
class Graph:
    """Immutable CSR adjacency. ``indices[indptr[v]:indptr[v+1]]`` is strictly ascending."""

    indptr: np.ndarray
    indices: np.ndarray
    labels: list[str]
    report: ParseReport | None = field(default=None, repr=False)

    def __post_init__(self):
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self._label_to_id = {lab: i for i, lab in enumerate(self.labels)}

    @classmethod
    def from_edges(cls, n: int, edges, labels: Sequence[str] | None = None) -> "Graph":
        """Build from an (m, 2) array of node ids. Self-loops and duplicates are dropped."""
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e) and (e.min() < 0 or e.max() >= n):
            raise IndexError("edge endpoint out of range")
        e = e[e[:, 0] != e[:, 1]]
        both = np.concatenate([e, e[:, ::-1]])
        if len(both):
            both = np.unique(both, axis=0)  # sorts by (src, dst)
        counts = np.bincount(both[:, 0], minlength=n) if len(both) else np.zeros(n, np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        indices = np.ascontiguousarray(both[:, 1], dtype=np.int64) if len(both) else np.zeros(0, np.int64)
        if labels is None:
            labels = [str(i) for i in range(n)]
        return cls(indptr, indices, list(labels))

    @property
    def node_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def has_edge(self, u: int, v: int) -> bool:
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < len(nb) and nb[i] == v)

    def edges(self) -> np.ndarray:
        """(m, 2) array of edges with u < v, lexicographically sorted."""
        src = np.repeat(np.arange(self.node_count, dtype=np.int64), self.degrees())
        keep = src < self.indices
        return np.stack([src[keep], self.indices[keep]], axis=1)

    def id_of(self, label: str) -> int:
        return self._label_to_id[label]

    def label_of(self, v: int) -> str:
        return self.labels[v]

    def adjacency_sets(self) -> list[set[int]]:
        return [set(self.neighbors(v).tolist()) for v in range(self.node_count)]

    def subgraph(self, nodes: Iterable[int]) -> "Graph":
        """Induced subgraph; node order follows ``sorted(nodes)``, labels kept."""
        keep = np.array(sorted(set(nodes)), dtype=np.int64)
        remap = np.full(self.node_count, -1, dtype=np.int64)
        remap[keep] = np.arange(len(keep))
        e = self.edges()
        if len(e):
            e = remap[e]
            e = e[(e >= 0).all(axis=1)]
        return Graph.from_edges(len(keep), e, [self.labels[i] for i in keep])


def degree(g: Graph, v: int) -> int:
    if not 0 <= v < g.node_count:
        raise IndexError(f"node {v} out of range for graph with {g.node_count} nodes")
    return int(g.indptr[v + 1] - g.indptr[v])


def parse_edge_list(source) -> Graph:
    """Parse whitespace-separated edge-list text (bytes, str, or a binary/text stream).

    Lines starting with ``#`` are comments. Labels get dense ids in order of
    first appearance. Duplicate edges and self-loops are dropped and counted in
    ``graph.report``.
    """
    if isinstance(source, (bytes, bytearray)):
        source = source.decode("utf-8")
    if isinstance(source, str):
        lines: Iterable = io.StringIO(source)
    else:
        lines = source
    report = ParseReport()
    ids: dict[str, int] = {}
    labels: list[str] = []
    src: list[int] = []
    dst: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        line = raw.strip()
        if not line:
            continue
        report.lines += 1
        if line.startswith("#"):
            report.comments += 1
            continue
        parts = line.split()
        if len(parts) != 2:
            raise EdgeListParseError(lineno, line)
        pair = []
        for tok in parts:
            i = ids.get(tok)
            if i is None:
                i = ids[tok] = len(labels)
                labels.append(tok)
            pair.append(i)
        if pair[0] == pair[1]:
            report.self_loops += 1
            continue
        src.append(pair[0])
        dst.append(pair[1])
    e = np.array([src, dst], dtype=np.int64).T.reshape(-1, 2)
    g = Graph.from_edges(len(labels), e, labels)
    report.duplicate_edges = len(e) - g.edge_count
    g.report = report
    return g


def format_edge_list(g: Graph) -> str:
    """One ``label1<TAB>label2`` line per undirected edge, lexicographically smaller label first."""
    out = []
    for u, v in g.edges().tolist():
        a, b = sorted((g.labels[u], g.labels[v]))
        out.append(f"{a}\t{b}\n")
    return "".join(out)


def write_edge_list(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edge_list(g))


def load_graph(path) -> Graph:
    """Read an edge-list file, or a Facebook100-style ``.mat`` file holding a sparse matrix ``A``."""
    path = os.fspath(path)
    if path.endswith(".mat"):
        from scipy.io import loadmat
        from scipy.sparse import triu

        A = loadmat(path)["A"]
        n = A.shape[0]
        upper = triu(A, k=1).tocoo()
        return Graph.from_edges(n, np.stack([upper.row, upper.col], axis=1), [str(i + 1) for i in range(n)])
    with open(path, "rb") as fh:
        return parse_edge_list(fh)

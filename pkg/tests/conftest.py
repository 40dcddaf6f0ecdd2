import itertools

import numpy as np
import pytest

from cliqueperc.graph import Graph
from cliqueperc.harness import bowtie, k6_minus_two_edges, non_composable_fixture, triangle


def adjacency_masks(g: Graph) -> list[int]:
    masks = []
    for v in range(g.node_count):
        m = 0
        for u in g.neighbors(v).tolist():
            m |= 1 << u
        masks.append(m)
    return masks


def all_cliques_lattice(g: Graph) -> list[tuple[int, ...]]:
    """Every clique (size >= 1), grown level by level through the subset lattice."""
    adj = adjacency_masks(g)
    level = [(1 << v, v) for v in range(g.node_count)]
    out = []
    while level:
        nxt = []
        for mask, top in level:
            out.append(mask)
            common = -1
            for v in range(g.node_count):
                if mask >> v & 1:
                    common &= adj[v]
            for u in range(top + 1, g.node_count):
                if common >> u & 1:
                    nxt.append((mask | 1 << u, u))
        level = nxt
    return [tuple(v for v in range(g.node_count) if m >> v & 1) for m in out]


def brute_maximal_cliques(g: Graph, min_size: int = 1) -> list[tuple[int, ...]]:
    adj = g.adjacency_sets()
    res = []
    for c in all_cliques_lattice(g):
        if len(c) < min_size:
            continue
        if not any(all(u in adj[v] for v in c) for u in range(g.node_count) if u not in c):
            res.append(c)
    return sorted(res)


def brute_k_cliques(g: Graph, k: int) -> list[tuple[int, ...]]:
    adj = g.adjacency_sets()
    return sorted(
        c for c in itertools.combinations(range(g.node_count), k) if all(b in adj[a] for a, b in itertools.combinations(c, 2))
    )


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(len(iu)) < p
    return Graph.from_edges(n, np.stack([iu[keep], ju[keep]], axis=1))


@pytest.fixture
def k6():
    return k6_minus_two_edges()


@pytest.fixture
def bow():
    return bowtie()


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture
def ring9():
    return non_composable_fixture()


# --- acceptance reporting: one pass/fail line per criterion ---------------------------------

_criteria: dict[str, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    label = mark.args[0]
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "SKIP" if rep.skipped else ("PASS" if rep.passed else "FAIL")
        note = ""
        if rep.skipped and isinstance(rep.longrepr, tuple):
            note = rep.longrepr[2]
        prev = _criteria.get(label)
        rank = {"PASS": 0, "SKIP": 1, "FAIL": 2}
        if prev is None or rank[status] > rank[prev[0]]:  # parametrized cases: the worst outcome wins
            _criteria[label] = (status, note)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_criteria, key=lambda s: int(s.split()[0])):
        status, note = _criteria[label]
        terminalreporter.write_line(f"{status}  criterion {label}" + (f"  ({note})" if note else ""))

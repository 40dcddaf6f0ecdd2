import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliqueperc.graph import EdgeListParseError, Graph, degree, format_edge_list, load_graph, parse_edge_list


def test_triangle():
    g = parse_edge_list("0 1\n1 2\n2 0\n")
    assert g.node_count == 3
    assert g.edge_count == 3


def test_dedup_and_self_loop():
    g = parse_edge_list(b"a b\nb a\na a\n")
    assert g.node_count == 2
    assert g.edge_count == 1
    assert g.report.duplicate_edges == 1
    assert g.report.self_loops == 1


def test_comments_blank_lines_and_first_appearance_order():
    g = parse_edge_list("# header\n\nz y\n  \ny x\n")
    assert g.labels == ["z", "y", "x"]
    assert g.report.comments == 1
    assert g.has_edge(g.id_of("z"), g.id_of("y"))
    assert not g.has_edge(g.id_of("z"), g.id_of("x"))


@pytest.mark.parametrize("bad", ["1 2 3\n", "1\n", "0 1\n7\n"])
def test_malformed_line_reports_line_number(bad):
    with pytest.raises(EdgeListParseError) as ei:
        parse_edge_list(bad)
    assert ei.value.lineno == bad.count("\n")


def test_empty_input():
    g = parse_edge_list("")
    assert g.node_count == 0
    assert g.edge_count == 0


def test_degree_examples(tri):
    assert degree(tri, 0) == 2
    star = Graph.from_edges(7, [(0, i) for i in range(1, 6)])
    assert degree(star, 0) == 5
    assert degree(star, 6) == 0
    with pytest.raises(IndexError):
        degree(star, 7)


def test_adjacency_invariants_and_readonly(k6):
    for v in range(k6.node_count):
        nb = k6.neighbors(v)
        assert np.all(np.diff(nb) > 0)
        assert v not in nb
        for u in nb.tolist():
            assert k6.has_edge(u, v)
    with pytest.raises(ValueError):
        k6.indices[0] = 3


def test_writer_format():
    g = parse_edge_list("b a\nc b\n")
    assert format_edge_list(g) == "a\tb\nb\tc\n"


def test_load_graph_from_file(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("# snap\n1\t2\n2\t3\n")
    g = load_graph(p)
    assert (g.node_count, g.edge_count) == (3, 2)


edge_lists = st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), max_size=60)


@settings(max_examples=80, deadline=None)
@given(edge_lists)
def test_round_trip_and_handshake(pairs):
    text = "".join(f"n{a} n{b}\n" for a, b in pairs)
    g = parse_edge_list(text)
    assert int(g.degrees().sum()) == 2 * g.edge_count
    g2 = parse_edge_list(format_edge_list(g))
    as_labels = lambda h: {frozenset((h.labels[u], h.labels[v])) for u, v in h.edges().tolist()}  # noqa: E731
    assert as_labels(g) == as_labels(g2)
    expected = {frozenset((f"n{a}", f"n{b}")) for a, b in pairs if a != b}
    assert as_labels(g) == expected


def test_load_facebook_style_mat(tmp_path):
    from scipy.io import savemat
    from scipy.sparse import csc_matrix

    A = np.zeros((5, 5))
    for a, b in [(0, 1), (1, 2), (0, 2), (3, 4)]:
        A[a, b] = A[b, a] = 1
    savemat(tmp_path / "net.mat", {"A": csc_matrix(A)})
    g = load_graph(tmp_path / "net.mat")
    assert (g.node_count, g.edge_count) == (5, 4)
    assert g.labels[0] == "1"

import itertools

import numpy as np
import pytest

from oracles import matmul_loops, random_graph_edges
from topoleak.graph import (
    GraphFormatError,
    TextAttributedGraph,
    affinity,
    load_edge_list,
    save_edge_list,
    transition_matrix,
)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_simple_path(tmp_path):
    g = load_edge_list(write(tmp_path, "e.tsv", "0\t1\n1\t2"))
    assert g.n == 3
    assert g.edges == ((0, 1), (1, 2))


def test_self_loop_dropped_with_one_warning(tmp_path):
    with pytest.warns(UserWarning, match="1 self-loop") as rec:
        g = load_edge_list(write(tmp_path, "e.tsv", "0\t0\n"))
    assert len(rec) == 1
    assert g.n == 1 and g.edges == ()


def test_reverse_duplicate_collapses(tmp_path):
    g = load_edge_list(write(tmp_path, "e.tsv", "0\t1\n1\t0\n"))
    assert g.edges == ((0, 1),)


def test_docs_extend_node_count(tmp_path):
    e = write(tmp_path, "e.tsv", "0\t1\n")
    d = write(tmp_path, "d.tsv", "0\thello world\n4\tlast node\n")
    g = load_edge_list(e, d)
    assert g.n == 5
    assert g.docs == ("hello world", "", "", "", "last node")


@pytest.mark.parametrize("text, lineno", [("0\t1\nx\t2\n", 2), ("0 1\n", 1), ("0\t1\t2\n", 1)])
def test_unparsable_line_reports_line_number(tmp_path, text, lineno):
    with pytest.raises(GraphFormatError, match=f":{lineno}:"):
        load_edge_list(write(tmp_path, "e.tsv", text))


def test_negative_id(tmp_path):
    with pytest.raises(GraphFormatError, match="negative"):
        load_edge_list(write(tmp_path, "e.tsv", "0\t-1\n"))


def test_roundtrip_is_identity(tmp_path):
    rng = np.random.default_rng(3)
    for trial in range(10):
        n = int(rng.integers(1, 9))
        edges = random_graph_edges(rng, n, 0.4)
        docs = [f"doc {i} words\twith tab" if i % 2 else "" for i in range(n)]
        g = TextAttributedGraph.from_edges(n, edges, docs)
        save_edge_list(g, tmp_path / "e.tsv", tmp_path / "d.tsv")
        g2 = load_edge_list(tmp_path / "e.tsv", tmp_path / "d.tsv")
        assert g2 == g
        save_edge_list(g2, tmp_path / "e2.tsv", tmp_path / "d2.tsv")
        assert (tmp_path / "e.tsv").read_bytes() == (tmp_path / "e2.tsv").read_bytes()
        assert (tmp_path / "d.tsv").read_bytes() == (tmp_path / "d2.tsv").read_bytes()


def test_graph_invariants():
    g = TextAttributedGraph.from_edges(4, [(2, 1), (1, 2), (0, 3)])
    A = g.adjacency()
    assert np.array_equal(A, A.T)
    assert np.all(np.diag(A) == 0)
    assert g.edges == ((0, 3), (1, 2))
    with pytest.raises(ValueError):
        TextAttributedGraph.from_edges(2, [(0, 0)])
    with pytest.raises(ValueError):
        TextAttributedGraph.from_edges(2, [(0, 2)])


def test_transition_examples():
    S = transition_matrix(TextAttributedGraph.from_edges(2, [(0, 1)]))
    assert np.array_equal(S, [[0, 1], [1, 0]])
    S = transition_matrix(TextAttributedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]))
    assert np.array_equal(S, 0.5 * (np.ones((3, 3)) - np.eye(3)))
    S = transition_matrix(TextAttributedGraph.from_edges(3, [(0, 1)]))
    assert np.array_equal(S[2], np.zeros(3))


def test_transition_rows_sum_exactly():
    rng = np.random.default_rng(0)
    for _ in range(30):
        n = int(rng.integers(1, 12))
        g = TextAttributedGraph.from_edges(n, random_graph_edges(rng, n, 0.3))
        S = transition_matrix(g)
        deg = g.degrees()
        for i in range(n):
            assert S[i].sum() == pytest.approx(1.0 if deg[i] else 0.0, abs=1e-15)


def test_affinity_examples():
    M = affinity(transition_matrix(TextAttributedGraph.from_edges(2, [(0, 1)])))
    assert np.allclose(M, 0.5, atol=1e-15)
    K3 = TextAttributedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    M = affinity(transition_matrix(K3))
    assert np.allclose(np.diag(M), 0.25, atol=1e-15)
    assert np.allclose(M[~np.eye(3, dtype=bool)], 0.375, atol=1e-15)
    assert np.array_equal(affinity(transition_matrix(TextAttributedGraph.from_edges(4, []))),
                          np.zeros((4, 4)))


def test_affinity_matches_loop_oracle_small_graphs():
    # every graph on up to 4 nodes, plus random ones up to 6
    graphs = []
    for n in range(1, 5):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(2 ** len(pairs)):
            graphs.append((n, [p for b, p in enumerate(pairs) if mask >> b & 1]))
    rng = np.random.default_rng(1)
    graphs += [(6, random_graph_edges(rng, 6, 0.5)) for _ in range(40)]
    for n, edges in graphs:
        S = transition_matrix(TextAttributedGraph.from_edges(n, edges))
        M = affinity(S)
        expected = (S + matmul_loops(S, S)) / 2
        assert np.max(np.abs(M - expected)) <= 1e-12
        assert M.min() >= 0 and M.max() <= 1
        assert np.all(M.sum(axis=1) <= 1 + 1e-12)

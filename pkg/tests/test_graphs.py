import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normsim import InputError, ParseError, build_from_edges, generate, read_edge_list, write_edge_list
from normsim.graphs import neighbor_adopter_counts

FIG4_EDGES = [(0, 1), (0, 3), (0, 4), (1, 4), (2, 5), (3, 4), (4, 5)]


def test_build_from_edges_basic():
    g = build_from_edges(6, FIG4_EDGES)
    assert g.n == 6
    assert g.m == 7
    assert g.neighbors(1) == (0, 4)
    assert g.degree(4) == 4


def test_three_neighbor_hub():
    # the caption's neighbor claim holds once the inconsistent (0, 4) edge is dropped
    g = build_from_edges(6, [e for e in FIG4_EDGES if e != (0, 4)])
    assert g.neighbors(4) == (1, 3, 5)
    assert g.degree(4) == 3


def test_empty_edges():
    g = build_from_edges(3, [])
    assert [g.degree(i) for i in range(3)] == [0, 0, 0]


def test_duplicate_and_reverse_collapse():
    g = build_from_edges(2, [(0, 1), (1, 0)])
    assert g.m == 1
    assert g.degree(0) == 1 and g.degree(1) == 1


def test_out_of_range_endpoint():
    with pytest.raises(InputError):
        build_from_edges(3, [(0, 3)])


def test_self_loop_rejected():
    with pytest.raises(InputError):
        build_from_edges(3, [(1, 1)])


def test_complete():
    g = generate("complete", 4)
    assert g.m == 6
    assert all(g.degree(i) == 3 for i in range(4))


def test_grid2d():
    g = generate("grid2d", 9, rows=3, cols=3)
    assert g.m == 12
    assert g.degree(0) == 2  # corner
    assert g.degree(4) == 4  # center


def test_grid2d_mismatched_n():
    with pytest.raises(InputError):
        generate("grid2d", 10, rows=3, cols=3)


def test_erdos_renyi_p1_complete():
    g = generate("erdos_renyi", 5, seed=99, p=1.0)
    assert g.m == 10


def test_erdos_renyi_p0_empty():
    g = generate("erdos_renyi", 5, seed=1, p=0.0)
    assert g.m == 0


def test_ring_lattice_degrees():
    for n, k in ((8, 2), (9, 4), (12, 6)):
        g = generate("ring_lattice", n, k=k)
        assert all(g.degree(i) == k for i in range(n))


def test_ring_lattice_odd_k_rejected():
    with pytest.raises(InputError):
        generate("ring_lattice", 8, k=5)
    with pytest.raises(InputError):
        generate("ring_lattice", 8, k=8)


def test_watts_strogatz_edge_count_preserved():
    g = generate("watts_strogatz", 20, seed=5, k=4, p=0.4)
    assert g.m == 40  # rewiring never changes the edge count
    assert sum(g.degree(i) for i in range(20)) == 80


def test_watts_strogatz_p0_is_ring():
    assert generate("watts_strogatz", 10, seed=3, k=4, p=0.0) == generate(
        "ring_lattice", 10, k=4
    )


def test_barabasi_albert_edge_count():
    g = generate("barabasi_albert", 10, seed=7, m=2)
    # 2-clique start (1 edge) plus 2 edges per added node
    assert g.m == 1 + 2 * 8


def test_generate_deterministic():
    for kind, kwargs in (
        ("erdos_renyi", {"p": 0.3}),
        ("watts_strogatz", {"k": 4, "p": 0.5}),
        ("barabasi_albert", {"m": 2}),
    ):
        a = generate(kind, 30, seed=11, **kwargs)
        b = generate(kind, 30, seed=11, **kwargs)
        assert a == b


def test_generate_unknown_kind():
    with pytest.raises(InputError):
        generate("smallworld", 5)


@given(
    n=st.integers(min_value=1, max_value=12),
    pairs=st.lists(
        st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=30
    ),
)
@settings(max_examples=100)
def test_adjacency_invariants(n, pairs):
    pairs = [(i % n, j % n) for i, j in pairs if i % n != j % n]
    g = build_from_edges(n, pairs)
    for i in range(n):
        assert g.degree(i) == len(g.adjacency[i])
        for j in g.neighbors(i):
            assert i in g.neighbors(j)
            assert i != j
    # canonical edges are unique and sorted
    assert len(set(g.edges)) == g.m
    assert all(i < j for i, j in g.edges)


def test_edge_list_roundtrip(tmp_path):
    g = generate("watts_strogatz", 15, seed=2, k=4, p=0.3)
    path = tmp_path / "ws.edges"
    write_edge_list(g, path)
    back = read_edge_list(path)
    assert back == g


def test_edge_list_file_format(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("# comment\nn 3\n0 1\n1 2\n", encoding="utf-8")
    g = read_edge_list(path)
    assert g.n == 3 and g.m == 2
    assert g.neighbors(1) == (0, 2)


def test_edge_list_crlf_accepted(tmp_path):
    path = tmp_path / "g.edges"
    path.write_bytes(b"n 2\r\n0 1\r\n")
    g = read_edge_list(path)
    assert g.m == 1


def test_edge_list_singleton(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("n 1\n", encoding="utf-8")
    g = read_edge_list(path)
    assert g.n == 1 and g.m == 0


def test_edge_list_labels_reindexed(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("n 3\nalice bob\nbob carol\n", encoding="utf-8")
    g = read_edge_list(path)
    assert g.n == 3 and g.m == 2
    assert g.labels == ("alice", "bob", "carol")
    assert g.neighbors(1) == (0, 2)  # bob linked to both


def test_edge_list_malformed_line_number(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("n 3\n0 1\n0 1 2\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        read_edge_list(path)
    assert err.value.line == 3


def test_edge_list_missing_header(tmp_path):
    path = tmp_path / "g.edges"
    path.write_text("0 1\n", encoding="utf-8")
    with pytest.raises(ParseError):
        read_edge_list(path)


def test_neighbor_adopter_counts():
    g = build_from_edges(6, FIG4_EDGES)
    x = np.array([1, 0, 0, 1, 0, 0])
    counts = neighbor_adopter_counts(g, x)
    assert counts.tolist() == [1.0, 1.0, 0.0, 1.0, 2.0, 0.0]

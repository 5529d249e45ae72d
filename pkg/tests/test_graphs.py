import io
import os
import tempfile
import itertools

import numpy as np
from hypothesis import given, settings
from pytest import raises

from _common import run_tests, random_graph, graphs
from graphstein._errors import InvalidPair, ParseError, InvalidArgument
from graphstein.graphs import (
    Graph,
    pair_count,
    pair_index,
    pair_unindex,
    pair_arrays,
    flip_edge,
    set_edge,
    edge_count,
    degree,
    two_star_count,
    triangle_count,
    summary_statistic,
    summary_statistics,
    parse_graph,
    read_graph,
    write_graph,
    format_graph,
    DENSITY,
    BIDEGREE,
    COMMON_NEIGHBOURS,
    STATISTIC_KINDS,
)


K3 = Graph.complete(3)
PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])
STAR4 = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])


def test_pair_index():
    assert pair_index(0, 1, 4) == 0
    assert pair_index(2, 3, 4) == 5
    assert pair_index(1, 3, 4) == 4

    # Same order as triu_indices
    for n in (2, 3, 7):
        I, J = pair_arrays(n)
        assert [pair_index(i, j, n) for i, j in zip(I, J)] == list(range(pair_count(n)))

    for n in (2, 5, 13, 64):
        for s, (i, j) in enumerate(itertools.combinations(range(n), 2)):
            assert pair_index(i, j, n) == s
            assert pair_unindex(s, n) == (i, j)

    for i, j, n in [(1, 1, 4), (2, 1, 4), (0, 4, 4), (-1, 2, 4)]:
        with raises(InvalidPair):
            pair_index(i, j, n)
    with raises(InvalidPair):
        pair_unindex(6, 4)
    with raises(ValueError):  # InvalidPair is a ValueError too
        pair_unindex(-1, 4)


def test_graph_validation():
    with raises(InvalidArgument):
        Graph(0)
    with raises(InvalidArgument):
        Graph(2, [[0, 1], [0, 0]])
    with raises(InvalidArgument):
        Graph(2, [[1, 0], [0, 0]])
    with raises(InvalidArgument):
        Graph(3, np.zeros((2, 2)))
    with raises(InvalidPair):
        Graph.from_edges(3, [(0, 0)])

    x = Graph.from_edges(3, [(0, 1)])
    with raises(ValueError):
        x.adjacency[0, 2] = True  # read-only

    # Value semantics
    assert x == Graph.from_edges(3, [(1, 0)])
    assert hash(x) == hash(Graph.from_edges(3, [(1, 0)]))
    assert x != Graph.from_edges(4, [(0, 1)])
    assert len({x, Graph.from_edges(3, [(0, 1)]), K3}) == 2

    assert K3.N == 3
    assert K3.density() == 1.0
    assert Graph.empty(1).density() == 0.0
    assert PATH3.neighbours(1) == [0, 2]
    assert PATH3.edges() == [(0, 1), (1, 2)]
    assert list(PATH3.pair_vector()) == [1, 0, 1]
    assert PATH3.edge_value(1) == 0


def test_flip_edge():
    x = flip_edge(K3, pair_index(0, 1, 3))
    assert x.edges() == [(0, 2), (1, 2)]
    assert K3.edges() == [(0, 1), (0, 2), (1, 2)]  # unmodified

    x = flip_edge(Graph.empty(3), 0)
    assert x.edges() == [(0, 1)]

    assert set_edge(PATH3, 0, 1) is PATH3
    assert set_edge(PATH3, 0, 0).edges() == [(1, 2)]
    assert set_edge(PATH3, 1, 1) == K3

    with raises(InvalidPair):
        flip_edge(K3, 3)


@settings(max_examples=50)
@given(graphs(min_n=2))
def test_flip_edge_is_involution(x):
    for s in range(x.N):
        y = flip_edge(x, s)
        assert y != x
        assert flip_edge(y, s) == x


def test_counts():
    assert edge_count(K3) == 3
    assert two_star_count(K3) == 3
    assert edge_count(STAR4) == 3
    assert two_star_count(STAR4) == 3
    assert edge_count(PATH3) == 2
    assert two_star_count(PATH3) == 1
    assert degree(STAR4, 0) == 3
    assert degree(STAR4, 3) == 1
    assert triangle_count(K3) == 1
    assert triangle_count(Graph.complete(5)) == 10
    assert triangle_count(PATH3) == 0


def _brute_two_stars(x):
    count = 0
    for v in range(x.n):
        for u, w in itertools.permutations(range(x.n), 2):
            if v not in (u, w) and x.has_edge(v, u) and x.has_edge(v, w):
                count += 1
    return count // 2


@settings(max_examples=60)
@given(graphs(max_n=6))
def test_counts_brute_force(x):
    assert edge_count(x) * 2 == int(x.degrees().sum())
    assert two_star_count(x) == _brute_two_stars(x)


def test_summary_statistic():
    s = pair_index(0, 2, 3)
    assert summary_statistic(PATH3, s, BIDEGREE) == (1, 1)
    assert summary_statistic(K3, pair_index(0, 1, 3), COMMON_NEIGHBOURS) == 1
    assert summary_statistic(K3, 0, DENSITY) == 0
    assert summary_statistic(STAR4, pair_index(0, 1, 4), BIDEGREE) == (0, 2)
    with raises(InvalidArgument):
        summary_statistic(K3, 0, "triangles")


def test_summary_statistics_ignore_own_edge():
    for seed in range(5):
        x = random_graph(9, 0.4, seed)
        for kind in STATISTIC_KINDS:
            values = summary_statistics(x, kind)
            assert len(values) == x.N
            for s in range(x.N):
                assert values[s] == summary_statistic(x, s, kind)
                assert summary_statistic(flip_edge(x, s), s, kind) == values[s]


def test_parse_graph():
    x = parse_graph("n=3\n0 1\n1 2")
    assert x == PATH3
    x = parse_graph("# a comment\n\nn = 4\n# another\n0 3\n")
    assert x.edges() == [(0, 3)]
    assert parse_graph("n=2\n") == Graph.empty(2)

    bad = [
        ("n=3\n0 3", 2),
        ("n=3\n1 0", 2),
        ("n=3\n0 1\n0 1", 3),
        ("n=3\n0 1 2", 2),
        ("n=3\n0 x", 2),
        ("0 1\n", 1),
        ("n=zero\n", 1),
        ("n=0\n", 1),
    ]
    for text, lineno in bad:
        with raises(ParseError) as err:
            parse_graph(text, "g.txt")
        assert err.value.lineno == lineno
        assert "g.txt" in str(err.value)

    with raises(ParseError):
        parse_graph("# only a comment\n")


def test_read_write_graph():
    x = random_graph(10, 0.3, 1)
    f = io.StringIO()
    write_graph(x, f)
    assert f.getvalue() == format_graph(x)
    f.seek(0)
    assert read_graph(f) == x

    with tempfile.TemporaryDirectory() as dirname:
        fname = os.path.join(dirname, "x.txt")
        write_graph(x, fname)
        assert read_graph(fname) == x


def test_read_graph_not_utf8():
    with tempfile.TemporaryDirectory() as dirname:
        fname = os.path.join(dirname, "g.txt")
        with open(fname, "wb") as f:
            f.write(b"n=3\n0 1\xff\n")
        with raises(ParseError) as err:
            read_graph(fname)
        assert err.value.filename == fname
        assert "UTF-8" in str(err.value)


def test_networkx_interop():
    x = random_graph(8, 0.5, 2)
    g = x.to_networkx()
    assert g.number_of_nodes() == 8
    assert g.number_of_edges() == edge_count(x)
    assert Graph.from_networkx(g) == x


if __name__ == "__main__":
    run_tests(globals())

import io
import csv
import math
from itertools import combinations

import numpy as np
import networkx as nx
from pytest import raises, approx

from _common import run_tests, random_graph, slow
from graphstein._errors import (
    InvalidArgument,
    IncompatibleGraphs,
    DivergentKernel,
    GraphTooSmall,
)
from graphstein.graphs import Graph, flip_edge, edge_count
from graphstein.kernels import (
    KernelSpec,
    ProductGraph,
    kernel_eval,
    gveh,
    k_step_random_walk,
    geometric_random_walk,
    check_grw_convergence,
    shortest_path_features,
    shortest_path_kernel,
    weisfeiler_lehman,
    wl_features,
    wl_feature_matrix,
    graphlet_features,
    graphlet_class_names,
    graphlet_kernel,
    gram_matrix,
    write_gram_csv,
)


K2 = Graph.complete(2)
K3 = Graph.complete(3)
PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])
C4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])

ALL_SPECS = [
    KernelSpec.parse(name)
    for name in ["const", "gveh1", "krw3", "grw0.01", "sp", "wl3", "glet3", "conglet4"]
]


def test_kernel_spec():
    spec = KernelSpec.parse("wl3")
    assert spec == KernelSpec("wl", h=3)
    assert spec.name == "WL"
    assert spec.param == "3"
    assert str(spec) == "wl3"
    assert KernelSpec.parse("GRW0.01").params == {"lam": 0.01}
    assert str(KernelSpec.parse("grw0.01")) == "grw0.01"
    assert KernelSpec.parse("krw5").params == {"K": 5, "lam": 1 / 3}
    assert KernelSpec.parse("krw5:0.2") == KernelSpec("krw", K=5, lam=0.2)
    assert str(KernelSpec.parse("krw5:0.2")) == "krw5:0.2"
    assert KernelSpec.parse("conglet3").kind == "conglet"
    assert KernelSpec.parse("glet4").params == {"l": 4}
    assert KernelSpec.parse("const").param == ""
    assert len({KernelSpec.parse("sp"), KernelSpec("sp")}) == 1

    for text in ["foo", "const1", "wl", "wlx", "gveh0", "grw-1", "glet5", "krw-1"]:
        with raises(InvalidArgument):
            KernelSpec.parse(text)


def test_kernel_examples():
    x, x2 = random_graph(5, 0.5, 0), random_graph(5, 0.5, 1)
    assert kernel_eval(KernelSpec("const"), x, x2) == 1
    assert kernel_eval(KernelSpec("gveh", sigma=3), x, x) == 1
    assert geometric_random_walk(Graph.empty(3), Graph.empty(3), 0.1) == 9
    with raises(InvalidArgument):
        geometric_random_walk(K3, K3, 0)


def test_product_graph():
    pg = ProductGraph(PATH3, K3)
    assert pg.size == 9
    assert pg.index(1, 2) == 5
    assert pg.adjacency.nnz == 4 * edge_count(PATH3) * edge_count(K3)
    assert pg.adjacency[pg.index(0, 0), pg.index(1, 1)] == 1
    assert pg.adjacency[pg.index(0, 0), pg.index(1, 0)] == 0


def test_gveh():
    x = random_graph(6, 0.4, 3)
    assert gveh(x, x, 0.5) == 1
    assert gveh(x, flip_edge(x, 4), 1) == approx(math.exp(-1))
    value = gveh(x, Graph.complete(6), 100)
    assert math.exp(-30 / 20000) <= value < 1
    with raises(IncompatibleGraphs):
        gveh(K3, C4, 1)


def test_k_step_random_walk():
    assert k_step_random_walk(K3, C4, 0) == 12
    assert k_step_random_walk(K2, K2, 1) == approx(16 / 3)
    for K in range(4):
        assert k_step_random_walk(K3, Graph.empty(4), K) == 12
    with raises(InvalidArgument):
        k_step_random_walk(K3, K3, 2, weights=[1, 1])
    with raises(InvalidArgument):
        k_step_random_walk(K3, K3, -1)


def test_grw_matches_power_series():
    lam = 0.1
    series = k_step_random_walk(K2, K2, 60, weights=[lam**t for t in range(61)])
    assert geometric_random_walk(K2, K2, lam) == approx(series, rel=1e-10)

    lam = 0.01
    for seed in range(5):
        x, x2 = random_graph(6, 0.5, seed), random_graph(7, 0.3, seed + 10)
        series = k_step_random_walk(x, x2, 60, weights=[lam**t for t in range(61)])
        assert geometric_random_walk(x, x2, lam) == approx(series, rel=1e-10)


def test_grw_convergence():
    K5 = Graph.complete(5)
    with raises(DivergentKernel):
        geometric_random_walk(K5, K5, 0.1)
    # Max-degree bound fails (0.1 * 16) but the spectral radii pass (0.1 * 4)
    star = Graph.from_edges(5, [(0, v) for v in range(1, 5)])
    check_grw_convergence(star, star, 0.1)
    assert geometric_random_walk(star, star, 0.1) > 25
    with raises(DivergentKernel):
        kernel_eval(KernelSpec("grw", lam=1), K3, K3)


def _brute_sp_features(x):
    counts = {}
    lengths = dict(nx.all_pairs_shortest_path_length(x.to_networkx()))
    for u in lengths:
        for v, d in lengths[u].items():
            if d > 0:
                counts[d] = counts.get(d, 0) + 1
    return counts


def test_shortest_path_kernel():
    assert list(shortest_path_features(PATH3)) == [4, 2]
    assert shortest_path_kernel(PATH3, PATH3) == 20
    assert shortest_path_kernel(PATH3, Graph.empty(5)) == 0
    assert shortest_path_kernel(K3, C4) == 6 * 8

    rng = np.random.default_rng(11)
    for seed in range(50):
        n, n2 = rng.integers(1, 7, size=2)
        p, p2 = rng.uniform(0.1, 0.9, size=2)
        x, x2 = random_graph(n, p, 2 * seed), random_graph(n2, p2, 2 * seed + 1)
        f1, f2 = _brute_sp_features(x), _brute_sp_features(x2)
        expected = sum(count * f2.get(d, 0) for d, count in f1.items())
        assert shortest_path_kernel(x, x2) == expected


def test_weisfeiler_lehman():
    assert weisfeiler_lehman(K3, C4, 0) == 12
    assert weisfeiler_lehman(K3, PATH3, 1) == 12
    for h in range(4):
        x = random_graph(8, 0.4, h)
        assert weisfeiler_lehman(x, x, h) >= 64
    # Regular graphs of equal degree are indistinguishable
    assert weisfeiler_lehman(K3, K3, 5) == 9 * 6

    features = wl_features([PATH3], 1)[0]
    assert sum(features.values()) == 6
    assert features[(0, 1)] == 3
    with raises(InvalidArgument):
        wl_features([PATH3], -1)
    with raises(InvalidArgument):
        wl_feature_matrix([PATH3], -1)
    assert wl_features([], 2) == []
    assert wl_feature_matrix([], 2).shape == (0, 0)


def _reference_wl_gram(graphs, h):
    # Label compression with a dict of (label, sorted neighbour labels)
    labels = [[1] * x.n for x in graphs]
    feats = [{(0, 1): x.n} for x in graphs]
    for it in range(1, h + 1):
        compressed = {}
        new_labels = []
        for x, lab in zip(graphs, labels):
            new = []
            for v in range(x.n):
                nbrs = tuple(sorted(lab[u] for u in np.flatnonzero(x.adjacency[v])))
                new.append(compressed.setdefault((lab[v], nbrs), len(compressed) + 1))
            new_labels.append(new)
        labels = new_labels
        for feat, lab in zip(feats, labels):
            for label in lab:
                feat[(it, label)] = feat.get((it, label), 0) + 1
    G = np.zeros((len(graphs), len(graphs)))
    for a, fa in enumerate(feats):
        for b, fb in enumerate(feats):
            G[a, b] = sum(count * fb.get(key, 0) for key, count in fa.items())
    return G


def test_wl_matches_reference():
    sizes = [(6, 0.3), (8, 0.5), (8, 0.2), (5, 0.6), (9, 0.4), (1, 0.0), (7, 0.0)]
    graphs = [random_graph(n, p, seed) for seed, (n, p) in enumerate(sizes)]
    graphs += [K3, C4, PATH3, Graph.complete(6)]
    for h in range(5):
        expected = _reference_wl_gram(graphs, h)
        assert (gram_matrix(KernelSpec("wl", h=h), graphs) == expected).all()
        F = wl_feature_matrix(graphs, h)
        assert F.shape[0] == len(graphs)
        assert (F.sum(axis=1) == [(h + 1) * x.n for x in graphs]).all()
        counters = wl_features(graphs, h)
        for a, b in [(0, 1), (2, 8), (4, 4), (5, 10)]:
            dot = sum(c * counters[b][key] for key, c in counters[a].items())
            assert dot == expected[a, b]
            assert weisfeiler_lehman(graphs[a], graphs[b], h) == _reference_wl_gram(
                [graphs[a], graphs[b]], h
            )[0, 1]


GRAPHLET_REPRESENTATIVES = {
    3: {
        "empty": [],
        "edge": [(0, 1)],
        "path": [(0, 1), (1, 2)],
        "triangle": [(0, 1), (1, 2), (0, 2)],
    },
    4: {
        "empty": [],
        "edge": [(0, 1)],
        "two-edges": [(0, 1), (2, 3)],
        "path3": [(0, 1), (1, 2)],
        "triangle": [(0, 1), (1, 2), (0, 2)],
        "path4": [(0, 1), (1, 2), (2, 3)],
        "star": [(0, 1), (0, 2), (0, 3)],
        "cycle": [(0, 1), (1, 2), (2, 3), (0, 3)],
        "paw": [(0, 1), (1, 2), (0, 2), (2, 3)],
        "diamond": [(0, 1), (1, 2), (0, 2), (2, 3), (1, 3)],
        "complete": list(combinations(range(4), 2)),
    },
}


def _brute_graphlets(x, l, connected_only):
    names = graphlet_class_names(l, connected_only)
    reps = {}
    for name in names:
        g = nx.Graph()
        g.add_nodes_from(range(l))
        g.add_edges_from(GRAPHLET_REPRESENTATIVES[l][name])
        reps[name] = g
    counts = dict.fromkeys(names, 0)
    g = x.to_networkx()
    for subset in combinations(range(x.n), l):
        sub = g.subgraph(subset)
        matches = [name for name, rep in reps.items() if nx.is_isomorphic(sub, rep)]
        assert len(matches) <= 1
        if matches:
            counts[matches[0]] += 1
        else:
            assert connected_only
    return [counts[name] for name in names]


def test_graphlet_features():
    assert list(graphlet_features(K3, 3)) == [0, 0, 0, 1]
    assert list(graphlet_features(Graph.empty(4), 3)) == [4, 0, 0, 0]
    assert list(graphlet_features(C4, 4, True)) == [0, 0, 1, 0, 0, 0]
    assert len(graphlet_class_names(4)) == 11
    assert graphlet_class_names(3, True) == ["path", "triangle"]

    with raises(GraphTooSmall):
        graphlet_features(K3, 4)
    with raises(InvalidArgument):
        graphlet_features(K3, 2)

    for seed in range(4):
        x = random_graph(7, 0.45, seed)
        for l in (3, 4):
            full = graphlet_features(x, l)
            assert full.sum() == math.comb(7, l)
            assert list(full) == _brute_graphlets(x, l, False)
            assert list(graphlet_features(x, l, True)) == _brute_graphlets(x, l, True)

    assert graphlet_kernel(K3, K3, 3) == 1


@slow
def test_graphlet_features_many_graphs():
    for seed in range(50):
        x = random_graph(8, 0.1 + 0.8 * seed / 49, seed)
        for l in (3, 4):
            full = graphlet_features(x, l)
            assert full.sum() == math.comb(8, l)
            assert list(full) == _brute_graphlets(x, l, False)
            assert list(graphlet_features(x, l, True)) == _brute_graphlets(x, l, True)


def test_gram_matrix():
    graphs = [random_graph(8, 0.35, seed) for seed in range(5)]
    assert np.array_equal(gram_matrix(KernelSpec("const"), graphs[:3]), np.ones((3, 3)))
    assert gram_matrix(KernelSpec("sp"), []).shape == (0, 0)
    G = gram_matrix(KernelSpec("wl", h=2), graphs[:1])
    assert G.shape == (1, 1)
    assert G[0, 0] == weisfeiler_lehman(graphs[0], graphs[0], 2)

    for spec in ALL_SPECS:
        G = gram_matrix(spec, graphs)
        for a in range(5):
            for b in range(5):
                expected = kernel_eval(spec, graphs[a], graphs[b])
                assert G[a, b] == approx(expected, rel=1e-9), str(spec)

    with raises(IncompatibleGraphs):
        gram_matrix(KernelSpec("gveh", sigma=1), [K3, C4])


def test_kernels_are_psd():
    graphs = [random_graph(10, 0.3, seed) for seed in range(10)]
    for spec in ALL_SPECS:
        G = gram_matrix(spec, graphs)
        assert np.allclose(G, G.T)
        eigvals = np.linalg.eigvalsh(G)
        assert eigvals.min() >= -1e-8 * max(1.0, eigvals.max()), str(spec)


def test_write_gram_csv():
    G = np.array([[1.0, 0.5], [0.5, 2.0]])
    f = io.StringIO()
    write_gram_csv(G, ["a", "b"], f)
    rows = list(csv.reader(io.StringIO(f.getvalue())))
    assert rows[0] == ["id", "a", "b"]
    assert rows[1][0] == "a"
    assert [float(v) for v in rows[2][1:]] == [0.5, 2.0]
    with raises(InvalidArgument):
        write_gram_csv(G, ["a"], io.StringIO())


if __name__ == "__main__":
    run_tests(globals())

import os
import math
import tempfile

import numpy as np
import networkx as nx
from pytest import raises

from _common import run_tests
from graphstein._errors import InvalidArgument, IngestError
from graphstein.graphs import (
    Graph,
    ErgmModel,
    grg,
    barabasi_albert,
    SampleDirectory,
    sample_directory_generator,
    next_sample,
    GeneratorSpec,
    generate,
    generate_batch,
    write_graphs,
    write_graph,
    edge_count,
    TORUS,
    SQUARE,
)
from graphstein.graphs._generators import _attachment_weights


def test_grg_extremes():
    for seed in range(20):
        assert grg(12, 0.71, TORUS, seed) == Graph.complete(12)
        assert grg(12, 1.5, SQUARE, seed) == Graph.complete(12)
        assert edge_count(grg(12, 1e-9, TORUS, seed)) == 0
    with raises(InvalidArgument):
        grg(10, 0, TORUS, 0)
    with raises(InvalidArgument):
        grg(10, 0.1, "sphere", 0)
    assert grg(15, 0.3, TORUS, 5) == grg(15, 0.3, TORUS, 5)


def test_grg_torus_density():
    # P(torus distance < r) = pi r^2 for r <= 1/2
    r = 0.2
    densities = [grg(20, r, TORUS, seed).density() for seed in range(500)]
    p = math.pi * r * r
    se = math.sqrt(p * (1 - p) / (500 * 190))
    # Edge indicators on the torus are pairwise independent
    assert abs(np.mean(densities) - p) < 10 * se


def test_barabasi_albert_structure():
    n = 30
    for seed in range(500):
        x = barabasi_albert(n, 1, 1.0, seed)
        assert edge_count(x) == n - 1
        assert nx.is_connected(x.to_networkx())
    for seed in range(50):
        for m in (2, 3):
            x = barabasi_albert(n, m, 0.5, seed)
            assert edge_count(x) == m * (m - 1) // 2 + m * (n - m)
    assert edge_count(barabasi_albert(n, 2, 1.0, 0)) == 1 + 2 * (n - 2)
    with raises(InvalidArgument):
        barabasi_albert(5, 5, 1.0, 0)
    with raises(InvalidArgument):
        barabasi_albert(5, 0, 1.0, 0)

    # Negative powers and isolated-free starts are fine
    x = barabasi_albert(10, 1, -1.0, 3)
    assert edge_count(x) == 9


def test_barabasi_albert_power():
    # alpha = 2 gives almost star-like graphs
    max0 = [barabasi_albert(50, 1, 0.0, seed).degrees().max() for seed in range(200)]
    max2 = [barabasi_albert(50, 1, 2.0, seed).degrees().max() for seed in range(200)]
    assert np.mean(max0) < np.mean(max2) - 10


def test_attachment_weights():
    deg = np.array([0.0, 1.0, 2.0, 4.0])
    assert _attachment_weights(deg, 0.0).tolist() == [2, 2, 2, 2]
    assert _attachment_weights(deg, 1.0).tolist() == [1, 2, 3, 5]
    assert _attachment_weights(deg, 2.0).tolist() == [1, 2, 5, 17]
    # Isolated vertices get the smallest weight for negative powers too
    assert _attachment_weights(deg, -1.0).tolist() == [1, 2, 1.5, 1.25]
    weights = _attachment_weights(np.array([0.0, 3.0]), -2.0)
    assert np.isfinite(weights).all()
    assert weights.argmin() == 0
    x = barabasi_albert(20, 2, -1.0, 3)
    assert edge_count(x) == 1 + 2 * 18


def test_sample_directory():
    graphs = [grg(8, 0.4, TORUS, seed) for seed in range(3)]
    with tempfile.TemporaryDirectory() as dirname:
        write_graphs(graphs, dirname)
        handle = sample_directory_generator(dirname)
        assert len(handle) == 3
        assert handle.n == 8
        assert [next_sample(handle) for _ in range(3)] == graphs
        assert handle.remaining == 0
        with raises(IngestError):
            next_sample(handle)

        handle = SampleDirectory(dirname)
        assert handle.take(2) == graphs[:2]
        with raises(IngestError):
            handle.take(2)

        # Mixed vertex counts
        write_graph(Graph.complete(5), os.path.join(dirname, "zz.txt"))
        with raises(IngestError):
            SampleDirectory(dirname)

    with tempfile.TemporaryDirectory() as dirname:
        with raises(IngestError):
            SampleDirectory(dirname)
        with open(os.path.join(dirname, "bad.txt"), "wb") as f:
            f.write(b"n=3\n0 5\n")
        with raises(IngestError):
            SampleDirectory(dirname)

    with raises(IngestError):
        SampleDirectory("/this/directory/does/not/exist")


def test_sample_directory_round_trip():
    graphs = [grg(10, 0.3, SQUARE, seed) for seed in range(10)]
    with tempfile.TemporaryDirectory() as dirname:
        write_graphs(graphs, dirname)
        spec = GeneratorSpec.samples(dirname)
        assert spec.n == 10
        assert generate_batch(spec, 10, 0) == graphs
        assert generate_batch(spec, 4, 99) == graphs[:4]
        with raises(IngestError):
            generate_batch(spec, 11, 0)


def test_generator_spec():
    spec = GeneratorSpec.grg_torus(10, 0.3)
    assert generate(spec, 4) == grg(10, 0.3, TORUS, 4)
    batch = generate_batch(spec, 3, 4)
    assert batch == [grg(10, 0.3, TORUS, 4 + i) for i in range(3)]

    spec = GeneratorSpec.barabasi_albert(10, 2, 1.0)
    assert generate(spec, 1) == barabasi_albert(10, 2, 1.0, 1)
    assert spec.with_param("alpha", 0).params["alpha"] == 0.0
    with raises(InvalidArgument):
        spec.with_param("r", 0.3)
    with raises(InvalidArgument):
        GeneratorSpec.barabasi_albert(10, 10, 1.0)
    with raises(InvalidArgument):
        GeneratorSpec.grg_square(10, -1)
    with raises(InvalidArgument):
        GeneratorSpec("lattice", 10)

    assert generate_batch(GeneratorSpec.complete(4), 2, 0) == [Graph.complete(4)] * 2

    model = ErgmModel.e2s(-2, 0, 8)
    spec = GeneratorSpec.ergm(model)
    assert spec.n == 8
    assert len(generate_batch(spec, 5, 0)) == 5
    alt = spec.with_param("beta2", 0.5)
    assert alt.params["model"] == ErgmModel.e2s(-2, 0.5, 8)
    assert "twostar=0.5" in alt.describe()
    assert spec.with_param("beta1", 1).params["model"].beta == (1.0, 0.0)


if __name__ == "__main__":
    run_tests(globals())

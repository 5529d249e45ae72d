"""
Graph generators used as models under test: geometric random graphs on
the unit torus and unit square, Barabasi-Albert graphs with power
attachment, ERGMs, and directories of externally generated samples.

All generators are deterministic functions of (spec, seed).
"""

import os
import logging

import numpy as np
from scipy.spatial.distance import pdist, squareform

from .._errors import InvalidArgument, IngestError, ParseError
from ._graph import Graph
from ._io import read_graph, GRAPH_EXTS
from ._ergm import ErgmModel, sample_chain


logger = logging.getLogger("graphstein")

TORUS = "torus"
SQUARE = "square"


# %% Geometric random graphs


def grg(n, r, topology, seed):
    """Sample a geometric random graph.

    Places n points uniformly in [0, 1)^2 and connects two points if their
    distance is strictly smaller than r. On the torus the distance per
    coordinate is min(|d|, 1 - |d|).
    """
    if int(n) < 1:
        raise InvalidArgument(f"grg needs n >= 1, got {n}")
    if not r > 0:
        raise InvalidArgument(f"grg needs a radius r > 0, got {r}")
    if topology not in (TORUS, SQUARE):
        raise InvalidArgument(f"Unknown grg topology {topology!r}")
    rng = np.random.default_rng(seed)
    points = rng.random((int(n), 2))
    if topology == SQUARE:
        dist = squareform(pdist(points))
    else:
        d = np.abs(points[:, None, :] - points[None, :, :])
        d = np.minimum(d, 1.0 - d)
        dist = np.sqrt((d**2).sum(axis=-1))
    adj = dist < r
    np.fill_diagonal(adj, False)
    return Graph(int(n), adj)


# %% Preferential attachment


def _attachment_weights(deg, alpha):
    """Get the attachment weights deg^alpha + 1.

    A vertex of degree zero has weight 1 for every alpha != 0, and weight
    2 like all others for alpha == 0. For alpha < 0 this takes 0^alpha as
    0 instead of infinity, so isolated vertices are the least preferred
    rather than certain targets.
    """
    powered = np.zeros_like(deg)
    positive = deg > 0
    powered[positive] = deg[positive] ** alpha
    if alpha == 0:
        powered[:] = 1.0
    return powered + 1.0


def barabasi_albert(n, m, alpha, seed):
    """Sample a Barabasi-Albert graph with power attachment.

    Starts from the complete graph on m vertices. Each arriving vertex
    attaches m edges to distinct existing vertices; each target is drawn in
    turn with probability proportional to deg(v)^alpha + 1, excluding
    targets that are already chosen, and degrees are refreshed between the
    draws of one arrival.
    """
    n, m = int(n), int(m)
    if not (1 <= m < n):
        raise InvalidArgument(f"barabasi_albert needs 1 <= m < n, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, n), bool)
    adj[:m, :m] = True
    np.fill_diagonal(adj, False)
    deg = adj.sum(axis=1).astype(float)
    for v in range(m, n):
        chosen = np.zeros(v, bool)
        for _ in range(m):
            weights = _attachment_weights(deg[:v], alpha)
            weights[chosen] = 0.0
            target = rng.choice(v, p=weights / weights.sum())
            chosen[target] = True
            adj[v, target] = adj[target, v] = True
            deg[v] += 1
            deg[target] += 1
    return Graph(n, adj)


# %% Sample directories


class SampleDirectory:
    """A finite, ordered batch of graphs read from a directory.

    Files are read in lexicographic filename order; all graphs must have the
    same number of vertices. Iteration does not cycle: next_sample() raises
    IngestError when the batch is exhausted.
    """

    def __init__(self, path):
        path = os.fspath(path)
        if not os.path.isdir(path):
            raise IngestError(f"Sample directory does not exist: {path}")
        fnames = sorted(
            fname
            for fname in os.listdir(path)
            if fname.endswith(GRAPH_EXTS) and not fname.startswith((".", "_"))
        )
        if not fnames:
            raise IngestError(f"No graph files in sample directory {path}")
        graphs = []
        for fname in fnames:
            try:
                graphs.append(read_graph(os.path.join(path, fname)))
            except ParseError as err:
                raise IngestError(f"Could not read sample: {err}")
        sizes = sorted(set(x.n for x in graphs))
        if len(sizes) > 1:
            raise IngestError(f"Samples in {path} have mixed vertex counts {sizes}")
        self.path = path
        self.filenames = fnames
        self.graphs = graphs
        self.n = sizes[0]
        self._index = 0
        logger.info(f"Ingested {len(graphs)} graphs with n={self.n} from {path}")

    def __len__(self):
        return len(self.graphs)

    @property
    def remaining(self):
        return len(self.graphs) - self._index

    def next_sample(self):
        if self._index >= len(self.graphs):
            raise IngestError(f"Sample directory {self.path} is exhausted")
        x = self.graphs[self._index]
        self._index += 1
        return x

    def take(self, count):
        """Get the next `count` samples as a list."""
        if count > self.remaining:
            raise IngestError(
                f"Requested {count} samples but {self.path} has {self.remaining} left"
            )
        return [self.next_sample() for _ in range(count)]


def sample_directory_generator(path):
    """Open a directory of graph files as a generator handle."""
    return SampleDirectory(path)


def next_sample(handle):
    """Get the next graph from a sample directory handle."""
    return handle.next_sample()


# %% Generator specs


GENERATOR_KINDS = "grg_torus", "grg_square", "barabasi_albert", "ergm", "samples", "complete"


class GeneratorSpec:
    """A tagged description of a graph generator on n vertices.

    Create with the classmethods: ``grg_torus(n, r)``, ``grg_square(n, r)``,
    ``barabasi_albert(n, m, alpha)``, ``ergm(model)``, ``samples(path)``
    and ``complete(n)``.
    """

    __slots__ = ["kind", "n", "params"]

    def __init__(self, kind, n, **params):
        if kind not in GENERATOR_KINDS:
            raise InvalidArgument(f"Unknown generator {kind!r}")
        self.kind = kind
        self.n = int(n)
        self.params = params
        if kind in ("grg_torus", "grg_square") and not params["r"] > 0:
            raise InvalidArgument(f"Generator radius must be > 0, got {params['r']}")
        if kind == "barabasi_albert" and not (1 <= params["m"] < self.n):
            raise InvalidArgument(f"Generator needs 1 <= m < n, got m={params['m']}")

    @classmethod
    def grg_torus(cls, n, r):
        return cls("grg_torus", n, r=float(r))

    @classmethod
    def grg_square(cls, n, r):
        return cls("grg_square", n, r=float(r))

    @classmethod
    def barabasi_albert(cls, n, m, alpha):
        return cls("barabasi_albert", n, m=int(m), alpha=float(alpha))

    @classmethod
    def ergm(cls, model):
        return cls("ergm", model.n, model=model)

    @classmethod
    def samples(cls, path):
        handle = SampleDirectory(path)
        return cls("samples", handle.n, path=os.fspath(path), handle=handle)

    @classmethod
    def complete(cls, n):
        return cls("complete", n)

    def with_param(self, name, value):
        """Get a copy of this spec with one parameter replaced. For ergm
        specs, name can be "beta1" or "beta2" to replace a coefficient.
        """
        params = dict(self.params)
        if self.kind == "ergm" and name in ("beta1", "beta2"):
            model = params["model"]
            beta = list(model.beta)
            beta[int(name[-1]) - 1] = float(value)
            params["model"] = model.with_beta(beta)
        elif name in params:
            params[name] = type(params[name])(value)
        else:
            raise InvalidArgument(f"Generator {self.kind} has no parameter {name!r}")
        return GeneratorSpec(self.kind, self.n, **params)

    def describe(self):
        if self.kind == "ergm":
            return repr(self.params["model"])
        params = {k: v for k, v in self.params.items() if k != "handle"}
        ps = " ".join(f"{k}={v}" for k, v in params.items())
        return f"{self.kind} n={self.n} {ps}".strip()

    def __repr__(self):
        return f"<GeneratorSpec {self.describe()}>"


def generate(spec, seed):
    """Draw one graph from the generator."""
    return generate_batch(spec, 1, seed)[0]


def generate_batch(spec, count, seed):
    """Draw `count` graphs from the generator. Independent generators use
    seed + index per graph; ergm draws one Glauber chain; sample
    directories return their first `count` graphs (the seed is unused).
    """
    p = spec.params
    if spec.kind == "grg_torus":
        return [grg(spec.n, p["r"], TORUS, seed + i) for i in range(count)]
    elif spec.kind == "grg_square":
        return [grg(spec.n, p["r"], SQUARE, seed + i) for i in range(count)]
    elif spec.kind == "barabasi_albert":
        return [
            barabasi_albert(spec.n, p["m"], p["alpha"], seed + i) for i in range(count)
        ]
    elif spec.kind == "ergm":
        model = p["model"]
        assert isinstance(model, ErgmModel)
        return sample_chain(model, count, seed)
    elif spec.kind == "samples":
        graphs = p["handle"].graphs
        if count > len(graphs):
            raise IngestError(
                f"Requested {count} samples but {p['path']} holds {len(graphs)}"
            )
        return list(graphs[:count])
    else:
        return [Graph.complete(spec.n) for _ in range(count)]

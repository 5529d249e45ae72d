"""
Graph values: undirected simple graphs on n labeled vertices.

The vertex pairs of a graph on n vertices are indexed lexicographically:

    (0,1) -> 0, (0,2) -> 1, ..., (0,n-1) -> n-2, (1,2) -> n-1, ...

which is also the order of numpy.triu_indices(n, 1). There are
N = n(n-1)/2 pairs. The edge indicator of pair s is written x_s.

Graphs are immutable: flip_edge() and friends return new graphs, so that
graphs can be shared between workers and used as dict keys.
"""

import numpy as np

from .._errors import InvalidPair, InvalidArgument


DENSITY = "density"
BIDEGREE = "bidegree"
COMMON_NEIGHBOURS = "common_neighbours"

STATISTIC_KINDS = DENSITY, BIDEGREE, COMMON_NEIGHBOURS


# %% Pair indexing


def pair_count(n):
    """Get the number N = n(n-1)/2 of vertex pairs of a graph with n vertices."""
    return n * (n - 1) // 2


def pair_index(i, j, n):
    """Get the lexicographic index s of the vertex pair (i, j), with i < j < n."""
    if not (0 <= i < j < n):
        raise InvalidPair(f"Invalid vertex pair ({i}, {j}) for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def pair_unindex(s, n):
    """Get the vertex pair (i, j) that has lexicographic index s."""
    if not (0 <= s < pair_count(n)):
        raise InvalidPair(f"Invalid pair index {s} for n={n}")
    i = 0
    while s >= n - 1 - i:
        s -= n - 1 - i
        i += 1
    return i, i + 1 + s


_pair_cache = {}


def pair_arrays(n):
    """Get two read-only int arrays (I, J) with the endpoints of all N pairs,
    in pair-index order.
    """
    try:
        return _pair_cache[n]
    except KeyError:
        pass
    I, J = np.triu_indices(n, 1)
    I.setflags(write=False)
    J.setflags(write=False)
    _pair_cache[n] = I, J
    return I, J


# %% The graph


class Graph:
    """An undirected simple graph on n vertices labeled 0..n-1.

    Create one with ``Graph(n, adjacency)`` or one of the classmethods
    ``empty()``, ``complete()``, ``from_edges()``, ``from_pair_vector()``
    and ``from_networkx()``. The adjacency matrix must be symmetric with
    a zero diagonal.
    """

    __slots__ = ["_n", "_adj", "_hash"]

    def __init__(self, n, adjacency=None):
        n = int(n)
        if n < 1:
            raise InvalidArgument(f"A graph needs at least one vertex, got n={n}")
        if adjacency is None:
            adj = np.zeros((n, n), bool)
        else:
            adj = np.array(adjacency, dtype=bool)
            if adj.shape != (n, n):
                raise InvalidArgument(f"Adjacency must have shape ({n}, {n})")
            if adj.diagonal().any():
                raise InvalidArgument("Adjacency must not have self-loops")
            if not (adj == adj.T).all():
                raise InvalidArgument("Adjacency must be symmetric")
        adj.setflags(write=False)
        self._n = n
        self._adj = adj
        self._hash = None

    @classmethod
    def empty(cls, n):
        """Create the graph on n vertices without edges."""
        return cls(n)

    @classmethod
    def complete(cls, n):
        """Create the complete graph on n vertices."""
        adj = np.ones((n, n), bool)
        np.fill_diagonal(adj, False)
        return cls(n, adj)

    @classmethod
    def from_edges(cls, n, edges):
        """Create a graph from an iterable of (i, j) vertex pairs."""
        adj = np.zeros((n, n), bool)
        for i, j in edges:
            if i == j or not (0 <= i < n and 0 <= j < n):
                raise InvalidPair(f"Invalid edge ({i}, {j}) for n={n}")
            adj[i, j] = adj[j, i] = True
        return cls(n, adj)

    @classmethod
    def from_pair_vector(cls, n, vector):
        """Create a graph from its N edge indicators in pair-index order."""
        vector = np.asarray(vector, bool)
        if vector.shape != (pair_count(n),):
            raise InvalidArgument(f"Expected {pair_count(n)} edge indicators")
        I, J = pair_arrays(n)
        adj = np.zeros((n, n), bool)
        adj[I, J] = vector
        adj[J, I] = vector
        return cls(n, adj)

    @classmethod
    def from_networkx(cls, g):
        """Create a graph from a networkx graph with nodes 0..n-1."""
        n = g.number_of_nodes()
        return cls.from_edges(n, ((min(i, j), max(i, j)) for i, j in g.edges()))

    @property
    def n(self):
        """The number of vertices."""
        return self._n

    @property
    def N(self):
        """The number of vertex pairs."""
        return pair_count(self._n)

    @property
    def adjacency(self):
        """The read-only boolean adjacency matrix."""
        return self._adj

    def has_edge(self, i, j):
        return bool(self._adj[i, j])

    def edge_value(self, s):
        """Get the edge indicator x_s (0 or 1) of pair index s."""
        i, j = pair_unindex(s, self._n)
        return int(self._adj[i, j])

    def pair_vector(self):
        """Get the N edge indicators as a uint8 array in pair-index order."""
        I, J = pair_arrays(self._n)
        return self._adj[I, J].astype(np.uint8)

    def edges(self):
        """Get a list of (i, j) tuples with i < j, in pair-index order."""
        I, J = pair_arrays(self._n)
        mask = self._adj[I, J]
        return list(zip(I[mask].tolist(), J[mask].tolist()))

    def degrees(self):
        """Get the degrees of all vertices as an int array."""
        return self._adj.sum(axis=1).astype(np.int64)

    def neighbours(self, v):
        """Get the sorted list of vertices adjacent to v."""
        return np.flatnonzero(self._adj[v]).tolist()

    def density(self):
        """Get the fraction of vertex pairs that are edges."""
        N = self.N
        return edge_count(self) / N if N else 0.0

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self._n))
        g.add_edges_from(self.edges())
        return g

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and bool((self._adj == other._adj).all())

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._n, np.packbits(self._adj).tobytes()))
        return self._hash

    def __repr__(self):
        return f"<Graph n={self._n} edges={edge_count(self)}>"


# %% Edge flips


def flip_edge(x, s):
    """Get a copy of graph x with the edge indicator of pair s toggled."""
    i, j = pair_unindex(s, x.n)
    adj = x.adjacency.copy()
    adj[i, j] = adj[j, i] = not adj[i, j]
    return Graph(x.n, adj)


def set_edge(x, s, value):
    """Get a copy of graph x with x_s set to value (x^(s,1) or x^(s,0))."""
    i, j = pair_unindex(s, x.n)
    if bool(x.adjacency[i, j]) == bool(value):
        return x
    return flip_edge(x, s)


# %% Counts


def edge_count(x):
    """Get the number of edges E(x)."""
    return int(x.adjacency.sum()) // 2


def degree(x, v):
    """Get the degree of vertex v."""
    return int(x.adjacency[v].sum())


def two_star_count(x):
    """Get the number of two-stars S_2(x) = sum_v C(deg(v), 2)."""
    d = x.degrees()
    return int((d * (d - 1) // 2).sum())


def triangle_count(x):
    """Get the number of triangles."""
    a = x.adjacency.astype(np.int64)
    return int(np.trace(a @ a @ a)) // 6


# %% Summary statistics


def check_statistic_kind(kind):
    if kind not in STATISTIC_KINDS:
        raise InvalidArgument(
            f"Unknown summary statistic {kind!r}, expected one of {STATISTIC_KINDS}"
        )
    return kind


def summary_statistic(x, s, kind):
    """Get the summary statistic t(x_{-s}) for pair s.

    * density: always 0 (a single unconditional bin).
    * bidegree: the sorted pair of endpoint degrees, ignoring the edge s.
    * common_neighbours: the number of vertices adjacent to both endpoints.

    The value never depends on x_s itself.
    """
    check_statistic_kind(kind)
    i, j = pair_unindex(s, x.n)
    if kind == DENSITY:
        return 0
    adj = x.adjacency
    if kind == BIDEGREE:
        own = int(adj[i, j])
        di = int(adj[i].sum()) - own
        dj = int(adj[j].sum()) - own
        return (min(di, dj), max(di, dj))
    else:
        return int((adj[i] & adj[j]).sum())


def summary_statistics(x, kind):
    """Get the summary statistic of every pair as a list in pair-index order.
    Equivalent to calling summary_statistic() for each s, but vectorized.
    """
    check_statistic_kind(kind)
    n = x.n
    I, J = pair_arrays(n)
    if kind == DENSITY:
        return [0] * len(I)
    a = x.adjacency.astype(np.int64)
    if kind == BIDEGREE:
        own = a[I, J]
        d = a.sum(axis=1)
        di = d[I] - own
        dj = d[J] - own
        lo = np.minimum(di, dj).tolist()
        hi = np.maximum(di, dj).tolist()
        return list(zip(lo, hi))
    else:
        return (a @ a)[I, J].tolist()

"""
Graph kernels: constant, Gaussian vertex-edge histogram (GVEH), K-step
random walk (KRW), geometric random walk (GRW), shortest path (SP),
Weisfeiler-Lehman subtree (WL), graphlet (GLET) and connected graphlet
(CONGLET) kernels, and Gram matrices over lists of graphs.

Graphs are unlabeled apart from their vertex indices. Walk kernels count
walks in the direct product graph, whose vertex (v, v') has index
v * n' + v', matching scipy.sparse.kron.
"""

import csv
import math
import functools
from collections import Counter

import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.csgraph import shortest_path

from .._errors import (
    InvalidArgument,
    IncompatibleGraphs,
    DivergentKernel,
    SingularKernel,
)
from ._graphlets import graphlet_features


CONST = "const"
GVEH = "gveh"
KRW = "krw"
GRW = "grw"
SP = "sp"
WL = "wl"
GLET = "glet"
CONGLET = "conglet"

KERNEL_KINDS = CONST, GVEH, KRW, GRW, SP, WL, GLET, CONGLET

DEFAULT_KRW_LAMBDA = 1.0 / 3.0


class KernelSpec:
    """A graph kernel with its hyperparameters.

    * const: no parameters.
    * gveh: bandwidth `sigma` > 0.
    * krw: maximal walk length `K` >= 0 and weight `lam` (default 1/3).
    * grw: discount weight `lam` > 0.
    * sp: no parameters.
    * wl: level `h` >= 0.
    * glet, conglet: graphlet size `l` in {3, 4}.
    """

    __slots__ = ["kind", "params"]

    def __init__(self, kind, **params):
        kind = str(kind).lower()
        if kind not in KERNEL_KINDS:
            raise InvalidArgument(f"Unknown kernel {kind!r}, expected one of {KERNEL_KINDS}")
        if kind == GVEH:
            params = {"sigma": float(params["sigma"])}
            if not params["sigma"] > 0:
                raise InvalidArgument(f"GVEH bandwidth must be > 0, got {params['sigma']}")
        elif kind == KRW:
            params = {
                "K": int(params["K"]),
                "lam": float(params.get("lam", DEFAULT_KRW_LAMBDA)),
            }
            if params["K"] < 0:
                raise InvalidArgument(f"KRW walk length must be >= 0, got {params['K']}")
        elif kind == GRW:
            params = {"lam": float(params["lam"])}
            if not params["lam"] > 0:
                raise InvalidArgument(f"GRW weight must be > 0, got {params['lam']}")
        elif kind == WL:
            params = {"h": int(params["h"])}
            if params["h"] < 0:
                raise InvalidArgument(f"WL level must be >= 0, got {params['h']}")
        elif kind in (GLET, CONGLET):
            params = {"l": int(params["l"])}
            if params["l"] not in (3, 4):
                raise InvalidArgument(f"Graphlet size must be 3 or 4, got {params['l']}")
        else:
            params = {}
        self.kind = kind
        self.params = params

    @classmethod
    def parse(cls, text):
        """Parse a kernel name like "const", "sp", "wl3", "grw0.01",
        "gveh1", "krw5", "krw5:0.2", "glet4" or "conglet3".
        """
        text = text.strip().lower()
        for kind in sorted(KERNEL_KINDS, key=len, reverse=True):
            if text.startswith(kind):
                rest = text[len(kind) :]
                break
        else:
            raise InvalidArgument(f"Cannot parse kernel {text!r}")
        try:
            if kind in (CONST, SP):
                if rest:
                    raise ValueError("no parameter expected")
                return cls(kind)
            elif kind == GVEH:
                return cls(kind, sigma=float(rest))
            elif kind == KRW:
                K, _, lam = rest.partition(":")
                return cls(kind, K=int(K), lam=float(lam) if lam else DEFAULT_KRW_LAMBDA)
            elif kind == GRW:
                return cls(kind, lam=float(rest))
            elif kind == WL:
                return cls(kind, h=int(rest))
            else:
                return cls(kind, l=int(rest))
        except (ValueError, KeyError) as err:
            raise InvalidArgument(f"Cannot parse kernel {text!r}: {err}")

    @property
    def name(self):
        return self.kind.upper()

    @property
    def param(self):
        """The hyperparameter as a string (empty for parameterless kernels)."""
        if self.kind == KRW:
            return f"{self.params['K']}:{self.params['lam']:g}"
        return ":".join(f"{v:g}" for v in self.params.values())

    def __str__(self):
        if self.kind == KRW:
            return f"krw{self.params['K']}:{self.params['lam']:g}"
        return self.kind + self.param

    def __eq__(self, other):
        if not isinstance(other, KernelSpec):
            return NotImplemented
        return self.kind == other.kind and self.params == other.params

    def __hash__(self):
        return hash((self.kind, tuple(sorted(self.params.items()))))

    def __repr__(self):
        return f"<KernelSpec {self}>"


# %% Product graphs


class ProductGraph:
    """The direct (tensor) product of two graphs: vertex (v, v') is adjacent
    to (u, u') iff v~u and v'~u'. The adjacency is a sparse matrix.
    """

    __slots__ = ["n1", "n2", "adjacency"]

    def __init__(self, x, x2):
        self.n1 = x.n
        self.n2 = x2.n
        a1 = scipy.sparse.csr_matrix(x.adjacency, dtype=float)
        a2 = scipy.sparse.csr_matrix(x2.adjacency, dtype=float)
        self.adjacency = scipy.sparse.kron(a1, a2, format="csr")

    @property
    def size(self):
        return self.n1 * self.n2

    def index(self, v, v2):
        return v * self.n2 + v2


def product_graph(x, x2):
    return ProductGraph(x, x2)


# %% The kernels


def constant_kernel(x, x2):
    return 1.0


def gveh(x, x2, sigma):
    """Gaussian vertex-edge histogram kernel.

    With index vertex labels the histogram is the edge-indicator tensor, so
    the squared distance is twice the number of pairs whose edge status
    differs (both orientations of a pair are counted).
    """
    if x.n != x2.n:
        raise IncompatibleGraphs(f"GVEH needs equal vertex counts, got {x.n} and {x2.n}")
    differing = int((x.adjacency != x2.adjacency).sum()) // 2
    return math.exp(-2.0 * differing / (2.0 * sigma * sigma))


def k_step_random_walk(x, x2, K, lam=DEFAULT_KRW_LAMBDA, weights=None):
    """K-step random walk kernel sum_t lam_t 1^T A_x^t 1 for t = 0..K.

    By default lam_0 = 1 and lam_t = lam for t >= 1. Pass `weights` (a
    sequence of K+1 values) to use other weights. Walks are counted with
    iterated products with the sparse product adjacency.
    """
    if K < 0:
        raise InvalidArgument(f"KRW walk length must be >= 0, got {K}")
    if weights is None:
        weights = [1.0] + [lam] * K
    elif len(weights) != K + 1:
        raise InvalidArgument(f"Expected {K + 1} walk weights, got {len(weights)}")
    pg = ProductGraph(x, x2)
    v = np.ones(pg.size)
    result = weights[0] * v.sum()
    for t in range(1, K + 1):
        v = pg.adjacency @ v
        result += weights[t] * v.sum()
    return float(result)


@functools.lru_cache(maxsize=1024)
def spectral_radius(x):
    """Get the largest absolute eigenvalue of the adjacency of x (cached per graph)."""
    if not x.adjacency.any():
        return 0.0
    eigvals = scipy.linalg.eigvalsh(x.adjacency.astype(float))
    return float(np.abs(eigvals).max())


def check_grw_convergence(x, x2, lam):
    """Raise DivergentKernel unless the walk series converges, i.e.
    lam * rho(A_x) < 1. The max-degree product is tried first as a cheap
    sufficient bound; the spectral radii are only computed if it fails.
    """
    d1 = int(x.degrees().max(initial=0))
    d2 = int(x2.degrees().max(initial=0))
    if lam * d1 * d2 < 1:
        return
    rho = spectral_radius(x) * spectral_radius(x2)
    if lam * rho >= 1:
        raise DivergentKernel(
            f"GRW diverges: lambda={lam:g} times spectral radius {rho:g} is >= 1"
        )


def grw_system(x, x2, lam):
    """Get the dense matrix I - lam A_x of the geometric random walk kernel."""
    pg = ProductGraph(x, x2)
    return np.eye(pg.size) - lam * pg.adjacency.toarray()


def geometric_random_walk(x, x2, lam):
    """Geometric random walk kernel 1^T (I - lam A_x)^-1 1, via one linear solve."""
    if not lam > 0:
        raise InvalidArgument(f"GRW weight must be > 0, got {lam}")
    check_grw_convergence(x, x2, lam)
    if not (x.adjacency.any() and x2.adjacency.any()):
        return float(x.n * x2.n)
    M = grw_system(x, x2, lam)
    try:
        sol = scipy.linalg.solve(M, np.ones(len(M)), assume_a="sym")
    except (np.linalg.LinAlgError, ValueError) as err:
        raise SingularKernel(f"GRW system is singular: {err}")
    return float(sol.sum())


def shortest_path_features(x):
    """Count the ordered vertex pairs per finite shortest-path distance.
    Returns an int array where element d-1 is the count at distance d.
    """
    n = x.n
    if n < 2:
        return np.zeros(0, np.int64)
    dist = shortest_path(x.adjacency.astype(float), method="FW", unweighted=True)
    finite = np.isfinite(dist) & (dist > 0)
    counts = np.bincount(dist[finite].astype(np.int64), minlength=n)
    return counts[1:n].astype(np.int64)


def shortest_path_kernel(x, x2):
    """Shortest path kernel: 1-step walk kernel on the shortest-path graphs,
    which counts pairs of ordered vertex pairs with equal finite distance.
    """
    return float(_dot_padded(shortest_path_features(x), shortest_path_features(x2)))


def _dot_padded(a, b):
    k = min(len(a), len(b))
    return int(np.dot(a[:k], b[:k]))


def _wl_rounds(graphs, h):
    # Yields the label array (m, n_max) of each round; 0 marks padding
    m = len(graphs)
    n_max = max(x.n for x in graphs)
    adj = np.zeros((m, n_max, n_max), bool)
    valid = np.zeros((m, n_max), bool)
    for k, x in enumerate(graphs):
        adj[k, : x.n, : x.n] = x.adjacency
        valid[k, : x.n] = True
    labels = valid.astype(np.int64)
    yield labels
    for _ in range(h):
        # Non-neighbours sort first as zeros, so equal rows mean equal
        # own label, degree and neighbour label multiset
        nbr = np.sort(np.where(adj, labels[:, None, :], 0), axis=2)
        signature = np.concatenate([labels[:, :, None], nbr], axis=2)[valid]
        _, codes = np.unique(signature, axis=0, return_inverse=True)
        labels = np.zeros((m, n_max), np.int64)
        labels[valid] = codes.reshape(-1) + 1
        yield labels


def wl_feature_matrix(graphs, h):
    """Get the Weisfeiler-Lehman subtree features of a list of graphs as an
    int matrix with one row per graph and one column per (round, label).

    Starts from uniform labels; each round replaces the label of a vertex by
    a compressed label for (own label, sorted neighbour labels). The
    compression is shared by all graphs in this call only.
    """
    if h < 0:
        raise InvalidArgument(f"WL level must be >= 0, got {h}")
    graphs = list(graphs)
    if not graphs:
        return np.zeros((0, 0), np.int64)
    rows = np.arange(len(graphs))[:, None]
    blocks = []
    for labels in _wl_rounds(graphs, h):
        counts = np.zeros((len(graphs), labels.max() + 1), np.int64)
        np.add.at(counts, (np.broadcast_to(rows, labels.shape), labels), 1)
        blocks.append(counts[:, 1:])
    return np.hstack(blocks)


def wl_features(graphs, h):
    """Get the Weisfeiler-Lehman features as one Counter per graph, keyed
    by (round, label).
    """
    if h < 0:
        raise InvalidArgument(f"WL level must be >= 0, got {h}")
    graphs = list(graphs)
    features = [Counter() for _ in graphs]
    if not graphs:
        return features
    for it, labels in enumerate(_wl_rounds(graphs, h)):
        for feat, x, lab in zip(features, graphs, labels):
            feat.update((it, int(label)) for label in lab[: x.n])
    return features


def weisfeiler_lehman(x, x2, h):
    """Weisfeiler-Lehman subtree kernel with h refinement rounds."""
    F = wl_feature_matrix([x, x2], h)
    return float(F[0] @ F[1])


def graphlet_kernel(x, x2, l, connected_only=False):
    """Inner product of graphlet count features."""
    f1 = graphlet_features(x, l, connected_only)
    f2 = graphlet_features(x2, l, connected_only)
    return float(np.dot(f1, f2))


# %% Dispatch


def kernel_eval(spec, x, x2):
    """Evaluate the kernel described by spec on two graphs."""
    p = spec.params
    if spec.kind == CONST:
        return constant_kernel(x, x2)
    elif spec.kind == GVEH:
        return gveh(x, x2, p["sigma"])
    elif spec.kind == KRW:
        return k_step_random_walk(x, x2, p["K"], p["lam"])
    elif spec.kind == GRW:
        return geometric_random_walk(x, x2, p["lam"])
    elif spec.kind == SP:
        return shortest_path_kernel(x, x2)
    elif spec.kind == WL:
        return weisfeiler_lehman(x, x2, p["h"])
    elif spec.kind == GLET:
        return graphlet_kernel(x, x2, p["l"], False)
    else:
        return graphlet_kernel(x, x2, p["l"], True)


def gram_matrix(spec, graphs):
    """Get the symmetric matrix G[a, b] = k(graphs[a], graphs[b]).

    Feature-based kernels compute each graph's features once and take inner
    products; the others evaluate the upper triangle pairwise.
    """
    graphs = list(graphs)
    m = len(graphs)
    if m == 0:
        return np.zeros((0, 0))
    p = spec.params
    if spec.kind == CONST:
        return np.ones((m, m))
    elif spec.kind == GVEH:
        sizes = set(x.n for x in graphs)
        if len(sizes) > 1:
            raise IncompatibleGraphs(f"GVEH needs equal vertex counts, got {sorted(sizes)}")
        V = np.array([x.pair_vector() for x in graphs], float)
        differing = (V[:, None, :] != V[None, :, :]).sum(axis=2)
        return np.exp(-differing / p["sigma"] ** 2)
    elif spec.kind == SP:
        feats = [shortest_path_features(x) for x in graphs]
        width = max(len(f) for f in feats)
        F = np.array([np.pad(f, (0, width - len(f))) for f in feats], float)
        return F @ F.T
    elif spec.kind == WL:
        F = wl_feature_matrix(graphs, p["h"])
        return (F @ F.T).astype(float)
    elif spec.kind in (GLET, CONGLET):
        F = np.array([graphlet_features(x, p["l"], spec.kind == CONGLET) for x in graphs])
        return (F @ F.T).astype(float)
    else:
        G = np.zeros((m, m))
        for a in range(m):
            for b in range(a, m):
                G[a, b] = G[b, a] = kernel_eval(spec, graphs[a], graphs[b])
        return G


def write_gram_csv(G, ids, file):
    """Write a Gram matrix as CSV with a header row of graph ids."""
    ids = [str(i) for i in ids]
    if G.shape != (len(ids), len(ids)):
        raise InvalidArgument("Gram matrix shape does not match the number of ids")
    close = False
    if isinstance(file, str):
        file = open(file, "w", newline="")
        close = True
    try:
        writer = csv.writer(file)
        writer.writerow(["id"] + ids)
        for id, row in zip(ids, G):
            writer.writerow([id] + [repr(float(v)) for v in row])
    finally:
        if close:
            file.close()

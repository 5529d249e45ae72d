"""
Graphlet counting for graphs, for graphlets of size 3 and 4.

A graphlet is the isomorphism class of an induced subgraph on l vertices.
There are 4 classes for l=3 and 11 for l=4. For l <= 4 the class of a
small graph is fully determined by (edge count, sorted degree sequence,
triangle count), which is used as the canonical key.
"""

from itertools import combinations

import numpy as np

from .._errors import GraphTooSmall, InvalidArgument


# Each class: (name, sorted degree sequence, triangle count, connected)
GRAPHLET_CLASSES = {
    3: [
        ("empty", (0, 0, 0), 0, False),
        ("edge", (0, 1, 1), 0, False),
        ("path", (1, 1, 2), 0, True),
        ("triangle", (2, 2, 2), 1, True),
    ],
    4: [
        ("empty", (0, 0, 0, 0), 0, False),
        ("edge", (0, 0, 1, 1), 0, False),
        ("two-edges", (1, 1, 1, 1), 0, False),
        ("path3", (0, 1, 1, 2), 0, False),
        ("triangle", (0, 2, 2, 2), 1, False),
        ("path4", (1, 1, 2, 2), 0, True),
        ("star", (1, 1, 1, 3), 0, True),
        ("cycle", (2, 2, 2, 2), 0, True),
        ("paw", (1, 2, 2, 3), 1, True),
        ("diamond", (2, 2, 3, 3), 2, True),
        ("complete", (3, 3, 3, 3), 4, True),
    ],
}

GRAPHLET_SIZES = tuple(GRAPHLET_CLASSES)


def graphlet_key(degrees, triangles):
    """Get the canonical key (edges, sorted degrees, triangles) of a small graph."""
    degrees = tuple(sorted(int(d) for d in degrees))
    return sum(degrees) // 2, degrees, int(triangles)


def graphlet_class_names(l, connected_only=False):
    """Get the names of the graphlet classes, in feature order."""
    _check_size(l)
    return [c[0] for c in GRAPHLET_CLASSES[l] if c[3] or not connected_only]


def _check_size(l):
    if l not in GRAPHLET_CLASSES:
        raise InvalidArgument(f"Graphlet size must be one of {GRAPHLET_SIZES}, got {l}")


_lookup_cache = {}


def _lookup(l):
    # Maps an integer code of (sorted degrees, triangles) to a class index
    try:
        return _lookup_cache[l]
    except KeyError:
        pass
    table = {}
    for index, (_, degrees, triangles, _) in enumerate(GRAPHLET_CLASSES[l]):
        code = _encode(np.array([degrees]), np.array([triangles]), l)[0]
        table[int(code)] = index
    _lookup_cache[l] = table
    return table


def _encode(sorted_degrees, triangles, l):
    code = np.zeros(len(sorted_degrees), np.int64)
    for k in range(l):
        code = code * l + sorted_degrees[:, k]
    return code * 8 + triangles


def _subset_array(n, l):
    return np.array(list(combinations(range(n), l)), dtype=np.intp).reshape(-1, l)


def graphlet_features(x, l, connected_only=False):
    """Count the induced subgraphs of x on l vertices per graphlet class.

    Returns an int array with one count per class (see
    graphlet_class_names()). With connected_only, only the connected
    classes are included.
    """
    _check_size(l)
    if x.n < l:
        raise GraphTooSmall(f"Graphlets of size {l} need n >= {l}, got n={x.n}")
    subsets = _subset_array(x.n, l)
    adj = x.adjacency.astype(np.int64)
    sub = adj[subsets[:, :, None], subsets[:, None, :]]
    degrees = np.sort(sub.sum(axis=2), axis=1)
    triangles = np.einsum("kab,kbc,kca->k", sub, sub, sub) // 6
    codes = _encode(degrees, triangles, l)
    lookup = _lookup(l)
    counts = np.zeros(len(GRAPHLET_CLASSES[l]), np.int64)
    for code, count in zip(*np.unique(codes, return_counts=True)):
        counts[lookup[int(code)]] += count
    if connected_only:
        mask = np.array([c[3] for c in GRAPHLET_CLASSES[l]])
        counts = counts[mask]
    return counts

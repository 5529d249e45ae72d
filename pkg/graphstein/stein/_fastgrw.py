"""
Stein kernel matrices for the geometric random walk kernel using low-rank
inverse updates.

For a row graph g = x^(+s), the kernel values k(g, x^(+s')) for all s'
share the system matrix I - lam kron(A_g, A_x) up to the toggle of pair
s' = (i, j) in the second factor. That toggle changes the system by

    -lam sigma sum_{u~v in g} (e_{ui} e_{vj}^T + e_{vj} e_{ui}^T)
                            + (e_{uj} e_{vi}^T + e_{vi} e_{uj}^T)

with index ui = u * n + i and sigma = +1 when the edge is added, -1 when
it is removed: a chain of symmetric rank-2 updates. Starting from one
inverse per row graph, each column only touches the rows/columns of the
product vertices (u, i) and (u, j) for non-isolated u, so a restricted
state suffices and its total is the kernel value.
"""

import logging

import numpy as np

from .._errors import SingularUpdate
from ..graphs import flip_edge, pair_unindex
from ..kernels import (
    InverseState,
    rank2_chain,
    geometric_random_walk,
    grw_system,
    check_grw_convergence,
)
from ._stein import SteinKernelMatrix, stein_coefficients, _pair_list, as_score


logger = logging.getLogger("graphstein")


def _toggled_value(base, g_edges, n, i, j, sigma, lam):
    rows = sorted(set(u for edge in g_edges for u in edge))
    positions = []
    for u in rows:
        positions.extend((u * n + i, u * n + j))
    where = {p: k for k, p in enumerate(positions)}
    state = base.restricted(positions)
    mu = -lam * sigma
    updates = []
    for u, v in g_edges:
        updates.append((where[u * n + i], where[v * n + j], mu))
        updates.append((where[u * n + j], where[v * n + i], mu))
    rank2_chain(state, updates)
    return state.total


def fast_grw_stein_matrix(score, x, lam, pairs):
    """Compute the flip-convention Stein kernel matrix of the GRW kernel.

    Keeps one inverse of I - lam kron(A_g, A_x) per distinct flipped graph
    g and gets each kernel value with a chain of rank-2 updates. Falls
    back to a dense solve for a value if an update is (near) singular.
    Raises DivergentKernel for the same inputs as the dense computation.
    """
    score = as_score(score)
    pairs = _pair_list(x, pairs)
    c = stein_coefficients(score, x)[pairs]
    n = x.n
    unique, inverse = np.unique(pairs, return_inverse=True)
    flipped = [flip_edge(x, s) for s in unique.tolist()]
    x_vector = x.pair_vector()

    m = len(unique)
    for a in range(m):
        for b in range(a, m):
            check_grw_convergence(flipped[a], flipped[b], lam)

    K = np.zeros((m, m))
    fallbacks = 0
    for a in range(m):
        g = flipped[a]
        g_edges = g.edges()
        try:
            base = InverseState.from_matrix(grw_system(g, x, lam))
        except SingularUpdate as err:
            logger.debug(f"No base inverse for row {a}: {err}")
            base = None
        for b in range(a, m):
            value = None
            if base is not None:
                i, j = pair_unindex(int(unique[b]), n)
                sigma = -1.0 if x_vector[unique[b]] else 1.0
                try:
                    value = _toggled_value(base, g_edges, n, i, j, sigma, lam)
                except SingularUpdate as err:
                    logger.debug(f"Falling back to a dense GRW solve: {err}")
            if value is None:
                value = geometric_random_walk(g, flipped[b], lam)
                fallbacks += 1
            K[a, b] = K[b, a] = value
    if fallbacks:
        logger.info(f"Fast GRW used {fallbacks} dense fallbacks out of {m * (m + 1) // 2}")
    H = np.outer(c, c) * K[np.ix_(inverse, inverse)]
    return SteinKernelMatrix(H, pairs, c)

"""
Exponential random graph models (ERGMs) with edge and two-star terms.

The density is q(x) proportional to exp(beta . t(x)). With the default
"raw" counts t(x) = (E(x), S_2(x)), the edge count and two-star count.
The "scaled" counts follow the subgraph-homomorphism scaling: t_edge = 2 E(x)
(the number of edge-preserving injections of an edge) and
t_twostar = 2 S_2(x) / n.

The conditional probability that pair s = (i, j) is an edge given the rest
of the graph is the logistic function of the change statistics:

    q(x^(s,1) | x_-s) = expit(beta . (t(x^(s,1)) - t(x^(s,0))))


For raw counts the change in E is 1 and the change in S_2 is
deg_-s(i) + deg_-s(j).
"""

import math

import numpy as np
from scipy.special import expit

from .._errors import InvalidArgument, IncompatibleGraphs, TooLarge
from ._graph import Graph, pair_count, pair_arrays, edge_count, two_star_count


EDGE = "edge"
TWOSTAR = "twostar"

TERMS = EDGE, TWOSTAR
COUNT_MODES = "raw", "scaled"

MAX_ENUMERATE_N = 5


class ErgmModel:
    """An ERGM on graphs with n vertices.

    * `terms`: sequence of term names, each "edge" or "twostar".
    * `beta`: the coefficients, aligned with the terms.
    * `n`: the number of vertices (at least 2).
    * `counts`: "raw" (default) or "scaled".
    """

    __slots__ = ["terms", "beta", "n", "counts"]

    def __init__(self, terms, beta, n, counts="raw"):
        terms = tuple(str(t).lower() for t in terms)
        beta = tuple(float(b) for b in beta)
        for t in terms:
            if t not in TERMS:
                raise InvalidArgument(f"Unknown ERGM term {t!r}, expected one of {TERMS}")
        if len(set(terms)) != len(terms):
            raise InvalidArgument("ERGM terms must be unique")
        if len(beta) != len(terms):
            raise InvalidArgument(
                f"Got {len(beta)} coefficients for {len(terms)} ERGM terms"
            )
        if int(n) < 2:
            raise InvalidArgument(f"An ERGM needs n >= 2, got {n}")
        if counts not in COUNT_MODES:
            raise InvalidArgument(f"ERGM counts must be one of {COUNT_MODES}")
        self.terms = terms
        self.beta = beta
        self.n = int(n)
        self.counts = counts

    @classmethod
    def e2s(cls, beta1, beta2, n, counts="raw"):
        """Create the edge-two-star model with coefficients (beta1, beta2)."""
        return cls((EDGE, TWOSTAR), (beta1, beta2), n, counts)

    def coefficient(self, term):
        """Get the coefficient of the given term (0 if the term is absent)."""
        try:
            return self.beta[self.terms.index(term)]
        except ValueError:
            return 0.0

    def with_beta(self, beta):
        """Get a copy of this model with other coefficients."""
        return ErgmModel(self.terms, beta, self.n, self.counts)

    def __eq__(self, other):
        if not isinstance(other, ErgmModel):
            return NotImplemented
        return all(getattr(self, k) == getattr(other, k) for k in self.__slots__)

    def __hash__(self):
        return hash(tuple(getattr(self, k) for k in self.__slots__))

    def __repr__(self):
        beta = ", ".join(f"{t}={b:g}" for t, b in zip(self.terms, self.beta))
        return f"<ErgmModel n={self.n} {beta} counts={self.counts}>"


def _check_size(m, x):
    if x.n != m.n:
        raise IncompatibleGraphs(f"Graph has n={x.n} but the model has n={m.n}")


def sufficient_statistics(m, x):
    """Get the vector t(x) aligned with the model terms."""
    _check_size(m, x)
    values = []
    for term in m.terms:
        if term == EDGE:
            v = edge_count(x)
            values.append(2.0 * v if m.counts == "scaled" else float(v))
        else:
            v = two_star_count(x)
            values.append(2.0 * v / m.n if m.counts == "scaled" else float(v))
    return np.array(values)


def log_unnormalized_density(m, x):
    """Get beta . t(x). The normalization constant is never computed."""
    return float(np.dot(m.beta, sufficient_statistics(m, x)))


def _change_statistics(m, di, dj):
    """Get the change in t when adding the edge between vertices with
    (edge-excluded) degrees di and dj. Works elementwise on arrays.
    """
    scale_e, scale_s = (2.0, 2.0 / m.n) if m.counts == "scaled" else (1.0, 1.0)
    eta = 0.0
    for term, b in zip(m.terms, m.beta):
        if term == EDGE:
            eta = eta + b * scale_e
        else:
            eta = eta + b * scale_s * (di + dj)
    return eta


def conditional_edge_prob(m, x, s):
    """Get the probability q(x^(s,1) | x_-s) that pair s is an edge given
    the rest of x. Does not depend on x_s.
    """
    return float(conditional_edge_probs(m, x)[s])


def conditional_edge_probs(m, x):
    """Get the conditional edge probabilities of all N pairs as an array."""
    _check_size(m, x)
    I, J = pair_arrays(x.n)
    a = x.adjacency.astype(np.int64)
    d = a.sum(axis=1)
    own = a[I, J]
    eta = _change_statistics(m, d[I] - own, d[J] - own)
    return expit(np.broadcast_to(eta, I.shape).astype(float))


# %% Sampling


def _logistic(eta):
    """Scalar expit for the per-step loop of the Glauber chain, where the
    call overhead of the ufunc on a single float dominates.
    """
    if eta >= 0:
        return 1.0 / (1.0 + math.exp(-eta))
    z = math.exp(eta)
    return z / (1.0 + z)


def _initial_prob(m):
    if EDGE not in m.terms:
        return 0.5
    scale = 2.0 if m.counts == "scaled" else 1.0
    return float(expit(scale * m.coefficient(EDGE)))


class _GlauberChain:
    """Glauber dynamics on the edge indicators, keeping degrees up to date."""

    def __init__(self, m, rng):
        self.m = m
        self.rng = rng
        n = m.n
        self.I, self.J = pair_arrays(n)
        N = len(self.I)
        vector = rng.random(N) < _initial_prob(m)
        self.adj = np.zeros((n, n), bool)
        self.adj[self.I, self.J] = vector
        self.adj[self.J, self.I] = vector
        self.deg = self.adj.sum(axis=1).astype(np.int64)

    def run(self, steps):
        m, adj, deg, I, J = self.m, self.adj, self.deg, self.I, self.J
        pairs = self.rng.integers(len(I), size=steps)
        uniforms = self.rng.random(steps)
        for s, u in zip(pairs.tolist(), uniforms.tolist()):
            i, j = int(I[s]), int(J[s])
            own = int(adj[i, j])
            eta = _change_statistics(m, deg[i] - own, deg[j] - own)
            new = u < _logistic(eta)
            if new != own:
                adj[i, j] = adj[j, i] = new
                delta = 1 if new else -1
                deg[i] += delta
                deg[j] += delta

    def graph(self):
        return Graph(self.m.n, self.adj)


def gibbs_sample(m, steps, seed):
    """Run `steps` Glauber steps from an independent Bernoulli start and
    return the final graph. Deterministic given the seed.
    """
    if int(steps) < 1:
        raise InvalidArgument(f"gibbs_sample needs steps >= 1, got {steps}")
    chain = _GlauberChain(m, np.random.default_rng(seed))
    chain.run(int(steps))
    return chain.graph()


def sample_chain(m, count, seed, burn_in=None, thin=None):
    """Draw `count` graphs from one Glauber chain.

    The defaults are a burn-in of 10 N steps and N steps between retained
    samples, with N the number of vertex pairs.
    """
    if int(count) < 1:
        raise InvalidArgument(f"sample_chain needs count >= 1, got {count}")
    N = pair_count(m.n)
    burn_in = 10 * N if burn_in is None else int(burn_in)
    thin = N if thin is None else int(thin)
    if burn_in < 0 or thin < 1:
        raise InvalidArgument("burn_in must be >= 0 and thin >= 1")
    chain = _GlauberChain(m, np.random.default_rng(seed))
    chain.run(burn_in)
    samples = []
    for _ in range(int(count)):
        chain.run(thin)
        samples.append(chain.graph())
    return samples


# %% Exhaustive enumeration


def enumerate_distribution(m):
    """Get the exact distribution as a list of (graph, probability) over all
    2^N graphs. Only for n <= 5.
    """
    if m.n > MAX_ENUMERATE_N:
        raise TooLarge(
            f"Can only enumerate graphs with n <= {MAX_ENUMERATE_N}, got n={m.n}"
        )
    n = m.n
    N = pair_count(n)
    I, J = pair_arrays(n)
    codes = np.arange(2**N, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(N)) & 1
    incidence = np.zeros((N, n), np.int64)
    incidence[np.arange(N), I] = 1
    incidence[np.arange(N), J] = 1
    degrees = bits @ incidence
    edges = bits.sum(axis=1).astype(float)
    twostars = (degrees * (degrees - 1) // 2).sum(axis=1).astype(float)
    if m.counts == "scaled":
        edges, twostars = 2.0 * edges, 2.0 * twostars / n
    logq = np.zeros(len(codes))
    for term, b in zip(m.terms, m.beta):
        logq += b * (edges if term == EDGE else twostars)
    weights = np.exp(logq - logq.max())
    probs = weights / weights.sum()
    return [
        (Graph.from_pair_vector(n, bits[k]), float(probs[k])) for k in range(len(codes))
    ]

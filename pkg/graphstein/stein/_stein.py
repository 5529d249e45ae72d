"""
The Stein operator for random graphs and the kernel Stein statistics.

For a graph x and vertex pair s, with q1 = q(x^(s,1) | x_-s), the Stein
operator applied to a test function f is

    A^(s) f(x) = q1 f(x^(s,1)) + (1 - q1) f(x^(s,0)) - f(x)
               = c_s (f(x^(s,1)) - f(x^(s,0)))

with the coefficient c_s = q1 - x_s. The statistic is the squared RKHS
norm of the pair-averaged operator, a quadratic form in the Stein kernel
matrix H over the chosen pairs.

Two conventions for H are available:

* "flip" (default): H[b, b'] = c_b c_b' k(x^(+s_b), x^(+s_b')), where
  x^(+s) is x with pair s toggled. With the constant kernel the statistic
  is the squared mean of the edge residuals.
* "literal": the exact expansion of <A^(s) k(x, .), A^(s') k(x, .)>, which
  vanishes identically for the constant kernel.
"""

import logging

import numpy as np

from .._errors import InvalidArgument, IncompatibleGraphs
from ..graphs import flip_edge, pair_count
from ..graphs._ergm import ErgmModel, conditional_edge_probs
from ..kernels import gram_matrix, CONST, GRW


logger = logging.getLogger("graphstein")

FLIP = "flip"
LITERAL = "literal"

CONVENTIONS = FLIP, LITERAL


# %% Score sources


class ScoreSource:
    """Provides q1(x, s), the probability that pair s is an edge given
    the conditioning information. Create with exact(model) for an ERGM,
    or estimated(estimator) for a fitted ConditionalEstimator.
    """

    __slots__ = ["kind", "source"]

    def __init__(self, kind, source):
        if kind not in ("exact", "estimated"):
            raise InvalidArgument(f"Unknown score source kind {kind!r}")
        self.kind = kind
        self.source = source

    @property
    def n(self):
        return self.source.n

    def q1(self, x, s):
        return float(self.q1_all(x)[s])

    def q1_all(self, x):
        """Get q1(x, s) for all pairs s, as an array in pair-index order."""
        if x.n != self.n:
            raise IncompatibleGraphs(f"Graph has n={x.n} but the score has n={self.n}")
        if self.kind == "exact":
            return conditional_edge_probs(self.source, x)
        else:
            return self.source.probs(x)

    def __repr__(self):
        return f"<ScoreSource {self.kind} {self.source!r}>"


def exact(model):
    """Get the score source of the exact conditionals of an ErgmModel."""
    if not isinstance(model, ErgmModel):
        raise InvalidArgument("exact() needs an ErgmModel")
    return ScoreSource("exact", model)


def estimated(estimator):
    """Get the score source of the estimated conditionals of a ConditionalEstimator."""
    return ScoreSource("estimated", estimator)


def as_score(score):
    if isinstance(score, ScoreSource):
        return score
    elif isinstance(score, ErgmModel):
        return exact(score)
    raise InvalidArgument(f"Cannot use {score!r} as a score source")


# %% Pair selection


class PairSelection:
    """Which vertex pairs a statistic averages over: all N pairs, or B
    pairs re-sampled uniformly with replacement using a seed.
    """

    __slots__ = ["B", "seed"]

    def __init__(self, B=None, seed=None):
        if B is not None:
            B = int(B)
            if B < 1:
                raise InvalidArgument(f"Resample size must be >= 1, got {B}")
        self.B = B
        self.seed = seed

    @classmethod
    def all(cls):
        return cls()

    @classmethod
    def resample(cls, B, seed):
        return cls(B, seed)

    @property
    def is_all(self):
        return self.B is None

    def pairs(self, n):
        N = pair_count(n)
        if N == 0:
            raise InvalidArgument("A graph with n < 2 has no vertex pairs")
        if self.B is None:
            return np.arange(N)
        return resample_pairs(n, self.B, self.seed)

    def __repr__(self):
        if self.B is None:
            return "<PairSelection all>"
        return f"<PairSelection resample B={self.B} seed={self.seed}>"


def resample_pairs(n, B, seed):
    """Draw B pair indices uniformly with replacement."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return rng.integers(pair_count(n), size=int(B))


def _pair_list(x, pairs):
    if pairs is None:
        pairs = PairSelection.all()
    if isinstance(pairs, PairSelection):
        return pairs.pairs(x.n)
    pairs = np.asarray(pairs, dtype=np.int64).ravel()
    if len(pairs) == 0:
        raise InvalidArgument("Need at least one vertex pair")
    if pairs.min() < 0 or pairs.max() >= pair_count(x.n):
        raise InvalidArgument("Pair index out of range")
    return pairs


# %% The operator


def stein_coefficient(score, x, s):
    """Get c_s = q1(x, s) - x_s."""
    return as_score(score).q1(x, s) - x.edge_value(s)


def stein_coefficients(score, x):
    """Get c_s for all pairs as an array."""
    return as_score(score).q1_all(x) - x.pair_vector()


def resampled_operator(score, x, f, pairs=None):
    """Apply the pair-averaged Stein operator to a test function f,
    i.e. (1/B) sum_b c_b (f(x^(s_b,1)) - f(x^(s_b,0))).
    """
    pairs = _pair_list(x, pairs)
    c = stein_coefficients(score, x)
    fx = f(x)
    total = 0.0
    for s in pairs.tolist():
        fflip = f(flip_edge(x, s))
        diff = fflip - fx if x.edge_value(s) == 0 else fx - fflip
        total += c[s] * diff
    return total / len(pairs)


class SteinKernelMatrix:
    """The Stein kernel matrix H over a list of sampled pairs.

    * `H`: the symmetric len(pairs) x len(pairs) matrix.
    * `pairs`: the pair indices, aligned with the rows of H.
    * `coefficients`: the Stein coefficients c_s of the pairs.
    """

    __slots__ = ["H", "pairs", "coefficients"]

    def __init__(self, H, pairs, coefficients):
        self.H = H
        self.pairs = pairs
        self.coefficients = coefficients

    def statistic(self):
        """Get (1/B^2) sum H."""
        B = len(self.pairs)
        return float(self.H.sum()) / (B * B)

    def __len__(self):
        return len(self.pairs)

    def __repr__(self):
        return f"<SteinKernelMatrix B={len(self.pairs)}>"


def check_convention(convention):
    if convention not in CONVENTIONS:
        raise InvalidArgument(
            f"Unknown Stein kernel convention {convention!r}, expected one of {CONVENTIONS}"
        )
    return convention


def stein_kernel_matrix(score, x, pairs, spec, convention=FLIP, fast=False):
    """Compute the Stein kernel matrix of x over the given pairs.

    The kernel is evaluated once for each pair of distinct graphs in
    {x} and the flipped graphs of the distinct pairs. With fast=True and a
    GRW kernel in the flip convention, the walk kernel values are computed
    with rank-2 inverse updates instead.
    """
    check_convention(convention)
    score = as_score(score)
    pairs = _pair_list(x, pairs)
    c_all = stein_coefficients(score, x)
    c = c_all[pairs]
    if spec.kind == CONST:
        # k == 1: no flipped graphs needed, and the literal bracket is 0
        H = np.outer(c, c) if convention == FLIP else np.zeros((len(c), len(c)))
        return SteinKernelMatrix(H, pairs, c)
    if fast and spec.kind == GRW and convention == FLIP:
        from ._fastgrw import fast_grw_stein_matrix

        return fast_grw_stein_matrix(score, x, spec.params["lam"], pairs)

    unique, inverse = np.unique(pairs, return_inverse=True)
    flipped = [flip_edge(x, s) for s in unique.tolist()]
    if convention == FLIP:
        G = gram_matrix(spec, flipped)
        K = G[np.ix_(inverse, inverse)]
    else:
        # Graph 0 is x, graph 1 + u is x with unique[u] toggled
        G = gram_matrix(spec, [x] + flipped)
        present = x.pair_vector()[unique].astype(bool)
        flip_index = 1 + np.arange(len(unique))
        one = np.where(present, 0, flip_index)[inverse]
        zero = np.where(present, flip_index, 0)[inverse]
        K = (
            G[np.ix_(one, one)]
            - G[np.ix_(one, zero)]
            - G[np.ix_(zero, one)]
            + G[np.ix_(zero, zero)]
        )
    H = np.outer(c, c) * K
    return SteinKernelMatrix(H, pairs, c)


def kss_squared(score, x, spec, convention=FLIP, pairs=None, fast=False):
    """Get the squared graph kernel Stein statistic of x.

    `pairs` is a PairSelection (default all pairs) or an explicit list of
    pair indices. Non-negative in the flip convention.
    """
    if spec.kind == CONST:
        check_convention(convention)
        c = stein_coefficients(as_score(score), x)[_pair_list(x, pairs)]
        return float(c.mean()) ** 2 if convention == FLIP else 0.0
    return stein_kernel_matrix(score, x, pairs, spec, convention, fast).statistic()

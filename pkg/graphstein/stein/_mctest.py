"""
The Monte Carlo goodness-of-fit test and rejection rates.

A test compares the statistic tau of the observed graph with the
statistics of l graphs simulated from the null, each computed with its
own fresh pair re-sample. The threshold is the ceil((1 - a)(l + 1))-th
smallest null statistic, and the null is rejected iff tau is strictly
larger.

The null is either an ErgmModel (the gKSS test, exact conditionals) or a
GeneratorSpec (the AgraSSt test, conditionals estimated from n_fit
generator samples drawn with seeds disjoint from the simulations). A
directory of samples is split into a fitting part and a null part.
"""

import math
import time
import logging

import numpy as np
from joblib import Parallel, delayed

from .._config import config
from .._errors import InvalidArgument, IngestError
from ..graphs import (
    ErgmModel,
    GeneratorSpec,
    generate,
    generate_batch,
    sample_chain,
    check_statistic_kind,
    BIDEGREE,
)
from ._stein import exact, estimated, kss_squared, check_convention, PairSelection, FLIP
from ._estimator import fit_conditional_estimator, ConditionalEstimator


logger = logging.getLogger("graphstein")

# Offsets of the derived seed streams of one test
_OBSERVED, _SIMULATE, _FIT, _RESAMPLE = range(4)


def derive_seed(seed, stream):
    """Get an int seed for one of the streams of a test, so that the
    observed resample, the simulations and the estimator fit never share
    seeds.
    """
    ss = np.random.SeedSequence([int(seed), int(stream)])
    return int(ss.generate_state(1, np.uint32)[0])


class TestConfig:
    """The configuration of one Monte Carlo test.

    * `null`: an ErgmModel (gKSS) or a GeneratorSpec (AgraSSt).
    * `kernel`: a KernelSpec.
    * `convention`: "flip" (default) or "literal".
    * `resample_size`: B, the number of re-sampled pairs (None: all pairs).
    * `n_simulate`: l, the number of simulated null networks.
    * `level`: a, the test level in (0, 1).
    * `seed`: the base seed.
    * `statistic`: the summary statistic kind for AgraSSt (default bidegree).
    * `n_fit`: the number of samples used to fit the AgraSSt estimator.
    * `estimator`: an already fitted ConditionalEstimator (optional).
    * `fast`: use rank-2 updates for GRW kernels.

    Defaults for B, l, a and n_fit come from the config.
    """

    __test__ = False  # not a pytest class

    __slots__ = [
        "null",
        "kernel",
        "convention",
        "resample_size",
        "n_simulate",
        "level",
        "seed",
        "statistic",
        "n_fit",
        "estimator",
        "fast",
    ]

    def __init__(
        self,
        null,
        kernel,
        convention=FLIP,
        resample_size=-1,
        n_simulate=None,
        level=None,
        seed=0,
        statistic=BIDEGREE,
        n_fit=None,
        estimator=None,
        fast=False,
    ):
        if not isinstance(null, (ErgmModel, GeneratorSpec)):
            raise InvalidArgument("The null must be an ErgmModel or a GeneratorSpec")
        self.null = null
        self.kernel = kernel
        self.convention = check_convention(convention)
        if resample_size == -1:
            resample_size = config.resample_size
        self.resample_size = None if resample_size is None else int(resample_size)
        self.n_simulate = int(config.n_simulate if n_simulate is None else n_simulate)
        self.level = float(config.level if level is None else level)
        self.seed = int(seed)
        self.statistic = check_statistic_kind(statistic)
        self.n_fit = int(config.n_fit if n_fit is None else n_fit)
        self.estimator = estimator
        self.fast = bool(fast)
        if self.resample_size is not None and self.resample_size < 1:
            raise InvalidArgument(f"Resample size B must be >= 1, got {resample_size}")
        if self.n_simulate < 1:
            raise InvalidArgument(f"n_simulate must be >= 1, got {self.n_simulate}")
        if not (0.0 < self.level < 1.0):
            raise InvalidArgument(f"The level must be in (0, 1), got {self.level}")
        if self.n_fit < 1:
            raise InvalidArgument(f"n_fit must be >= 1, got {self.n_fit}")
        if estimator is not None and not isinstance(estimator, ConditionalEstimator):
            raise InvalidArgument("estimator must be a ConditionalEstimator")

    @property
    def is_agrasst(self):
        return isinstance(self.null, GeneratorSpec)

    @property
    def n(self):
        return self.null.n

    def replace(self, **kwargs):
        """Get a copy with some fields replaced."""
        values = {k: getattr(self, k) for k in self.__slots__}
        values.update(kwargs)
        return TestConfig(**values)

    def __repr__(self):
        kind = "agrasst" if self.is_agrasst else "gkss"
        return f"<TestConfig {kind} {self.kernel} B={self.resample_size} l={self.n_simulate}>"


class TestOutcome:
    """The result of a Monte Carlo test."""

    __test__ = False

    __slots__ = ["tau", "null_taus", "threshold", "reject", "p_value"]

    def __init__(self, tau, null_taus, threshold, reject, p_value):
        self.tau = tau
        self.null_taus = null_taus
        self.threshold = threshold
        self.reject = reject
        self.p_value = p_value

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__slots__}

    def __eq__(self, other):
        if not isinstance(other, TestOutcome):
            return NotImplemented
        return (
            self.tau == other.tau
            and np.array_equal(self.null_taus, other.null_taus)
            and self.threshold == other.threshold
            and self.reject == other.reject
            and self.p_value == other.p_value
        )

    def __repr__(self):
        decision = "reject" if self.reject else "accept"
        return f"<TestOutcome tau={self.tau:.4g} threshold={self.threshold:.4g} p={self.p_value:.3g} {decision}>"


def empirical_threshold(null_taus, level):
    """Get the ceil((1 - a)(l + 1))-th order statistic of the null
    statistics, or +inf if that exceeds l.
    """
    null_taus = np.sort(np.asarray(null_taus, float))
    l = len(null_taus)
    k = math.ceil(round((1.0 - level) * (l + 1), 9))
    if k > l:
        return math.inf
    return float(null_taus[k - 1])


def p_value(tau, null_taus):
    """Get (1 + #{tau_i >= tau}) / (l + 1)."""
    null_taus = np.asarray(null_taus, float)
    return (1 + int((null_taus >= tau).sum())) / (len(null_taus) + 1)


def split_samples(count, n_simulate):
    """Split a batch of `count` sample graphs into the index ranges that
    fit the estimator and that serve as null simulations. The null takes
    the first min(n_simulate, count // 2) graphs and the fit the rest, so
    the two never overlap.
    """
    count = int(count)
    if count < 2:
        raise IngestError(f"Need at least two sample graphs, got {count}")
    n_null = min(int(n_simulate), count // 2)
    if n_null < n_simulate:
        logger.info(f"Using {n_null} of {count} samples as null simulations")
    return range(n_null, count), range(n_null)


def _null_score_and_graphs(cfg):
    sim_seed = derive_seed(cfg.seed, _SIMULATE)
    if not cfg.is_agrasst:
        graphs = sample_chain(cfg.null, cfg.n_simulate, sim_seed)
        return exact(cfg.null), graphs
    estimator = cfg.estimator
    if cfg.null.kind == "samples":
        batch = cfg.null.params["handle"].graphs
        fit, simulate = split_samples(len(batch), cfg.n_simulate)
        if estimator is None:
            fit_graphs = [batch[i] for i in fit]
            estimator = fit_conditional_estimator(cfg.statistic, fit_graphs)
        return estimated(estimator), [batch[i] for i in simulate]
    if estimator is None:
        fit_samples = generate_batch(cfg.null, cfg.n_fit, derive_seed(cfg.seed, _FIT))
        estimator = fit_conditional_estimator(cfg.statistic, fit_samples)
    return estimated(estimator), generate_batch(cfg.null, cfg.n_simulate, sim_seed)


def _pairs(cfg, seed):
    if cfg.resample_size is None:
        return PairSelection.all()
    return PairSelection.resample(cfg.resample_size, seed)


def run_test(x, cfg):
    """Run the Monte Carlo test of whether x was drawn from cfg.null.
    Deterministic given cfg.seed.
    """
    if x.n != cfg.n:
        raise InvalidArgument(f"Observed graph has n={x.n} but the null has n={cfg.n}")
    score, null_graphs = _null_score_and_graphs(cfg)
    resample_rng = np.random.default_rng(derive_seed(cfg.seed, _RESAMPLE))

    def statistic(graph, seed):
        pairs = _pairs(cfg, seed)
        return kss_squared(score, graph, cfg.kernel, cfg.convention, pairs, cfg.fast)

    tau = statistic(x, derive_seed(cfg.seed, _OBSERVED))
    null_seeds = resample_rng.integers(2**32, size=len(null_graphs)).tolist()
    null_taus = np.array([statistic(z, s) for z, s in zip(null_graphs, null_seeds)])
    threshold = empirical_threshold(null_taus, cfg.level)
    return TestOutcome(
        tau=float(tau),
        null_taus=null_taus,
        threshold=threshold,
        reject=bool(tau > threshold),
        p_value=p_value(tau, null_taus),
    )


class RejectionRate:
    """The fraction of rejected trials, with its binomial standard error."""

    __slots__ = ["rejections", "trials", "elapsed"]

    def __init__(self, rejections, trials, elapsed=0.0):
        self.rejections = int(rejections)
        self.trials = int(trials)
        self.elapsed = float(elapsed)

    @property
    def rate(self):
        return self.rejections / self.trials

    @property
    def stderr(self):
        r = self.rate
        return math.sqrt(r * (1.0 - r) / self.trials)

    def __iter__(self):
        yield self.rate
        yield self.stderr

    def __repr__(self):
        return f"<RejectionRate {self.rate:.3f} +- {self.stderr:.3f} ({self.trials} trials)>"


def _run_trial(observed, cfg, seed):
    x = generate(observed, seed)
    return run_test(x, cfg.replace(seed=seed)).reject


def rejection_rate(observed, cfg, trials=None, seed=None, workers=None):
    """Estimate the rejection rate of the test in cfg for graphs drawn from
    `observed` (a GeneratorSpec or ErgmModel). Trial t draws its graph and
    runs its test with seed + t. Trials run on a pool of `workers`
    processes (default config.workers).
    """
    trials = int(config.trials if trials is None else trials)
    seed = int(cfg.seed if seed is None else seed)
    workers = int(config.workers if workers is None else workers)
    if trials < 1:
        raise InvalidArgument(f"Need at least one trial, got {trials}")
    if isinstance(observed, ErgmModel):
        observed = GeneratorSpec.ergm(observed)
    if cfg.is_agrasst and cfg.estimator is None and cfg.null.kind != "samples":
        fit_samples = generate_batch(cfg.null, cfg.n_fit, derive_seed(seed, _FIT))
        cfg = cfg.replace(estimator=fit_conditional_estimator(cfg.statistic, fit_samples))

    t0 = time.perf_counter()
    if workers > 1:
        rejects = Parallel(n_jobs=workers)(
            delayed(_run_trial)(observed, cfg, seed + t) for t in range(trials)
        )
    else:
        rejects = [_run_trial(observed, cfg, seed + t) for t in range(trials)]
    result = RejectionRate(sum(rejects), trials, time.perf_counter() - t0)
    logger.info(f"{cfg!r} on {observed.describe()}: {result!r}")
    return result

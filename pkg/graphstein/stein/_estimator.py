"""
Estimated conditional edge probabilities for black-box generators.

The conditional law of pair s is approximated by conditioning on a
summary statistic t(x_-s) only: over a batch of generator samples, the
relative frequency of edges among all pairs that share the statistic
value estimates q(x^(s,1) | t). Statistic values that were never observed
fall back to the overall edge frequency of the batch.
"""

import io
import logging
from collections import defaultdict

import numpy as np

from .._errors import InvalidArgument, IncompatibleGraphs, ParseError
from ..graphs import (
    summary_statistics,
    check_statistic_kind,
    decode_text,
    BIDEGREE,
)
from ._stein import estimated, kss_squared, FLIP


logger = logging.getLogger("graphstein")


class ConditionalEstimator:
    """A fitted table of edge frequencies per summary statistic value.

    * `kind`: the summary statistic kind.
    * `n`: the vertex count of the graphs it was fitted on.
    * `table`: dict mapping statistic value to (present, total).
    * `fallback_prob`: the global edge frequency, used for unseen values.

    The estimator is not modified after fitting.
    """

    __slots__ = ["kind", "n", "table", "fallback_prob"]

    def __init__(self, kind, n, table, fallback_prob):
        self.kind = check_statistic_kind(kind)
        self.n = int(n)
        self.table = {}
        for key, (present, total) in table.items():
            present, total = int(present), int(total)
            if total < 1 or not (0 <= present <= total):
                raise InvalidArgument(f"Invalid estimator entry {key}: {present}/{total}")
            self.table[key] = (present, total)
        self.fallback_prob = float(fallback_prob)
        if not (0.0 <= self.fallback_prob <= 1.0):
            raise InvalidArgument(f"Invalid fallback probability {fallback_prob}")

    def prob(self, value):
        """Get the estimated edge probability for a statistic value."""
        try:
            present, total = self.table[value]
        except KeyError:
            return self.fallback_prob
        return present / total

    def probs(self, x):
        """Get the estimated q1 for all pairs of x, in pair-index order."""
        if x.n != self.n:
            raise IncompatibleGraphs(
                f"Estimator was fitted on n={self.n} but the graph has n={x.n}"
            )
        stats = summary_statistics(x, self.kind)
        cache = {}
        out = np.empty(len(stats))
        for s, value in enumerate(stats):
            try:
                out[s] = cache[value]
            except KeyError:
                out[s] = cache[value] = self.prob(value)
        return out

    def __eq__(self, other):
        if not isinstance(other, ConditionalEstimator):
            return NotImplemented
        return all(getattr(self, k) == getattr(other, k) for k in self.__slots__)

    def __repr__(self):
        return (
            f"<ConditionalEstimator {self.kind} n={self.n} bins={len(self.table)} "
            f"fallback={self.fallback_prob:.4g}>"
        )


def fit_conditional_estimator(kind, samples):
    """Fit the edge frequency table of the given statistic kind on a list
    of sample graphs, which must all have the same vertex count.
    """
    check_statistic_kind(kind)
    samples = list(samples)
    if not samples:
        raise InvalidArgument("Cannot fit an estimator on zero samples")
    n = samples[0].n
    present = defaultdict(int)
    total = defaultdict(int)
    for z in samples:
        if z.n != n:
            raise IncompatibleGraphs(f"Samples have mixed vertex counts {n} and {z.n}")
        stats = summary_statistics(z, kind)
        for value, edge in zip(stats, z.pair_vector().tolist()):
            present[value] += edge
            total[value] += 1
    n_pairs = sum(total.values())
    fallback = sum(present.values()) / n_pairs if n_pairs else 0.0
    table = {value: (present[value], total[value]) for value in total}
    est = ConditionalEstimator(kind, n, table, fallback)
    logger.info(f"Fitted {est!r} on {len(samples)} samples")
    return est


def agrasst_squared(estimator, x, spec, convention=FLIP, pairs=None, fast=False):
    """Get the squared approximate graph Stein statistic of x: the kernel
    Stein statistic with conditionals taken from a fitted estimator.
    """
    return kss_squared(estimated(estimator), x, spec, convention, pairs, fast)


# %% Estimator tables as CSV


def _format_value(kind, value):
    if kind == BIDEGREE:
        return f"{value[0]}:{value[1]}"
    return str(value)


def _parse_value(kind, text):
    if kind == BIDEGREE:
        a, _, b = text.partition(":")
        return (int(a), int(b))
    return int(text)


def _sort_key(value):
    return value if isinstance(value, tuple) else (value,)


def format_estimator(est):
    """Get the CSV text of an estimator table."""
    lines = [
        f"# kind={est.kind}",
        f"# n={est.n}",
        f"# fallback={est.fallback_prob!r}",
        "stat_value,present,total",
    ]
    for value in sorted(est.table, key=_sort_key):
        present, total = est.table[value]
        lines.append(f"{_format_value(est.kind, value)},{present},{total}")
    return "\n".join(lines) + "\n"


def save_estimator(est, file):
    """Write an estimator table to a filename or file object."""
    text = format_estimator(est)
    if isinstance(file, str):
        with open(file, "wb") as f:
            f.write(text.encode())
    else:
        file.write(text)


def load_estimator(file):
    """Read an estimator table from a filename or file object."""
    if isinstance(file, str):
        with open(file, "rb") as f:
            text = decode_text(f.read(), file)
        filename = file
    else:
        text = file.read()
        filename = getattr(file, "name", None)
    return parse_estimator(text, filename)


def parse_estimator(text, filename=None):
    meta = {}
    table = {}
    header_seen = False
    for lineno, line in enumerate(io.StringIO(text), 1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line.lstrip("#").strip().partition("=")
            meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if line.replace(" ", "") != "stat_value,present,total":
                raise ParseError("Expected header stat_value,present,total", lineno, filename)
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise ParseError(f"Expected 3 fields, got {len(parts)}", lineno, filename)
        try:
            value = _parse_value(meta.get("kind"), parts[0].strip())
            table[value] = (int(parts[1]), int(parts[2]))
        except ValueError as err:
            raise ParseError(f"Invalid row: {err}", lineno, filename)
    for key in ("kind", "n", "fallback"):
        if key not in meta:
            raise ParseError(f"Missing '# {key}=' line", None, filename)
    try:
        return ConditionalEstimator(
            meta["kind"], int(meta["n"]), table, float(meta["fallback"])
        )
    except (ValueError, InvalidArgument) as err:
        raise ParseError(str(err), None, filename)

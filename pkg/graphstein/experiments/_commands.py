"""
The experiment commands: power curves, sample assessment and runtime
benchmarks. Each command takes an ExperimentConfig and writes its results
as CSV (or a rendered report).
"""

import os
import csv
import time
import logging
import statistics
from importlib import resources

import jinja2
import markdown
import numpy as np

from .._errors import ConfigError, DivergentKernel, IngestError
from ..graphs import read_graph, sample_chain, ErgmModel, GeneratorSpec, edge_count
from ..stein import (
    TestConfig,
    run_test,
    rejection_rate,
    kss_squared,
    exact,
    fit_conditional_estimator,
    PairSelection,
    derive_seed,
    split_samples,
)
from ._expconfig import REGIMES


logger = logging.getLogger("graphstein")

POWER_COLUMNS = [
    "experiment",
    "kernel",
    "param",
    "statistic",
    "alt_value",
    "rate",
    "stderr",
    "trials",
    "elapsed_ms",
]

RUNTIME_COLUMNS = [
    "experiment",
    "kernel",
    "param",
    "regime",
    "n",
    "graphs",
    "min_ms",
    "avg_ms",
    "max_ms",
]

REPORT_FORMATS = "md", "html", "csv"


def _format_value(value):
    return f"{float(value):g}"


class ResultRow:
    """One cell of a power curve: the rejection rate of one kernel at one
    alternative value.
    """

    __slots__ = POWER_COLUMNS

    def __init__(self, **kwargs):
        for key in self.__slots__:
            setattr(self, key, kwargs[key])
        if not (0.0 <= float(self.rate) <= 1.0):
            raise ValueError(f"Rejection rate out of range: {self.rate}")

    @property
    def key(self):
        """The identity of the cell, used to resume interrupted runs."""
        return (
            str(self.experiment),
            str(self.kernel),
            str(self.param),
            str(self.statistic),
            _format_value(self.alt_value),
        )

    @property
    def rejections(self):
        return int(round(float(self.rate) * int(self.trials)))

    def as_dict(self):
        d = {key: getattr(self, key) for key in self.__slots__}
        d["alt_value"] = _format_value(self.alt_value)
        d["rate"] = repr(float(self.rate))
        d["stderr"] = repr(float(self.stderr))
        d["elapsed_ms"] = f"{float(self.elapsed_ms):.1f}"
        return d

    @classmethod
    def from_dict(cls, d):
        return cls(**{key: d[key] for key in cls.__slots__})

    def __repr__(self):
        return f"<ResultRow {' '.join(self.key)} rate={self.rate}>"


def _is_new_file(filename):
    return not os.path.isfile(filename) or os.path.getsize(filename) == 0


def read_result_rows(filename):
    """Read the rows of an existing power CSV (empty list if it does not
    exist or is empty).
    """
    if _is_new_file(filename):
        return []
    with open(filename, "r", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != POWER_COLUMNS:
            raise ConfigError(f"{filename} exists but is not a power-curve CSV")
        return [ResultRow.from_dict(d) for d in reader]


def _statistic_name(cfg):
    return cfg.statistic if cfg.is_agrasst else "exact"


def cmd_power_curve(cfg, out):
    """Compute one ResultRow per kernel and alternative value, appending
    them to the CSV file `out`. Cells that are already in `out` are
    skipped, so that an interrupted run can be resumed.
    """
    done = set(row.key for row in read_result_rows(out))
    new_file = _is_new_file(out)
    null = cfg.tested_null()
    statistic = _statistic_name(cfg)
    cells = [(kernel, value) for kernel in cfg.kernels for value in cfg.grid]
    logger.info(f"Power curve {cfg.name}: {len(cells)} cells, {len(done)} done")

    written = 0
    with open(out, "a", newline="") as f:
        writer = csv.DictWriter(f, POWER_COLUMNS)
        if new_file:
            writer.writeheader()
        for kernel, value in cells:
            key = (cfg.name, kernel.name, kernel.param, statistic, _format_value(value))
            if key in done:
                continue
            test_cfg = TestConfig(
                null,
                kernel,
                convention=cfg.convention,
                resample_size=cfg.B,
                n_simulate=cfg.l,
                level=cfg.a,
                seed=cfg.seed,
                statistic=cfg.statistic,
                n_fit=cfg.n_fit,
                fast=cfg.fast,
            )
            try:
                result = rejection_rate(
                    cfg.alternative(value), test_cfg, cfg.trials, cfg.seed, cfg.workers
                )
            except DivergentKernel as err:
                logger.warning(f"Skipping {kernel} at {cfg.sweep}={value:g}: {err}")
                continue
            row = ResultRow(
                experiment=cfg.name,
                kernel=kernel.name,
                param=kernel.param,
                statistic=statistic,
                alt_value=value,
                rate=result.rate,
                stderr=result.stderr,
                trials=result.trials,
                elapsed_ms=1000 * result.elapsed,
            )
            writer.writerow(row.as_dict())
            f.flush()
            written += 1
    logger.info(f"Power curve {cfg.name}: wrote {written} rows to {out}")
    return written


# %% Sample assessment


def assess_samples(cfg):
    """Test the observed graph against the sample directory, once per
    statistic and kernel. Returns the report context as a dict.
    """
    try:
        observed = read_graph(cfg.observed)
    except OSError as err:
        raise IngestError(f"Cannot read observed graph: {err}")
    null = GeneratorSpec.samples(cfg.samples)
    handle = null.params["handle"]
    if observed.n != null.n:
        raise IngestError(
            f"Observed graph has n={observed.n} but the samples have n={null.n}"
        )
    fit, simulate = split_samples(len(handle), cfg.l)
    fit_graphs = [handle.graphs[i] for i in fit]
    rows = []
    skipped = []
    groups = []
    for statistic in cfg.statistics:
        estimator = fit_conditional_estimator(statistic, fit_graphs)
        group = []
        for kernel in cfg.kernels:
            test_cfg = TestConfig(
                null,
                kernel,
                convention=cfg.convention,
                resample_size=cfg.B,
                n_simulate=len(simulate),
                level=cfg.a,
                seed=cfg.seed,
                statistic=statistic,
                estimator=estimator,
                fast=cfg.fast,
            )
            try:
                outcome = run_test(observed, test_cfg)
            except DivergentKernel as err:
                logger.warning(f"Skipping {kernel}: {err}")
                skipped.append(str(kernel))
                continue
            row = dict(
                kernel=kernel.name,
                param=kernel.param,
                statistic=statistic,
                tau=outcome.tau,
                threshold=outcome.threshold,
                p_value=outcome.p_value,
                reject=outcome.reject,
            )
            group.append(row)
            rows.append(row)
        groups.append((statistic, group))
    return dict(
        observed=cfg.observed,
        samples=cfg.samples,
        n=observed.n,
        edges=edge_count(observed),
        n_samples=len(handle),
        n_fit=len(fit),
        n_null=len(simulate),
        B="all" if cfg.B is None else cfg.B,
        a=cfg.a,
        rows=rows,
        groups=groups,
        skipped=sorted(set(skipped)),
        rejections=sum(row["reject"] for row in rows),
        total=len(rows),
    )


def _load_template():
    fname = resources.files("graphstein.experiments") / "_report_template.md"
    with open(fname, "rb") as f:
        return jinja2.Template(f.read().decode())


def render_report(context, format="md"):
    """Render an assessment as markdown, html or csv text."""
    if format not in REPORT_FORMATS:
        raise ConfigError(f"Report format must be one of {REPORT_FORMATS}")
    if format == "csv":
        columns = ["kernel", "param", "statistic", "tau", "threshold", "p_value", "reject"]
        lines = [",".join(columns)]
        for row in context["rows"]:
            lines.append(",".join(str(row[c]) for c in columns))
        return "\n".join(lines) + "\n"
    text = _load_template().render(**context)
    if format == "html":
        return markdown.markdown(text, extensions=["tables"])
    return text


def cmd_assess_samples(cfg, out=None, format="md"):
    """Assess the samples and write the report to `out` (or return it)."""
    report = render_report(assess_samples(cfg), format)
    if out:
        with open(out, "wb") as f:
            f.write(report.encode())
    return report


# %% Runtime benchmark


def time_statistic(score, x, kernel, B, seed, repeats):
    """Get the median wall time in ms of computing the statistic, after
    one discarded warm-up run.
    """
    pairs = PairSelection.resample(B, seed) if B else PairSelection.all()
    kss_squared(score, x, kernel, pairs=pairs)
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        kss_squared(score, x, kernel, pairs=pairs)
        times.append(1000 * (time.perf_counter() - t0))
    return statistics.median(times)


def cmd_runtime_bench(cfg, out):
    """Time the resampled statistic of each kernel on sparse and dense
    E2S graphs, writing min/avg/max of the per-graph medians as CSV.
    """
    rows = []
    for regime in cfg.regimes:
        beta = REGIMES[regime]
        for n in cfg.sizes:
            model = ErgmModel.e2s(beta[0], beta[1], n)
            graphs = sample_chain(model, cfg.graphs, derive_seed(cfg.seed, n))
            score = exact(model)
            for kernel in cfg.kernels:
                try:
                    medians = [
                        time_statistic(score, x, kernel, cfg.B, cfg.seed + i, cfg.repeats)
                        for i, x in enumerate(graphs)
                    ]
                except DivergentKernel as err:
                    logger.warning(f"Skipping {kernel} on {regime} n={n}: {err}")
                    continue
                rows.append(
                    dict(
                        experiment=cfg.name,
                        kernel=kernel.name,
                        param=kernel.param,
                        regime=regime,
                        n=n,
                        graphs=len(graphs),
                        min_ms=f"{min(medians):.3f}",
                        avg_ms=f"{np.mean(medians):.3f}",
                        max_ms=f"{max(medians):.3f}",
                    )
                )
                logger.info(f"{kernel} {regime} n={n}: avg {np.mean(medians):.2f} ms")
    with open(out, "w", newline="") as f:
        writer = csv.DictWriter(f, RUNTIME_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return rows

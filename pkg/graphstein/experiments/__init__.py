# flake8: noqa

from ._expconfig import (
    ExperimentConfig,
    load_experiment_config,
    parse_experiment_config,
    DEFAULT_KERNELS,
    EXPERIMENTS,
    POWER_CURVE,
    ASSESS_SAMPLES,
    RUNTIME_BENCH,
    REGIMES,
)
from ._commands import (
    ResultRow,
    read_result_rows,
    cmd_power_curve,
    assess_samples,
    render_report,
    cmd_assess_samples,
    time_statistic,
    cmd_runtime_bench,
    POWER_COLUMNS,
    RUNTIME_COLUMNS,
    REPORT_FORMATS,
)

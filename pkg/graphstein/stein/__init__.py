# flake8: noqa

from ._stein import (
    ScoreSource,
    exact,
    estimated,
    PairSelection,
    resample_pairs,
    stein_coefficient,
    stein_coefficients,
    resampled_operator,
    SteinKernelMatrix,
    stein_kernel_matrix,
    kss_squared,
    FLIP,
    LITERAL,
    CONVENTIONS,
)
from ._estimator import (
    ConditionalEstimator,
    fit_conditional_estimator,
    agrasst_squared,
    format_estimator,
    parse_estimator,
    save_estimator,
    load_estimator,
)
from ._fastgrw import fast_grw_stein_matrix
from ._mctest import (
    TestConfig,
    TestOutcome,
    RejectionRate,
    run_test,
    rejection_rate,
    empirical_threshold,
    p_value,
    derive_seed,
    split_samples,
)

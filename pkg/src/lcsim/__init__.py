"""Longest-common-subsequence statistics toolkit.

Fast exact LCS engines, seeded random-word generators, Monte-Carlo
mean/variance estimation, a similarity Z-test, and exact upper bounds on
the limiting LCS rate for any alphabet size and number of sequences.
"""

from .bounds import (
    KNOWN_LOWER_BOUNDS_K2,
    BoundResult,
    bounds_table,
    brute_g,
    count_containing,
    count_upper,
    g_upper_G,
    h_k_theta,
    solve_vk,
)
from .core import (
    Sequence,
    lcs_backtrack,
    lcs_dp,
    lcs_multi,
    lcs_wmmm,
)
from .errors import LcsimError, ResourceLimitError, ValidationError
from .generate import (
    DistributionSpec,
    IidPairSource,
    MixturePairSource,
    MixtureSpec,
    RngHandle,
    SharedInsertPairSource,
    default_segment_count,
    gen_alt_common,
    gen_alt_mixture,
    gen_iid,
    insert_segments,
)
from .montecarlo import (
    RegressionFit,
    SampleStats,
    estimate_stats,
    fit_power_law,
    histogram,
    variance_scan,
)
from .ztest import (
    REFERENCE_PARAMS_K4,
    TestParams,
    TestResult,
    calibrate,
    normal_quantile,
    power_estimate,
    run_test,
    simulate_statistics,
    z_statistic,
)

__version__ = "0.1.0"

__all__ = [
    "BoundResult",
    "DistributionSpec",
    "IidPairSource",
    "KNOWN_LOWER_BOUNDS_K2",
    "LcsimError",
    "MixturePairSource",
    "MixtureSpec",
    "REFERENCE_PARAMS_K4",
    "RegressionFit",
    "ResourceLimitError",
    "RngHandle",
    "SampleStats",
    "Sequence",
    "SharedInsertPairSource",
    "TestParams",
    "TestResult",
    "ValidationError",
    "bounds_table",
    "brute_g",
    "calibrate",
    "count_containing",
    "count_upper",
    "default_segment_count",
    "estimate_stats",
    "fit_power_law",
    "g_upper_G",
    "gen_alt_common",
    "gen_alt_mixture",
    "gen_iid",
    "h_k_theta",
    "histogram",
    "insert_segments",
    "lcs_backtrack",
    "lcs_dp",
    "lcs_multi",
    "lcs_wmmm",
    "normal_quantile",
    "power_estimate",
    "run_test",
    "simulate_statistics",
    "solve_vk",
    "variance_scan",
    "z_statistic",
]

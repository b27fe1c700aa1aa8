"""Similarity Z-test for equal-length random words.

Under the null (both words i.i.d. uniform) the LCS length is
approximately normal with mean ``gamma_star * n`` and variance ``c * n``,
so the standardized statistic

    S = (LC_obs - gamma_star * n) / sqrt(c * n)

is compared against the upper-tail normal quantile: unusually similar
words inflate the LCS, so the test rejects when ``S > z(1 - alpha)``.
The rates ``(gamma_star, c)`` come from :func:`calibrate` or from the
shipped reference values.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, replace

import numpy as np

from .core import Sequence, lcs_wmmm
from .errors import ValidationError
from .generate import DistributionSpec, IidPairSource, RngHandle
from .montecarlo import _replicate_lengths, summarize

__all__ = [
    "TestParams",
    "TestResult",
    "REFERENCE_PARAMS_K4",
    "normal_quantile",
    "z_statistic",
    "calibrate",
    "run_test",
    "simulate_statistics",
    "power_estimate",
]


@dataclass(frozen=True)
class TestParams:
    """Calibrated rates and significance level for the similarity test."""

    __test__ = False  # domain object, not a pytest class

    gamma_star: float
    c: float
    alpha: float = 0.05
    n_cal: int | None = None
    reps_cal: int | None = None
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 < self.gamma_star < 1.0:
            raise ValidationError(f"gamma_star must be in (0, 1), got {self.gamma_star}")
        if not self.c > 0.0:
            raise ValidationError(f"c must be positive, got {self.c}")
        if not 0.0 < self.alpha < 1.0:
            raise ValidationError(f"alpha must be in (0, 1), got {self.alpha}")

    def critical_value(self) -> float:
        return normal_quantile(1.0 - self.alpha)

    def to_dict(self) -> dict:
        return {
            "gamma_star": self.gamma_star,
            "c": self.c,
            "alpha": self.alpha,
            "n_cal": self.n_cal,
            "reps_cal": self.reps_cal,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TestParams":
        known = {f: data[f] for f in ("gamma_star", "c", "alpha", "n_cal", "reps_cal", "seed")
                 if f in data and data[f] is not None}
        return cls(**known)


# Reference rates for uniform 4-letter words, measured externally on 529
# pairs of length 10**6: mean rate ~0.654, variance rate ~0.0075.
REFERENCE_PARAMS_K4 = TestParams(gamma_star=0.654, c=0.0075, alpha=0.05,
                                 n_cal=1_000_000, reps_cal=529)


@dataclass(frozen=True)
class TestResult:
    """Outcome of one similarity test."""

    __test__ = False  # domain object, not a pytest class

    lc_obs: int
    statistic_s: float
    critical_value: float
    reject_null: bool

    def to_dict(self, params: TestParams | None = None) -> dict:
        out = {
            "lc_obs": self.lc_obs,
            "s": self.statistic_s,
            "critical_value": self.critical_value,
            "reject": self.reject_null,
        }
        if params is not None:
            out["params"] = params.to_dict()
        return out


def normal_quantile(prob: float) -> float:
    """Inverse standard normal CDF (absolute error well below 1e-9)."""
    if not 0.0 < prob < 1.0:
        raise ValidationError(f"quantile probability must be in (0, 1), got {prob}")
    return statistics.NormalDist().inv_cdf(prob)


def z_statistic(lc_obs: float, n: int, params: TestParams) -> float:
    """Standardized LCS length ``(lc_obs - gamma*n) / sqrt(c*n)``."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    if not params.c > 0:
        raise ValidationError(f"c must be positive, got {params.c}")
    return (lc_obs - params.gamma_star * n) / math.sqrt(params.c * n)


def calibrate(n_cal: int, reps_cal: int, k: int, rng: RngHandle,
              threads: int | None = None, alpha: float = 0.05) -> TestParams:
    """Estimate ``(gamma_star, c)`` from uniform i.i.d. pairs of length ``n_cal``.

    ``gamma_star`` is the mean LCS length over ``n_cal``; ``c`` the
    unbiased sample variance over ``n_cal``.
    """
    if reps_cal < 2:
        raise ValidationError(f"need at least 2 calibration replicates, got {reps_cal}")
    if k < 2:
        raise ValidationError(f"alphabet size must be >= 2, got {k}")
    source = IidPairSource(n_cal, DistributionSpec.uniform(k))
    lengths = _replicate_lengths(source, reps_cal, rng, threads)
    stats = summarize(n_cal, lengths)
    return TestParams(
        gamma_star=stats.mean / n_cal,
        c=stats.variance / n_cal,
        alpha=alpha,
        n_cal=n_cal,
        reps_cal=reps_cal,
        seed=rng.master_seed,
    )


def run_test(x: Sequence, y: Sequence, params: TestParams) -> TestResult:
    """Test two equal-length words for unusual similarity."""
    if len(x) != len(y):
        raise ValidationError(f"sequences must have equal length, got {len(x)} and {len(y)}")
    if len(x) < 1:
        raise ValidationError("cannot test empty sequences")
    lc = lcs_wmmm(x, y)
    s = z_statistic(lc, len(x), params)
    crit = params.critical_value()
    return TestResult(lc_obs=lc, statistic_s=s, critical_value=crit, reject_null=s > crit)


def simulate_statistics(gen, params: TestParams, reps: int, rng: RngHandle,
                        threads: int | None = None) -> np.ndarray:
    """The test statistic S for ``reps`` independent pairs from ``gen``.

    The statistic is always standardized at the source's nominal length
    ``gen.n`` (the mixture constructions may emit shorter words; the test
    still judges them against the declared length).
    """
    if reps < 1:
        raise ValidationError(f"need at least 1 replicate, got {reps}")
    lengths = _replicate_lengths(gen, reps, rng, threads)
    scale = math.sqrt(params.c * gen.n)
    return (lengths.astype(np.float64) - params.gamma_star * gen.n) / scale


def power_estimate(gen, params: TestParams, reps: int, rng: RngHandle,
                   threads: int | None = None) -> float:
    """Fraction of replicates the test does NOT reject: P(S <= z(1-alpha)).

    This is the quantity reported per alternative; small values mean the
    test almost always detects the planted similarity.
    """
    stats = simulate_statistics(gen, params, reps, rng, threads)
    return float(np.mean(stats <= params.critical_value()))


def with_alpha(params: TestParams, alpha: float) -> TestParams:
    """A copy of ``params`` at a different significance level."""
    return replace(params, alpha=alpha)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcsim import (
    DistributionSpec,
    IidPairSource,
    RngHandle,
    Sequence,
    TestParams,
    ValidationError,
    calibrate,
    gen_iid,
    normal_quantile,
    power_estimate,
    run_test,
    simulate_statistics,
    z_statistic,
)

from conftest import seq_str

PARAMS = TestParams(gamma_star=0.654, c=0.0075, alpha=0.05)


def erf_cdf(x: float) -> float:
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


def bisect_quantile(p: float) -> float:
    """Independent quantile oracle: bisection on the erf-based normal CDF."""
    lo, hi = -10.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if erf_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestNormalQuantile:
    def test_median(self):
        assert normal_quantile(0.5) == pytest.approx(0.0, abs=1e-12)

    def test_published_value(self):
        assert normal_quantile(0.95) == pytest.approx(1.6448536, abs=1e-7)

    @pytest.mark.parametrize("p", [0.001, 0.01, 0.25, 0.6, 0.9, 0.975, 0.999])
    def test_against_bisection_oracle(self, p):
        assert normal_quantile(p) == pytest.approx(bisect_quantile(p), abs=1e-9)

    def test_symmetry(self):
        for p in np.arange(0.01, 1.0, 0.01):
            assert normal_quantile(p) == pytest.approx(-normal_quantile(1 - p), abs=1e-12)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.7])
    def test_domain(self, p):
        with pytest.raises(ValidationError):
            normal_quantile(p)


class TestZStatistic:
    def test_centered(self):
        assert z_statistic(6540, 10_000, PARAMS) == 0.0

    def test_one_sigma(self):
        s = z_statistic(6540 + math.sqrt(75), 10_000, PARAMS)
        assert s == pytest.approx(1.0, abs=1e-12)

    def test_direct_evaluation(self):
        expected = (6626.60 - 0.654 * 10_000) / math.sqrt(0.0075 * 10_000)
        s = z_statistic(6626.60, 10_000, PARAMS)
        assert s == pytest.approx(expected, abs=1e-12)
        assert s == pytest.approx(10.0, abs=1e-3)

    def test_needs_positive_n(self):
        with pytest.raises(ValidationError):
            z_statistic(1, 0, PARAMS)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 10_000), st.integers(0, 10_000))
    def test_affine_increasing(self, lc1, lc2):
        s1 = z_statistic(lc1, 10_000, PARAMS)
        s2 = z_statistic(lc2, 10_000, PARAMS)
        assert (s1 < s2) == (lc1 < lc2)
        # affine: equal spacing in lc gives equal spacing in S
        d1 = z_statistic(lc1 + 7, 10_000, PARAMS) - s1
        d2 = z_statistic(lc2 + 7, 10_000, PARAMS) - s2
        assert d1 == pytest.approx(d2, abs=1e-9)


class TestParamsValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"gamma_star": 0.0, "c": 0.01},
            {"gamma_star": 1.0, "c": 0.01},
            {"gamma_star": 0.5, "c": 0.0},
            {"gamma_star": 0.5, "c": -1.0},
            {"gamma_star": 0.5, "c": 0.01, "alpha": 0.0},
            {"gamma_star": 0.5, "c": 0.01, "alpha": 1.0},
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            TestParams(**kwargs)

    def test_roundtrip(self):
        p = TestParams(0.6, 0.01, 0.05, n_cal=1000, reps_cal=50, seed=7)
        assert TestParams.from_dict(p.to_dict()) == p

    def test_from_dict_ignores_extras(self):
        p = TestParams.from_dict({"schema": "x", "gamma_star": 0.6, "c": 0.01})
        assert p.gamma_star == 0.6


class TestCalibrate:
    def test_small_scale(self):
        params = calibrate(600, 40, 2, RngHandle(13))
        # uniform binary rate sits near 0.81 asymptotically, lower at n=600
        assert 0.74 < params.gamma_star < 0.82
        assert params.c > 0
        assert params.n_cal == 600 and params.reps_cal == 40
        assert params.seed == 13

    def test_deterministic(self):
        a = calibrate(300, 20, 4, RngHandle(2), threads=1)
        b = calibrate(300, 20, 4, RngHandle(2), threads=3)
        assert a == b

    def test_validation(self):
        with pytest.raises(ValidationError):
            calibrate(100, 1, 2, RngHandle(0))
        with pytest.raises(ValidationError):
            calibrate(100, 10, 1, RngHandle(0))


class TestRunTest:
    def test_identical_rejects(self):
        x = gen_iid(2000, DistributionSpec.uniform(4), RngHandle(4))
        result = run_test(x, x, PARAMS)
        assert result.reject_null
        assert result.lc_obs == 2000
        assert result.statistic_s > result.critical_value

    def test_null_draw_does_not_reject(self):
        d = DistributionSpec.uniform(4)
        x = gen_iid(10_000, d, RngHandle(6, 0))
        y = gen_iid(10_000, d, RngHandle(6, 1))
        result = run_test(x, y, PARAMS)
        assert not result.reject_null

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            run_test(seq_str("0101"), seq_str("010"), PARAMS)

    def test_relabel_invariance(self):
        d = DistributionSpec.uniform(4)
        x = gen_iid(400, d, RngHandle(8, 0))
        y = gen_iid(400, d, RngHandle(8, 1))
        perm = np.array([2, 0, 3, 1])
        xp = Sequence(perm[x.symbols], 4)
        yp = Sequence(perm[y.symbols], 4)
        assert run_test(x, y, PARAMS) == run_test(xp, yp, PARAMS)

    def test_result_dict(self):
        x = seq_str("0101")
        r = run_test(x, x, TestParams(0.5, 0.1))
        d = r.to_dict(TestParams(0.5, 0.1))
        assert d["reject"] is True
        assert d["params"]["gamma_star"] == 0.5


class IdenticalPairSource:
    def __init__(self, n):
        self.n = n
        self.dist = DistributionSpec.uniform(4)

    def sample(self, rng):
        x = gen_iid(self.n, self.dist, rng)
        return x, x


class TestPower:
    def test_identical_pairs_always_reject(self):
        p = power_estimate(IdenticalPairSource(500), PARAMS, 20, RngHandle(3))
        assert p == 0.0

    def test_statistics_use_nominal_length(self):
        src = IdenticalPairSource(500)
        stats = simulate_statistics(src, PARAMS, 5, RngHandle(3))
        expected = (500 - 0.654 * 500) / math.sqrt(0.0075 * 500)
        assert np.allclose(stats, expected)

    def test_deterministic_across_threads(self):
        src = IidPairSource(400, DistributionSpec.uniform(4))
        a = simulate_statistics(src, PARAMS, 30, RngHandle(10), threads=1)
        b = simulate_statistics(src, PARAMS, 30, RngHandle(10), threads=4)
        assert np.array_equal(a, b)

    def test_self_calibrated_null_coverage(self):
        # with rates calibrated at the tested length, non-rejection of
        # null draws sits near 1 - alpha
        n = 2000
        params = calibrate(n, 80, 4, RngHandle(14), threads=2)
        src = IidPairSource(n, DistributionSpec.uniform(4))
        p = power_estimate(src, params, 300, RngHandle(15), threads=2)
        assert 0.90 <= p <= 0.995

    def test_reps_validated(self):
        with pytest.raises(ValidationError):
            power_estimate(IdenticalPairSource(10), PARAMS, 0, RngHandle(0))

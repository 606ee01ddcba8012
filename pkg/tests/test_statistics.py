import math

import numpy as np
import pytest

from maoutage import beamforming as bf
from maoutage import channel, oracle
from maoutage.errors import DegenerateDistributionError, NonPositiveVarianceError
from maoutage.scenarios import CDF_LAYOUT
from maoutage.statistics import (
    GammaFit,
    covariance_xy,
    gamma_cdf,
    gamma_fit,
    gamma_fit_first_order,
    moment_set,
    moments_x,
    moments_y,
    ratio_moments,
    z_mean_first_order,
    z_moments,
)

from conftest import single_user_cfg


class TestRatioMoments:
    def test_deterministic(self):
        assert ratio_moments(3.0, 0.0, 2.0, 0.0, 0.0) == (1.5, 0.0)

    def test_worked_example(self):
        mean, var = ratio_moments(2.0, 0.0, 1.0, 0.01, 0.0)
        assert mean == pytest.approx(2.02) and var == pytest.approx(0.04)

    def test_worked_example_monte_carlo(self):
        # X = 2 fixed, Y Gamma with mean 1 and variance 0.01
        y = np.random.default_rng(4).gamma(100.0, 0.01, 1_000_000)
        mean, _ = ratio_moments(2.0, 0.0, 1.0, 0.01, 0.0)
        assert np.mean(2.0 / y) == pytest.approx(mean, rel=0.01)

    def test_cancellation(self):
        ex, ey, vy = 3.0, 2.0, 0.5
        mean, _ = ratio_moments(ex, 2.0, ey, vy, vy * ex / ey)
        assert mean == pytest.approx(ex / ey, rel=1e-15)

    def test_negative_variance(self):
        with pytest.raises(NonPositiveVarianceError):
            ratio_moments(1.0, 0.0, 1.0, 0.0, 1.0)

    def test_zero_variance_with_noise(self):
        # cov chosen so the variance cancels exactly although vy > 0
        with pytest.raises(NonPositiveVarianceError):
            ratio_moments(1.0, 0.0, 1.0, 1.0, 0.5)


class TestUserMoments:
    def test_rayleigh(self):
        cfg = single_user_cfg(rician_k=0.0, beta=2.0)
        ex, vx = moments_x(7.0, cfg, 0)
        assert (ex, vx) == (2.0, 4.0)

    def test_large_gain_limit(self, downlink):
        ex, vx = moments_x(1e9, downlink, 0)
        assert vx / ex == pytest.approx(2e-9 / 16, rel=1e-6)

    def test_single_user_interference(self):
        cfg = single_user_cfg(noise=3e-9)
        assert moments_y(0.0, cfg, 0) == (3e-9, 0.0)
        assert covariance_xy(4.0, [0.0], cfg, 0) == 0.0

    def test_orthogonal_interference(self, downlink):
        f2 = 3 * 10.0**2
        _, vy = moments_y(f2, downlink, 0)
        assert vy == pytest.approx((1e-9 / 16) ** 2 * 3 * 100.0)
        assert covariance_xy(1.0, np.zeros(4), downlink, 0) == 0.0

    def test_vector_and_scalar_agree(self, downlink, layouts):
        ms = moment_set(layouts[0], downlink)
        A = bf.gram_inverse(channel.los_matrix(layouts[0], downlink))
        f3 = bf.f3_all(A)
        for m in range(4):
            assert covariance_xy(0, f3[m], downlink, m) == pytest.approx(ms.cov[m], rel=1e-12)


@pytest.fixture(scope="module")
def draws(cdf_cfg):
    return [oracle.sample_xy(CDF_LAYOUT, cdf_cfg, m, 1_000_000, 5) for m in range(4)]


class TestMonteCarloMoments:
    """Exact X and Y moments against 1e5..1e6 simulated draws at the fixed layout."""

    def test_signal_moments(self, cdf_cfg, draws):
        ms = moment_set(CDF_LAYOUT, cdf_cfg)
        for m, (x, _) in enumerate(draws):
            assert x[:100_000].mean() == pytest.approx(ms.ex[m], rel=0.02)
            assert x[:100_000].var() == pytest.approx(ms.vx[m], rel=0.02)

    def test_interference_moments(self, cdf_cfg, draws):
        ms = moment_set(CDF_LAYOUT, cdf_cfg)
        for m, (_, y) in enumerate(draws):
            assert y[:100_000].mean() == pytest.approx(ms.ey[m], rel=0.02)
            assert y[:100_000].var() == pytest.approx(ms.vy[m], rel=0.02)

    def test_covariance(self, cdf_cfg, draws):
        ms = moment_set(CDF_LAYOUT, cdf_cfg)
        for m, (x, y) in enumerate(draws):
            assert np.cov(x, y)[0, 1] == pytest.approx(ms.cov[m], rel=0.05)

    def test_sinr_variance(self, cdf_cfg, draws):
        ms = moment_set(CDF_LAYOUT, cdf_cfg)
        x, y = draws[0]
        z = cdf_cfg.tx_power[0] * x[:100_000] / y[:100_000]
        assert z.var() == pytest.approx(ms.vz[0], rel=0.10)

    def test_sinr_mean_expansion_bias(self, cdf_cfg, draws):
        # the second-order mean sits about 3.5% above the simulated mean here
        ms = moment_set(CDF_LAYOUT, cdf_cfg)
        x, y = draws[0]
        z = cdf_cfg.tx_power[0] * x / y
        assert 0.0 < ms.ez[0] / z.mean() - 1.0 < 0.05


class TestZMoments:
    def test_deterministic(self):
        ez, vz = z_moments(2.0, 0.0, 4.0, 0.0, 0.0, 10.0)
        assert (ez, vz) == (5.0, 0.0)

    def test_first_order_difference(self, downlink, layouts):
        ms = moment_set(layouts[1], downlink)
        p = downlink.tx_power
        diff = ms.ez - z_mean_first_order(ms.ex, ms.ey, p)
        expected = p * (ms.ex * ms.vy / ms.ey**3 - ms.cov / ms.ey**2)
        assert np.allclose(diff, expected, rtol=1e-9)


class TestGammaFit:
    def test_exponential(self):
        assert gamma_fit(1.0, 1.0) == GammaFit(1.0, 1.0)

    def test_arithmetic(self):
        fit = gamma_fit(4.0, 2.0)
        assert (fit.shape, fit.scale) == (8.0, 0.5)
        assert (fit.mean, fit.variance) == (4.0, 2.0)

    @pytest.mark.parametrize("ez,vz", [(0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), (math.nan, 1.0)])
    def test_degenerate(self, ez, vz):
        with pytest.raises(DegenerateDistributionError):
            gamma_fit(ez, vz)
        with pytest.raises(DegenerateDistributionError):
            gamma_fit_first_order(ez, vz)

    def test_population_refit(self):
        s = np.random.default_rng(8).gamma(3.0, 2.0, 1_000_000)
        fit = gamma_fit(s.mean(), s.var())
        assert fit.shape == pytest.approx(3.0, rel=0.03) and fit.scale == pytest.approx(2.0, rel=0.03)


class TestGammaCdf:
    def test_values(self):
        assert gamma_cdf(GammaFit(1, 1), 1.0) == pytest.approx(1 - math.exp(-1))
        assert gamma_cdf(GammaFit(2, 1), 2.0) == pytest.approx(1 - 3 * math.exp(-2))
        assert gamma_cdf(GammaFit(2, 1), 0.0) == 0.0
        assert gamma_cdf(GammaFit(2, 1), -1.0) == 0.0

    def test_monotone(self):
        gen = np.random.default_rng(3)
        grid = np.linspace(0, 50, 400)
        for _ in range(100):
            fit = GammaFit(gen.uniform(0.1, 20), gen.uniform(0.1, 3))
            assert np.all(np.diff(gamma_cdf(fit, grid)) >= 0)

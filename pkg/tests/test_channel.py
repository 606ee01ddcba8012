import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from maoutage import channel
from maoutage.config import Region, SystemConfig

from conftest import single_user_cfg


class TestSteering:
    def test_origin_gives_ones(self, downlink):
        assert np.allclose(channel.steering_matrix(np.zeros((2, 5)), downlink), 1.0)

    def test_broadside_user(self):
        cfg = single_user_cfg(angle=0.0)
        t = np.random.default_rng(0).uniform(-3, 3, (2, 4))
        assert np.allclose(channel.steering_row(t, cfg, 0), 1.0)

    def test_half_wavelength_phase(self):
        cfg = SystemConfig(1, 1, 1.0, 1.0, 1.0, 1.0, 0.0, np.pi / 2, 0.2, (Region(0, 1, 0, 1),))
        assert channel.steering_row(np.array([[0.5], [0.0]]), cfg, 0)[0] == pytest.approx(-1.0)

    @settings(max_examples=50, deadline=None)
    @given(st.lists(st.floats(-20, 20), min_size=10, max_size=10))
    def test_unit_modulus(self, coords):
        from maoutage.scenarios import downlink_config
        s = channel.steering_matrix(np.reshape(coords, (2, 5)), downlink_config())
        assert np.allclose(np.abs(s), 1.0)

    def test_los_matrix_is_conjugate_transpose(self, downlink, layouts):
        t = layouts[0]
        assert np.array_equal(channel.los_matrix(t, downlink), channel.steering_matrix(t, downlink).conj().T)

    def test_single_user_column(self):
        cfg = single_user_cfg()
        t = np.random.default_rng(1).uniform(0, 3, (2, 4))
        col = channel.los_matrix(t, cfg)
        assert col.shape == (4, 1)
        assert np.allclose(col[:, 0], np.conj(channel.steering_row(t, cfg, 0)))


class TestNlos:
    def test_unit_variance_zero_mean(self):
        z = channel.nlos_block(5, seed=11, user=0, start=0, count=40_000).ravel()
        n = z.size
        assert abs(z.mean()) < 3 * np.sqrt(1.0 / n) * 1.5
        assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, abs=0.02)
        assert np.mean(z.real**2) == pytest.approx(0.5, abs=0.01)
        assert abs(np.mean(z.real * z.imag)) < 0.01

    def test_chunking_invariance(self):
        whole = channel.nlos_block(5, 3, 2, 0, 1000)
        parts = np.vstack([channel.nlos_block(5, 3, 2, s, 250) for s in range(0, 1000, 250)])
        assert np.array_equal(whole, parts)

    def test_single_trial_regeneration(self):
        whole = channel.nlos_block(7, 3, 1, 10, 20)
        assert np.array_equal(whole[5], channel.nlos_block(7, 3, 1, 15, 1)[0])

    def test_streams_differ(self):
        a = channel.nlos_block(5, 3, 0, 0, 4)
        assert not np.allclose(a, channel.nlos_block(5, 3, 1, 0, 4))
        assert not np.allclose(a, channel.nlos_block(5, 4, 0, 0, 4))


class TestDrawChannel:
    def test_deterministic(self, downlink, layouts):
        a = channel.draw_channel(layouts[0], downlink, 9, 17)
        b = channel.draw_channel(layouts[0], downlink, 9, 17)
        assert np.array_equal(a.rows, b.rows)

    def test_los_limit(self, downlink, layouts):
        cfg = downlink.with_(rician_k=1e12)
        t = layouts[1]
        h = channel.draw_channel(t, cfg, 0, 0).rows
        expected = np.sqrt(cfg.large_scale_gain)[:, None] * channel.steering_matrix(t, cfg)
        assert np.max(np.abs(h - expected) / np.abs(expected)) < 1e-4

    def test_rician_structure(self, downlink, layouts):
        t = layouts[2]
        real = channel.draw_channel(t, downlink, 5, 3)
        assert np.allclose(real.rows, channel.rician_rows(t, downlink, real.nlos))

import numpy as np
import pytest

from maoutage import beamforming as bf
from maoutage import channel
from maoutage.errors import IllConditionedError

from conftest import single_user_cfg


def direct_functionals(t, cfg):
    """f1, f2, f3 straight from the explicit ZF beamformers."""
    H = channel.los_matrix(t, cfg)
    W = bf.zf_beamformers(H)
    G = H.conj().T @ W  # G[m, j] = hbar_m w_j
    f1 = np.abs(np.diag(G)) ** 2
    f2 = np.array([np.real(np.trace(np.linalg.matrix_power(bf.interference_matrix(W, cfg.tx_power, m), 2)))
                   for m in range(cfg.num_users)])
    f3 = np.abs(W.conj().T @ W) ** 2
    np.fill_diagonal(f3, 0.0)
    return f1, f2, f3, W, H


class TestGramInverse:
    def test_residual(self, downlink, layouts):
        H = channel.los_matrix(layouts[0], downlink)
        A = bf.gram_inverse(H)
        assert np.allclose(H.conj().T @ H @ A, np.eye(4), atol=1e-9)
        assert np.allclose(A, A.conj().T, atol=0)

    def test_orthogonal_columns(self):
        H = np.fft.fft(np.eye(4))[:, :3]
        assert np.allclose(bf.gram_inverse(H), np.eye(3) / 4)

    def test_single_user(self):
        cfg = single_user_cfg()
        A = bf.gram_inverse(channel.los_matrix(np.random.default_rng(0).random((2, 4)), cfg))
        assert A.shape == (1, 1) and A[0, 0].real == pytest.approx(0.25)
        assert bf.f1(A, 0) == pytest.approx(4.0)
        assert bf.f2_all(A, [10.0])[0] == 0.0

    def test_ill_conditioned(self):
        H = np.ones((5, 2), dtype=complex)
        with pytest.raises(IllConditionedError):
            bf.gram_inverse(H)
        with pytest.raises(IllConditionedError):
            bf.zf_beamformers(H)


class TestBeamformers:
    def test_zero_forcing(self, downlink, layouts):
        H = channel.los_matrix(layouts[3], downlink)
        W = bf.zf_beamformers(H)
        G = H.conj().T @ W
        off = G - np.diag(np.diag(G))
        assert np.max(np.abs(off)) < 1e-8
        assert np.allclose(np.linalg.norm(W, axis=0), 1.0)

    def test_matched_filter_single_user(self):
        cfg = single_user_cfg()
        H = channel.los_matrix(np.random.default_rng(2).random((2, 4)), cfg)
        assert np.allclose(bf.zf_beamformers(H)[:, 0], H[:, 0] / np.linalg.norm(H[:, 0]))


class TestFunctionals:
    def test_dual_formula_cdf_layout(self, cdf_cfg):
        from maoutage.scenarios import CDF_LAYOUT
        f1, _, _, _, H = direct_functionals(CDF_LAYOUT, cdf_cfg)
        A = bf.gram_inverse(H)
        assert bf.f1(A, 0) == pytest.approx(f1[0], rel=1e-9)

    def test_dual_formula_random(self, downlink, layouts):
        for t in layouts:
            f1, f2, f3, _, H = direct_functionals(t, downlink)
            A = bf.gram_inverse(H)
            assert np.allclose(bf.f1_all(A), f1, rtol=1e-9, atol=0)
            assert np.allclose(bf.f2_all(A, downlink.tx_power), f2, rtol=1e-9, atol=1e-9)
            assert np.allclose(bf.f3_all(A), f3, rtol=1e-9, atol=1e-12)

    def test_orthogonal_users(self):
        A = np.eye(3) / 5
        p = np.array([1.0, 2.0, 3.0])
        assert np.allclose(bf.f1_all(A), 5.0)
        assert np.allclose(bf.f2_all(A, p), [4 + 9, 1 + 9, 1 + 4])
        assert bf.f3(A, 0, 2) == 0.0

    def test_f3_symmetric_and_bounded(self, downlink, layouts):
        A = bf.gram_inverse(channel.los_matrix(layouts[4], downlink))
        f3 = bf.f3_all(A)
        assert np.allclose(f3, f3.T) and np.all((0 <= f3) & (f3 <= 1))
        with pytest.raises(ValueError):
            bf.f3(A, 1, 1)

    def test_translation_invariance(self, downlink, layouts):
        t = layouts[5]
        A = bf.gram_inverse(channel.los_matrix(t, downlink))
        B = bf.gram_inverse(channel.los_matrix(t + np.array([[3.7], [-1.2]]), downlink))
        assert np.allclose(bf.f1_all(A), bf.f1_all(B), rtol=1e-9)
        assert np.allclose(bf.f2_all(A, downlink.tx_power), bf.f2_all(B, downlink.tx_power), rtol=1e-9)
        assert np.allclose(bf.f3_all(A), bf.f3_all(B), atol=1e-9)

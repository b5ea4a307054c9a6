import math

import numpy as np
import pytest

from qcldpc.channel import ChannelConfig, beta, frame_rng, init_llr, transmit


def q_function(x):
    """Gaussian tail probability, the uncoded BPSK bit-error rate at sqrt(snr)."""
    return 0.5 * math.erfc(x / math.sqrt(2.0))


# -------------------------------------------------------------- transmit


def test_transmit_noiseless_limit_maps_bits_to_bpsk():
    cfg = ChannelConfig(snr=1e30, seed=1)
    word = np.array([0, 1, 0, 1, 1])
    samples = transmit(word, cfg)
    assert np.allclose(samples, [1, -1, 1, -1, -1], atol=1e-9)


def test_transmit_is_deterministic_for_seed():
    cfg = ChannelConfig(snr=0.5, seed=42)
    word = np.zeros(64, dtype=np.uint8)
    assert np.array_equal(transmit(word, cfg), transmit(word, cfg))
    other = transmit(word, ChannelConfig(snr=0.5, seed=43))
    assert not np.array_equal(transmit(word, cfg), other)


def test_transmit_noise_variance():
    # snr 0.161 means sigma^2 = 6.211..., checked empirically over 1e6 draws
    cfg = ChannelConfig(snr=0.161, seed=7)
    word = np.zeros(1_000_000, dtype=np.uint8)
    noise = transmit(word, cfg) - 1.0
    assert abs(noise.var() - cfg.sigma2) / cfg.sigma2 < 0.01


def test_frame_rng_substreams():
    a = frame_rng(5, 0).standard_normal(8)
    b = frame_rng(5, 1).standard_normal(8)
    assert not np.array_equal(a, b)
    assert np.array_equal(a, frame_rng(5, 0).standard_normal(8))


def test_channel_config_validation():
    with pytest.raises(ValueError):
        ChannelConfig(snr=0.0)
    with pytest.raises(ValueError):
        ChannelConfig(snr=-1.0)
    assert ChannelConfig(snr=4.0).sigma2 == 0.25


# -------------------------------------------------------------- init_llr


def test_init_llr_direct_substitution():
    cfg = ChannelConfig(snr=0.5)  # sigma^2 = 2
    assert init_llr(np.array([1.0]), cfg)[0] == 1.0


def test_init_llr_zero_sample_is_erasure():
    cfg = ChannelConfig(snr=0.5)
    assert init_llr(np.array([0.0]), cfg)[0] == 0.0


def test_init_llr_low_snr_point():
    cfg = ChannelConfig(snr=0.161)
    value = init_llr(np.array([-0.5]), cfg)[0]
    assert value == pytest.approx(-0.161, abs=1e-12)


def test_init_llr_sign_and_scale():
    cfg = ChannelConfig(snr=2.0, seed=3)
    samples = transmit(np.zeros(256, dtype=np.uint8), cfg)
    llr = init_llr(samples, cfg)
    assert np.array_equal(np.sign(llr), np.sign(samples))
    assert np.allclose(llr, samples * 2.0 / cfg.sigma2)


# ------------------------------------------------------------------ beta


def test_beta_matches_published_operating_points():
    assert beta(0.1, 0.161) == pytest.approx(0.9286, abs=1e-4)
    assert beta(0.05, 0.076) == pytest.approx(0.9463, abs=1e-4)
    assert beta(0.02, 0.03) == pytest.approx(0.9380, abs=1e-4)


def test_beta_monotonicity():
    snrs = np.linspace(0.01, 2.0, 25)
    rates = np.linspace(0.01, 0.99, 25)
    values_by_rate = [beta(r, 0.161) for r in rates]
    assert all(a < b for a, b in zip(values_by_rate, values_by_rate[1:]))
    values_by_snr = [beta(0.1, s) for s in snrs]
    assert all(a > b for a, b in zip(values_by_snr, values_by_snr[1:]))


def test_beta_validation():
    with pytest.raises(ValueError):
        beta(0.0, 0.1)
    with pytest.raises(ValueError):
        beta(1.0, 0.1)
    with pytest.raises(ValueError):
        beta(0.1, 0.0)


# ------------------------------------------------------------ sanity


def test_uncoded_hard_decision_error_rate():
    # channel sanity: empirical bit-error rate of sign detection matches
    # Q(sqrt(snr)) within 3 binomial sigmas
    for snr in (0.5, 1.0, 2.0):
        cfg = ChannelConfig(snr=snr, seed=int(snr * 100))
        n = 200_000
        samples = transmit(np.zeros(n, dtype=np.uint8), cfg)
        p_hat = float((samples < 0).mean())
        p = q_function(math.sqrt(snr))
        assert abs(p_hat - p) < 3.0 * math.sqrt(p * (1 - p) / n)

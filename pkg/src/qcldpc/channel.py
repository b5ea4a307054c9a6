"""Binary-input AWGN channel and reconciliation efficiency.

Conventions: BPSK maps bit b to 1 - 2b (unit signal power), snr is the
linear ratio 1/sigma^2, and the channel LLR of a received sample r is
2r/sigma^2. Randomness comes from numpy's PCG64 seeded through a
SeedSequence over (seed, *stream path), so per-frame substreams are
reproducible and independent of generation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ChannelConfig", "beta", "frame_rng", "init_llr", "transmit"]


@dataclass(frozen=True)
class ChannelConfig:
    """Linear SNR plus RNG seed; noise variance is exactly 1/snr."""

    snr: float
    seed: int = 0

    def __post_init__(self):
        if not self.snr > 0:
            raise ValueError("snr must be positive")

    @property
    def sigma2(self):
        return 1.0 / self.snr


def frame_rng(seed, *path):
    """Independent substream keyed by (seed, *path), e.g. a frame index."""
    return np.random.default_rng((seed,) + tuple(path))


def transmit(codeword, cfg, rng=None):
    """BPSK-modulate a codeword and add Gaussian noise of variance sigma^2.

    Deterministic for a given cfg.seed; pass an explicit generator to
    draw from a campaign substream instead.
    """
    codeword = np.asarray(codeword)
    if rng is None:
        rng = frame_rng(cfg.seed)
    symbols = 1.0 - 2.0 * codeword
    return symbols + math.sqrt(cfg.sigma2) * rng.standard_normal(codeword.shape)


def init_llr(received, cfg):
    """Channel LLRs 2r/sigma^2 for received samples r."""
    return 2.0 * np.asarray(received, dtype=np.float64) / cfg.sigma2


def beta(rate, snr):
    """Reconciliation efficiency: code rate over Gaussian capacity at snr."""
    if not 0 < rate < 1:
        raise ValueError("rate must be in (0, 1)")
    if not snr > 0:
        raise ValueError("snr must be positive")
    capacity = 0.5 * math.log2(1.0 + snr)
    return rate / capacity

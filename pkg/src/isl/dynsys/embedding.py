"""Delay-coordinate reconstruction from one observed component."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EmbeddingSpec:
    delay: int
    dimension: int = 3

    def __post_init__(self):
        if self.delay < 1:
            raise ValueError("delay must be a positive number of samples")
        if self.dimension < 2:
            raise ValueError("embedding dimension must be >= 2")

    @property
    def window(self) -> int:
        return self.delay * (self.dimension - 1)


def takens_embed(series, spec: EmbeddingSpec) -> np.ndarray:
    """Rows ``(s[t], s[t - delay], ..., s[t - (m-1) delay])`` for every admissible ``t``."""
    s = np.asarray(series, dtype=float).ravel()
    if spec.window >= s.size:
        raise ValueError(f"series of length {s.size} too short for window {spec.window}")
    t = np.arange(spec.window, s.size)
    lags = spec.delay * np.arange(spec.dimension)
    return s[t[:, None] - lags[None, :]]


def autocorrelation(series, max_lag: int) -> np.ndarray:
    s = np.asarray(series, dtype=float).ravel()
    s = s - s.mean()
    var = float(s @ s)
    if var == 0:
        return np.ones(max_lag + 1)
    n = 1 << int(2 * s.size - 1).bit_length()
    spec = np.fft.rfft(s, n)
    acov = np.fft.irfft(spec * np.conj(spec), n)[: max_lag + 1]
    return acov / var


def first_autocorrelation_minimum(series, max_lag: int | None = None) -> int:
    """Lag of the first local minimum of the autocorrelation function."""
    s = np.asarray(series, dtype=float).ravel()
    max_lag = max_lag or s.size // 4
    acf = autocorrelation(s, max_lag)
    for k in range(1, max_lag):
        if acf[k] < acf[k - 1] and acf[k] <= acf[k + 1]:
            return k
    raise ValueError(f"no autocorrelation minimum within {max_lag} lags")

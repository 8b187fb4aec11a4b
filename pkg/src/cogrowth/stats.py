"""Block averages, block error estimates and integrated autocorrelation times."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class RunReport:
    beta: float
    alpha: float
    samples: int
    mean_length: float
    block_means: list[float]
    err: float
    conj_accept_rate: float
    insert_accept_rate: float
    insert_guard_rate: float
    swap_accept_rate: float
    tau_int: float
    block_size: int = 0
    tau_ok: bool = True
    counters: dict = field(default_factory=dict)

    # CSV column order for results files
    COLUMNS = ("beta", "alpha", "samples", "mean_length", "err", "conj_accept_rate",
               "insert_accept_rate", "insert_guard_rate", "swap_accept_rate", "tau_int")

    def row(self) -> list:
        return [getattr(self, c) for c in self.COLUMNS]


def block_means(lengths, blocks: int) -> np.ndarray:
    """Means of ``blocks`` equal consecutive blocks; the remainder is dropped."""
    x = np.asarray(lengths, dtype=float)
    if blocks < 2:
        raise ValueError("need at least 2 blocks")
    size = len(x) // blocks
    if size == 0:
        raise ValueError(f"series of length {len(x)} is shorter than {blocks} blocks")
    return x[: size * blocks].reshape(blocks, size).mean(axis=1)


def error_estimate(means) -> tuple[float, float]:
    """Return (var, err) with var the population variance of the block means."""
    b = np.asarray(means, dtype=float)
    m = len(b)
    if m < 2:
        raise ValueError("need at least 2 block means")
    mean = math.fsum(b) / m
    var = max(math.fsum(b * b) / m - mean * mean, 0.0)
    return var, math.sqrt(var / (m - 1))


def autocorrelation_function(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    n = len(x)
    d = x - x.mean()
    size = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(d, size)
    acov = np.fft.irfft(f * np.conj(f), size)[:n]
    if acov[0] <= 0:
        return np.zeros(n)
    return acov / acov[0]


def autocorrelation_time(lengths, window_factor: float = 6.0, min_length: int = 1000) -> float:
    """Integrated autocorrelation time 1/2 + sum_t rho(t).

    The sum runs to the first window W with W >= window_factor * tau(W).
    A constant series gives 0.5.
    """
    x = np.asarray(lengths, dtype=float)
    if len(x) < min_length:
        raise ValueError(f"series of length {len(x)} too short (need {min_length})")
    if np.all(x == x[0]):
        return 0.5
    rho = autocorrelation_function(x)
    taus = 0.5 + np.cumsum(rho[1:])
    for w in range(1, len(taus) + 1):
        if w >= window_factor * taus[w - 1]:
            return float(taus[w - 1])
    return float(taus[-1])

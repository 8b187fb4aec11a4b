"""Replica exchange over a grid of beta values.

Each beta slot owns a compiled chain and its generator.  Chains advance
independently between swap rounds; a round then tries to exchange the words
of adjacent slots, alternating even pairs (0,1),(2,3),... and odd pairs
(1,2),(3,4),...  Swap decisions use a separate generator, so results do not
depend on how many worker threads run the chains.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ._kernel import CompiledChain, pack_table
from .chain import initial_word
from .presentation import Presentation, relator_closure
from .stats import RunReport, autocorrelation_time, error_estimate

# tau_int is considered resolved when a block spans this many autocorrelation times
TAU_BLOCK_FACTOR = 20


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TemperingConfig:
    betas: tuple[float, ...]
    alpha: float
    steps_per_chain: int
    p_c: float = 0.5
    swap_interval: int = 100
    seed: int = 0
    block_count: int = 100
    avoid_empty: bool = True
    burn_in: int = 0
    swaps: bool = True
    tau_window: int = 1 << 20
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        self.validate()

    def validate(self):
        b = self.betas
        if not b:
            raise ConfigError("empty beta grid")
        if any(not 0.0 < x < 1.0 for x in b):
            raise ConfigError(f"betas must lie in (0,1): {b}")
        if any(b[i] >= b[i + 1] for i in range(len(b) - 1)):
            raise ConfigError(f"betas must be strictly increasing: {b}")
        if not 0.0 < self.p_c < 1.0:
            raise ConfigError(f"p_c must lie in (0,1), got {self.p_c}")
        if not math.isfinite(self.alpha):
            raise ConfigError("alpha must be finite")
        if self.swap_interval < 1:
            raise ConfigError("swap_interval must be >= 1")
        if self.block_count < 2:
            raise ConfigError("block_count must be >= 2")
        if self.steps_per_chain < self.block_count:
            raise ConfigError("steps_per_chain must be at least block_count")
        if self.burn_in < 0 or self.workers < 1 or self.tau_window < 1:
            raise ConfigError("burn_in >= 0, workers >= 1 and tau_window >= 1 required")


def swap_accept_ratio(beta_i: float, beta_j: float, len_i: int, len_j: int) -> float:
    """min{1, (beta_i / beta_j)^(len_j - len_i)}; the polynomial factors cancel."""
    if len_i == len_j:
        return 1.0
    lr = (len_j - len_i) * (math.log(beta_i) - math.log(beta_j))
    return 1.0 if lr >= 0.0 else math.exp(lr)


class TemperingRun:
    """A grid of chains that can be advanced and inspected step by step."""

    def __init__(self, cfg: TemperingConfig, presentation: Presentation):
        self.cfg = cfg
        self.table = relator_closure(presentation)
        packed = pack_table(self.table)
        seqs = np.random.SeedSequence(cfg.seed).spawn(len(cfg.betas) + 1)
        self.swap_rng = np.random.default_rng(seqs[-1])
        block_size = cfg.steps_per_chain // cfg.block_count
        self.chains = []
        for beta, ss in zip(cfg.betas, seqs):
            rng = np.random.default_rng(ss)
            w0 = initial_word(self.table, cfg.avoid_empty, rng)
            self.chains.append(CompiledChain(
                w0, self.table, packed, rng, alpha=cfg.alpha, beta=beta, p_c=cfg.p_c,
                avoid_empty=cfg.avoid_empty, burn_in=cfg.burn_in, block_size=block_size,
                block_count=cfg.block_count, ring_size=min(cfg.tau_window, block_size * cfg.block_count),
            ))
        n = len(self.chains)
        self.swap_attempts = np.zeros(max(n - 1, 0), dtype=np.int64)
        self.swap_accepts = np.zeros(max(n - 1, 0), dtype=np.int64)
        self.rounds = 0
        self.steps_done = 0

    @property
    def total_steps(self) -> int:
        return self.cfg.burn_in + self.cfg.steps_per_chain

    def _advance_all(self, nsteps: int, pool) -> None:
        if pool is None:
            for c in self.chains:
                c.advance(nsteps)
        else:
            list(pool.map(lambda c: c.advance(nsteps), self.chains))
        self.steps_done += nsteps

    def swap_round(self) -> None:
        betas = self.cfg.betas
        for i in range(self.rounds % 2, len(self.chains) - 1, 2):
            a, b = self.chains[i], self.chains[i + 1]
            ratio = swap_accept_ratio(betas[i], betas[i + 1], a.length, b.length)
            self.swap_attempts[i] += 1
            if self.swap_rng.random() < ratio:
                self.swap_accepts[i] += 1
                a.swap_contents(b)
        self.rounds += 1

    def run(self, progress: Callable[[int, int], None] | None = None) -> list[RunReport]:
        cfg = self.cfg
        pool = ThreadPoolExecutor(cfg.workers) if cfg.workers > 1 else None
        try:
            if not cfg.swaps or len(self.chains) == 1:
                self._advance_all(self.total_steps - self.steps_done, pool)
            while self.steps_done < self.total_steps:
                seg = min(cfg.swap_interval, self.total_steps - self.steps_done)
                self._advance_all(seg, pool)
                if self.steps_done < self.total_steps:
                    self.swap_round()
                if progress is not None:
                    progress(self.steps_done, self.total_steps)
        finally:
            if pool is not None:
                pool.shutdown()
        return self.reports()

    def reports(self) -> list[RunReport]:
        out = []
        for i, c in enumerate(self.chains):
            out.append(_report(c, self.cfg.alpha, self._swap_rate(i)))
        return out

    def _swap_rate(self, i: int) -> float:
        idx = [j for j in (i - 1, i) if 0 <= j < len(self.swap_attempts)]
        att = sum(int(self.swap_attempts[j]) for j in idx)
        acc = sum(int(self.swap_accepts[j]) for j in idx)
        return acc / att if att else float("nan")


def _ratio(a: int, b: int) -> float:
    return a / b if b else float("nan")


def _report(c: CompiledChain, alpha: float, swap_rate: float) -> RunReport:
    means = c.block_sums / c.block_size
    _, err = error_estimate(means)
    series = c.recent_lengths()
    tau = autocorrelation_time(series) if len(series) >= 1000 else float("nan")
    k = c.counters
    return RunReport(
        beta=c.beta,
        alpha=alpha,
        samples=c.block_size * len(means),
        mean_length=float(math.fsum(means) / len(means)),
        block_means=[float(x) for x in means],
        err=err,
        conj_accept_rate=_ratio(int(k[1]), int(k[0])),
        insert_accept_rate=_ratio(int(k[3]), int(k[2])),
        insert_guard_rate=_ratio(int(k[4]), int(k[2])),
        swap_accept_rate=swap_rate,
        tau_int=tau,
        block_size=c.block_size,
        tau_ok=bool(math.isfinite(tau) and c.block_size >= TAU_BLOCK_FACTOR * tau),
        counters={name: int(v) for name, v in zip(
            ("conj_attempts", "conj_accepts", "insert_attempts", "insert_accepts",
             "insert_guard", "empty_rejects"), k)},
    )


def run_grid(cfg: TemperingConfig, presentation: Presentation,
             progress: Callable[[int, int], None] | None = None) -> list[RunReport]:
    return TemperingRun(cfg, presentation).run(progress)


def linear_grid(lo: float, hi: float, count: int) -> list[float]:
    if count < 1:
        raise ConfigError("beta count must be >= 1")
    if count == 1:
        return [lo]
    return [round(lo + (hi - lo) * i / (count - 1), 12) for i in range(count)]


def parse_betas(value: str | Sequence[float]) -> list[float]:
    if isinstance(value, str):
        return [float(x) for x in value.replace(",", " ").split()]
    return [float(x) for x in value]

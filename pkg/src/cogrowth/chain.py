"""The Metropolis chain on trivial words (reference implementation).

One step consumes uniforms from the chain's generator in a fixed order:
move kind, then the conjugator (or the relator and the insertion position),
then the acceptance draw.  The compiled kernel in ``_kernel`` follows the
same order, so both produce identical trajectories from the same seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .moves import MoveKind, apply_conjugation, apply_left_insertion, enumerate_moves, neighbours
from .presentation import RelatorTable
from .words import EMPTY, Word, all_letters


@dataclass(frozen=True)
class ChainParams:
    alpha: float
    beta: float
    p_c: float = 0.5
    avoid_empty: bool = True

    def __post_init__(self):
        if not 0.0 < self.p_c < 1.0:
            raise ValueError(f"p_c must lie in (0,1), got {self.p_c}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0,1), got {self.beta}")
        if not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be finite, got {self.alpha}")


@dataclass
class MoveCounters:
    conj_attempts: int = 0
    conj_accepts: int = 0
    insert_attempts: int = 0
    insert_accepts: int = 0
    insert_guard: int = 0
    empty_rejects: int = 0

    def as_array(self) -> np.ndarray:
        return np.array([self.conj_attempts, self.conj_accepts, self.insert_attempts,
                         self.insert_accepts, self.insert_guard, self.empty_rejects], dtype=np.int64)


@dataclass
class ChainState:
    current: Word
    rng: np.random.Generator
    step_count: int = 0
    counters: MoveCounters = field(default_factory=MoveCounters)


def _log_ratio(len_w: int, len_w2: int, exponent: float, beta: float) -> float:
    return exponent * math.log((len_w2 + 1) / (len_w + 1)) + (len_w2 - len_w) * math.log(beta)


def _min1(log_r: float) -> float:
    return 1.0 if log_r >= 0.0 else math.exp(log_r)


def accept_ratio_conjugation(len_w: int, len_w2: int, params: ChainParams) -> float:
    if len_w == len_w2:
        return 1.0
    return _min1(_log_ratio(len_w, len_w2, 1.0 + params.alpha, params.beta))


def accept_ratio_insertion(len_w: int, len_w2: int, params: ChainParams) -> float:
    if len_w == len_w2:
        return 1.0
    return _min1(_log_ratio(len_w, len_w2, params.alpha, params.beta))


def initial_word(table: RelatorTable, avoid_empty: bool, rng: np.random.Generator) -> Word:
    """Start from a uniformly chosen relator, or from the empty word."""
    if not avoid_empty:
        return EMPTY
    return table.members[int(rng.random() * len(table))]


def new_state(table: RelatorTable, params: ChainParams, seed=None) -> ChainState:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return ChainState(initial_word(table, params.avoid_empty, rng), rng)


def step(state: ChainState, params: ChainParams, table: RelatorTable) -> ChainState:
    rng = state.rng
    w = state.current
    n = len(w)
    c = state.counters
    if rng.random() < params.p_c:
        k2 = 2 * table.gen_count
        x = all_letters(table.gen_count)[int(rng.random() * k2)]
        w2 = apply_conjugation(w, x)
        ratio = accept_ratio_conjugation(n, len(w2), params)
        c.conj_attempts += 1
        u = rng.random()
        if params.avoid_empty and not w2:
            c.empty_rejects += 1
        elif u < ratio:
            c.conj_accepts += 1
            state.current = w2
    else:
        r = table.members[int(rng.random() * len(table))]
        m = int(rng.random() * (n + 1))
        w2 = apply_left_insertion(w, r, m)
        c.insert_attempts += 1
        u = rng.random()
        if w2 == w:  # only the guard returns w unchanged
            c.insert_guard += 1
        elif params.avoid_empty and not w2:
            c.empty_rejects += 1
        elif u < accept_ratio_insertion(n, len(w2), params):
            c.insert_accepts += 1
            state.current = w2
    state.step_count += 1
    return state


def run(state: ChainState, params: ChainParams, table: RelatorTable, steps: int) -> list[int]:
    """Advance ``steps`` moves, returning |w| recorded after each attempt."""
    lengths = []
    for _ in range(steps):
        step(state, params, table)
        lengths.append(len(state.current))
    return lengths


def _move_probability(kind: MoveKind, relator_index: int, u: Word, v: Word,
                      params: ChainParams, table: RelatorTable) -> float:
    if kind is MoveKind.CONJUGATION:
        return params.p_c / (2 * table.gen_count) * accept_ratio_conjugation(len(u), len(v), params)
    prob_r = float(table.probability[relator_index])
    return (1.0 - params.p_c) * prob_r / (len(u) + 1) * accept_ratio_insertion(len(u), len(v), params)


def transition_row(u: Word, params: ChainParams, table: RelatorTable) -> dict[Word, float]:
    """Pr(u -> v) for every v reachable in one step, including v = u."""
    row: dict[Word, float] = {}
    for v, moves in neighbours(u, table).items():
        if v == u or (params.avoid_empty and not v):
            continue
        row[v] = sum(_move_probability(d.kind, d.relator_index, u, v, params, table) for d in moves)
    row[u] = 1.0 - sum(row.values())
    return row


def transition_probability(u: Word, v: Word, params: ChainParams, table: RelatorTable) -> float:
    u, v = tuple(u), tuple(v)
    if u == v:
        return transition_row(u, params, table)[u]
    if params.avoid_empty and not v:
        return 0.0
    return sum(_move_probability(d.kind, d.relator_index, u, v, params, table)
               for d in enumerate_moves(u, table, v))


def log_weight(length: int, alpha: float, beta: float) -> float:
    """log of the unnormalised stationary weight (|w|+1)^(1+alpha) beta^|w|."""
    return (1.0 + alpha) * math.log(length + 1) + length * math.log(beta)

"""Compiled chain kernel.

Words live in int32 buffers using the signed-letter encoding of ``words``;
a proposal's length is computed before anything is copied, and the new word
is only built once the move is accepted.  Draw order matches
``chain.step`` exactly.
"""
from __future__ import annotations

import math

import numba
import numpy as np

# counters layout, shared with chain.MoveCounters.as_array
CONJ_ATTEMPTS, CONJ_ACCEPTS, INS_ATTEMPTS, INS_ACCEPTS, INS_GUARD, EMPTY_REJECTS = range(6)
# per-chain scalar state
S_LEN, S_T = 0, 1


@numba.njit(cache=True, nogil=True)
def _accept(n, n2, exponent, log_beta):
    if n == n2:
        return 1.0
    lr = exponent * math.log((n2 + 1) / (n + 1)) + (n2 - n) * log_beta
    if lr >= 0.0:
        return 1.0
    return math.exp(lr)


@numba.njit(cache=True, nogil=True)
def advance(buf, scratch, state, counters, rel_data, rel_start, rel_len, gen_count,
            p_c, alpha, log_beta, avoid_empty, rng, nsteps,
            burn_in, block_size, block_sums, ring):
    """Run ``nsteps`` attempts; returns the (possibly regrown) buffers."""
    nrel = rel_start.shape[0]
    k2 = 2 * gen_count
    rmax = 0
    for i in range(nrel):
        rmax = max(rmax, rel_len[i])
    nblocks = block_sums.shape[0]
    recorded_cap = block_size * nblocks
    wring = ring.shape[0]
    n = state[S_LEN]
    t = state[S_T]
    for _ in range(nsteps):
        if n + rmax + 2 > buf.shape[0]:
            cap = 2 * buf.shape[0] + rmax + 2
            nb = np.empty(cap, dtype=buf.dtype)
            nb[:n] = buf[:n]
            buf = nb
            scratch = np.empty(cap, dtype=buf.dtype)
        if rng.random() < p_c:
            i = int(rng.random() * k2)
            x = (i // 2 + 1) * (1 if i % 2 == 0 else -1)
            counters[CONJ_ATTEMPTS] += 1
            if n == 0:
                case = 0
                n2 = 0
            else:
                left = buf[0] == -x
                right = buf[n - 1] == x
                if left and right:
                    case = 1
                    n2 = n - 2
                elif left:
                    case = 2
                    n2 = n
                elif right:
                    case = 3
                    n2 = n
                else:
                    case = 4
                    n2 = n + 2
            ratio = _accept(n, n2, 1.0 + alpha, log_beta)
            u = rng.random()
            if avoid_empty and n2 == 0:
                counters[EMPTY_REJECTS] += 1
            elif u < ratio:
                counters[CONJ_ACCEPTS] += 1
                if case == 1:
                    scratch[: n - 2] = buf[1 : n - 1]
                elif case == 2:
                    scratch[: n - 1] = buf[1:n]
                    scratch[n - 1] = -x
                elif case == 3:
                    scratch[0] = x
                    scratch[1:n] = buf[: n - 1]
                elif case == 4:
                    scratch[0] = x
                    scratch[1 : n + 1] = buf[:n]
                    scratch[n + 1] = -x
                buf, scratch = scratch, buf
                n = n2
        else:
            ri = int(rng.random() * nrel)
            m = int(rng.random() * (n + 1))
            s0 = rel_start[ri]
            rl = rel_len[ri]
            cut = n - m
            k = 0
            while k < rl and k < cut and buf[cut - 1 - k] == -rel_data[s0 + k]:
                k += 1
            if k < rl:
                last = rel_data[s0 + rl - 1]
            elif cut - k > 0:
                last = buf[cut - k - 1]
            else:
                last = 0
            guard = m > 0 and last != 0 and last == -buf[cut]
            n2 = n - 2 * k + rl
            counters[INS_ATTEMPTS] += 1
            u = rng.random()
            if guard:
                counters[INS_GUARD] += 1
            elif avoid_empty and n2 == 0:
                counters[EMPTY_REJECTS] += 1
            elif u < _accept(n, n2, alpha, log_beta):
                counters[INS_ACCEPTS] += 1
                head = cut - k
                scratch[:head] = buf[:head]
                tail = rl - k
                scratch[head : head + tail] = rel_data[s0 + k : s0 + rl]
                scratch[head + tail : head + tail + m] = buf[cut:n]
                buf, scratch = scratch, buf
                n = n2
        rec = t - burn_in
        if rec >= 0 and rec < recorded_cap:
            block_sums[rec // block_size] += n
            ring[rec % wring] = n
        t += 1
    state[S_LEN] = n
    state[S_T] = t
    return buf, scratch


def pack_table(table):
    """Flatten a RelatorTable into (data, start, length) int arrays."""
    lens = np.array([len(r) for r in table.members], dtype=np.int64)
    start = np.zeros(len(lens), dtype=np.int64)
    start[1:] = np.cumsum(lens)[:-1]
    data = np.array([x for r in table.members for x in r], dtype=np.int32)
    return data, start, lens


class CompiledChain:
    """One chain driven by the compiled kernel, with its own generator."""

    def __init__(self, word, table, packed, rng, *, alpha, beta, p_c, avoid_empty,
                 burn_in=0, block_size=1, block_count=1, ring_size=1):
        cap = max(64, 2 * len(word) + 4 * table.max_length)
        self.buf = np.zeros(cap, dtype=np.int32)
        self.buf[: len(word)] = word
        self.scratch = np.zeros(cap, dtype=np.int32)
        self.state = np.array([len(word), 0], dtype=np.int64)
        self.counters = np.zeros(6, dtype=np.int64)
        self.packed = packed
        self.gen_count = table.gen_count
        self.rng = rng
        self.alpha = float(alpha)
        self.beta = float(beta)
        self.p_c = float(p_c)
        self.avoid_empty = bool(avoid_empty)
        self.burn_in = int(burn_in)
        self.block_size = int(block_size)
        self.block_sums = np.zeros(block_count, dtype=np.int64)
        self.ring = np.zeros(max(1, ring_size), dtype=np.int32)

    @property
    def length(self) -> int:
        return int(self.state[S_LEN])

    @property
    def steps_done(self) -> int:
        return int(self.state[S_T])

    @property
    def word(self) -> tuple:
        return tuple(int(x) for x in self.buf[: self.length])

    def advance(self, nsteps: int) -> None:
        data, start, lens = self.packed
        self.buf, self.scratch = advance(
            self.buf, self.scratch, self.state, self.counters, data, start, lens,
            self.gen_count, self.p_c, self.alpha, math.log(self.beta), self.avoid_empty,
            self.rng, int(nsteps), self.burn_in, self.block_size, self.block_sums, self.ring,
        )

    def swap_contents(self, other: "CompiledChain") -> None:
        """Exchange words with another chain; generators and records stay put."""
        self.buf, other.buf = other.buf, self.buf
        self.scratch, other.scratch = other.scratch, self.scratch
        a, b = self.state[S_LEN], other.state[S_LEN]
        self.state[S_LEN], other.state[S_LEN] = b, a

    def recent_lengths(self) -> np.ndarray:
        """The recorded |w| series still held in the ring, oldest first."""
        rec = min(max(self.steps_done - self.burn_in, 0), self.block_size * len(self.block_sums))
        w = len(self.ring)
        if rec <= w:
            return self.ring[:rec].copy()
        return np.roll(self.ring, -(rec % w))

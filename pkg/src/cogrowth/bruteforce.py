"""Ground truth by enumeration: word-problem oracles and trivial-word counts."""
from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .presentation import Presentation
from .words import EMPTY, Word, all_letters


class OracleMismatch(ValueError):
    pass


class EnumerationTooLarge(ValueError):
    pass


class WordProblemOracle:
    """Exact identity test built from a right-multiplication state machine."""

    gen_count: int

    def initial(self):
        raise NotImplementedError

    def push(self, state, x: int):
        raise NotImplementedError

    def is_trivial_state(self, state) -> bool:
        raise NotImplementedError

    def is_identity(self, w: Sequence[int]) -> bool:
        s = self.initial()
        for x in w:
            if abs(x) > self.gen_count:
                raise OracleMismatch(f"letter {x} outside {self.gen_count} generators")
            s = self.push(s, x)
        return self.is_trivial_state(s)

    def check(self, p: Presentation) -> None:
        """Raise unless this oracle can serve as the word problem for ``p``."""
        if p.gen_count != self.gen_count:
            raise OracleMismatch(f"oracle has {self.gen_count} generators, presentation {p.gen_count}")
        for r in p.relators:
            if not self.is_identity(r):
                raise OracleMismatch(f"relator {p.format(r)} is not trivial under {self!r}")


@dataclass(frozen=True)
class FreeGroup(WordProblemOracle):
    gen_count: int

    def initial(self):
        return EMPTY

    def push(self, state, x):
        if state and state[-1] == -x:
            return state[:-1]
        return state + (x,)

    def is_trivial_state(self, state):
        return not state


@dataclass(frozen=True)
class FreeAbelian(WordProblemOracle):
    gen_count: int

    def initial(self):
        return (0,) * self.gen_count

    def push(self, state, x):
        g = abs(x) - 1
        return state[:g] + (state[g] + (1 if x > 0 else -1),) + state[g + 1 :]

    def is_trivial_state(self, state):
        return not any(state)


@dataclass(frozen=True)
class FreeProductOfCyclics(WordProblemOracle):
    """Free product of cyclic groups; order 0 means an infinite cyclic factor.

    State is the syllable normal form: (generator, exponent) pairs with
    exponents reduced modulo the order and no two neighbours on the same
    generator.
    """

    orders: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))

    @property
    def gen_count(self):
        return len(self.orders)

    def initial(self):
        return ()

    def push(self, state, x):
        g = abs(x) - 1
        e = 1 if x > 0 else -1
        order = self.orders[g]
        if state and state[-1][0] == g:
            e += state[-1][1]
            state = state[:-1]
        if order:
            e %= order
        return state + ((g, e),) if e else state

    def is_trivial_state(self, state):
        return not state


class AffineBS1N(WordProblemOracle):
    """BS(1,N) acting faithfully on Q by affine maps x -> p x + q.

    A word acts as the composite of its letters' maps with the rightmost
    letter applied first.  ``scale`` is the multiplier of the scaling
    generator: N for <a,b | a b a^-1 b^-N> (a scales, b translates) and 1/N
    for the bundled <a,b | a b a^-N b^-1> (a translates, b scales).
    """

    def __init__(self, n: int, scale_gen: int = 0, shift_gen: int = 1, scale: Fraction | int | None = None,
                 max_bits: int = 4096):
        self.n = n
        self.scale_gen = scale_gen
        self.shift_gen = shift_gen
        self.scale = Fraction(n if scale is None else scale)
        self.max_bits = max_bits
        self.gen_count = 2
        self.maps = {
            scale_gen + 1: (self.scale, Fraction(0)),
            -(scale_gen + 1): (1 / self.scale, Fraction(0)),
            shift_gen + 1: (Fraction(1), Fraction(1)),
            -(shift_gen + 1): (Fraction(1), Fraction(-1)),
        }

    @classmethod
    def for_bundled(cls, n: int) -> "AffineBS1N":
        """Oracle matching ``baumslag_solitar(1, n)`` / ``bs1N.pres``."""
        return cls(n, scale_gen=1, shift_gen=0, scale=Fraction(1, n))

    def __repr__(self):
        return f"AffineBS1N({self.n}, scale_gen={self.scale_gen}, scale={self.scale})"

    def initial(self):
        return (Fraction(1), Fraction(0))

    def push(self, state, x):
        p1, q1 = state
        p2, q2 = self.maps[x]
        p, q = p1 * p2, p1 * q2 + q1
        for v in (p, q):
            if max(v.numerator.bit_length(), v.denominator.bit_length()) > self.max_bits:
                raise EnumerationTooLarge("affine coefficients exceed the bit-length cap")
        return (p, q)

    def is_trivial_state(self, state):
        return state == (1, 0)


def _check_size(gen_count: int, length: int, max_words: int):
    k2 = 2 * gen_count
    total = 1 + sum(k2 * (k2 - 1) ** (n - 1) for n in range(1, length + 1))
    if total > max_words:
        raise EnumerationTooLarge(f"{total} reduced words up to length {length} exceeds cap {max_words}")


def count_trivial_words(p: Presentation, oracle: WordProblemOracle, length: int,
                        max_words: int = 10**8) -> list[int]:
    """c(0..length): freely reduced words representing the identity.

    Walks all freely reduced words level by level, merging words that end in
    the same letter and have the same oracle state.
    """
    oracle.check(p)
    _check_size(p.gen_count, length, max_words)
    letters = all_letters(p.gen_count)
    frontier: dict = {(oracle.initial(), 0): 1}
    counts = [1]
    for _ in range(length):
        nxt: dict = defaultdict(int)
        for (state, last), mult in frontier.items():
            for x in letters:
                if x == -last:
                    continue
                nxt[(oracle.push(state, x), x)] += mult
        frontier = nxt
        counts.append(sum(m for (s, _), m in frontier.items() if oracle.is_trivial_state(s)))
    return counts


def truncated_state_space(p: Presentation, oracle: WordProblemOracle, length: int,
                          include_empty: bool = True, max_words: int = 10**7) -> list[Word]:
    """All freely reduced trivial words of length <= ``length``, by depth-first search."""
    oracle.check(p)
    _check_size(p.gen_count, length, max_words)
    letters = all_letters(p.gen_count)
    out: list[Word] = []

    def dfs(w, state):
        if oracle.is_trivial_state(state) and (w or include_empty):
            out.append(w)
        if len(w) == length:
            return
        for x in letters:
            if w and x == -w[-1]:
                continue
            dfs(w + (x,), oracle.push(state, x))

    dfs(EMPTY, oracle.initial())
    return sorted(out, key=lambda w: (len(w), w))


def return_counts(oracle: WordProblemOracle, length: int) -> list[int]:
    """d(0..length): all words (reduced or not) equal to the identity."""
    letters = all_letters(oracle.gen_count)
    frontier: dict = {oracle.initial(): 1}
    counts = [1]
    for _ in range(length):
        nxt: dict = defaultdict(int)
        for state, mult in frontier.items():
            for x in letters:
                nxt[oracle.push(state, x)] += mult
        frontier = nxt
        counts.append(sum(m for s, m in frontier.items() if oracle.is_trivial_state(s)))
    return counts


def oracle_for(name: str) -> WordProblemOracle | None:
    """Oracle for a bundled presentation name, if one exists."""
    table = {
        "z2": FreeAbelian(2),
        "k1": FreeProductOfCyclics((2, 3)),
        "k2": FreeProductOfCyclics((3, 3)),
        "k3": FreeProductOfCyclics((2, 2, 2)),
        "bs12": AffineBS1N.for_bundled(2),
        "bs13": AffineBS1N.for_bundled(3),
    }
    return table.get(name)


def write_counts_csv(counts: Sequence[int], path: str | Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "c(n)"])
        for n, c in enumerate(counts):
            w.writerow([n, c])

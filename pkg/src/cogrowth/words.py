"""Freely reduced words in a free group.

A letter is a nonzero int: ``g + 1`` for generator ``g`` and ``-(g + 1)``
for its inverse, so inversion is negation.  A word is a tuple of letters.
"""
from __future__ import annotations

from typing import Iterable, Sequence

Letter = int
Word = tuple  # tuple[Letter, ...]

EMPTY: Word = ()


def letter(generator_index: int, sign: int = 1) -> Letter:
    if generator_index < 0:
        raise ValueError(f"negative generator index {generator_index}")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    return sign * (generator_index + 1)


def generator_of(x: Letter) -> int:
    return abs(x) - 1


def sign_of(x: Letter) -> int:
    return 1 if x > 0 else -1


def all_letters(gen_count: int) -> list[Letter]:
    """The 2k letters in the fixed order a, a^-1, b, b^-1, ..."""
    out = []
    for g in range(gen_count):
        out += [g + 1, -(g + 1)]
    return out


def free_reduce(seq: Iterable[Letter]) -> Word:
    stack: list[int] = []
    for x in seq:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return tuple(stack)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(w[i] != -w[i + 1] for i in range(len(w) - 1))


def concat_reduce(u: Word, v: Word) -> Word:
    # both inputs are reduced, so cancellation only happens at the seam
    i = 0
    n = min(len(u), len(v))
    while i < n and u[len(u) - 1 - i] == -v[i]:
        i += 1
    return u[: len(u) - i] + v[i:]


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_permutations(w: Word) -> set[Word]:
    if not w:
        raise ValueError("cyclic_permutations needs a nonempty word")
    return {free_reduce(w[i:] + w[:i]) for i in range(len(w))}


def power(w: Word, n: int) -> Word:
    if n < 0:
        w, n = inverse(w), -n
    out: Word = EMPTY
    for _ in range(n):
        out = concat_reduce(out, w)
    return out


def commutator(u: Word, v: Word) -> Word:
    """[u, v] = u^-1 v^-1 u v."""
    return free_reduce(inverse(u) + inverse(v) + u + v)


def conjugate(u: Word, v: Word) -> Word:
    """u^v = v^-1 u v."""
    return free_reduce(inverse(v) + u + v)


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    """Lowercase for generators, uppercase for inverses; ``1`` is the empty word."""
    if not w:
        return "1"
    if names is None:
        names = [chr(ord("a") + i) for i in range(max(abs(x) for x in w))]
    return "".join(names[x - 1] if x > 0 else names[-x - 1].upper() for x in w)

"""Elementary moves on trivial words: conjugation and guarded left-insertion."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .presentation import RelatorTable
from .words import Word, all_letters, free_reduce, inverse


class MoveKind(Enum):
    CONJUGATION = "conj"
    LEFT_INSERTION = "insert"


@dataclass(frozen=True)
class MoveDescriptor:
    kind: MoveKind
    conjugator: int = 0  # letter, conjugation only
    relator_index: int = -1  # insertion only
    position: int = 0  # |v|, counted from the right end of the word

    @classmethod
    def conj(cls, x: int) -> "MoveDescriptor":
        return cls(MoveKind.CONJUGATION, conjugator=x)

    @classmethod
    def insert(cls, relator_index: int, m: int) -> "MoveDescriptor":
        return cls(MoveKind.LEFT_INSERTION, relator_index=relator_index, position=m)


def apply_conjugation(w: Word, x: int) -> Word:
    return free_reduce((x,) + tuple(w) + (-x,))


def apply_left_insertion(w: Word, r: Word, m: int) -> Word:
    """Insert ``r`` with ``m`` letters of ``w`` to its right.

    Returns ``w`` itself when reducing the result would cancel any of those
    ``m`` letters.
    """
    n = len(w)
    if not 0 <= m <= n:
        raise ValueError(f"insertion position {m} outside 0..{n}")
    u, v = w[: n - m], w[n - m :]
    u2 = free_reduce(u + r)
    if u2 and v and u2[-1] == -v[0]:
        return w
    return u2 + v


def insertion_outcome(w: Word, r: Word, m: int) -> tuple[int, bool]:
    """Return (letters of ``w`` cancelled against ``r``, guard_triggered)."""
    n = len(w)
    cut = n - m
    k = 0
    while k < len(r) and k < cut and w[cut - 1 - k] == -r[k]:
        k += 1
    if k < len(r):
        last = r[-1]
    elif cut - k > 0:
        last = w[cut - k - 1]
    else:
        last = 0
    guard = bool(m) and last != 0 and last == -w[cut]
    return k, guard


def apply_move(w: Word, d: MoveDescriptor, table: RelatorTable) -> Word:
    if d.kind is MoveKind.CONJUGATION:
        return apply_conjugation(w, d.conjugator)
    return apply_left_insertion(w, table.members[d.relator_index], d.position)


def enumerate_moves_exhaustive(w: Word, table: RelatorTable, z: Word) -> list[MoveDescriptor]:
    """Every descriptor sending ``w`` to ``z``, by trying all of them."""
    out = [MoveDescriptor.conj(x) for x in all_letters(table.gen_count)
           if apply_conjugation(w, x) == z]
    for i, r in enumerate(table.members):
        for m in range(len(w) + 1):
            if apply_left_insertion(w, r, m) == z:
                out.append(MoveDescriptor.insert(i, m))
    return out


def enumerate_moves(w: Word, table: RelatorTable, z: Word) -> list[MoveDescriptor]:
    """Every descriptor sending ``w`` to ``z``.

    For ``z != w`` insertions are found by reading the candidate relator off
    the two words instead of trying every (relator, position) pair; each
    candidate is confirmed by applying it.
    """
    w, z = tuple(w), tuple(z)
    if w == z:
        return enumerate_moves_exhaustive(w, table, z)
    out = [MoveDescriptor.conj(x) for x in all_letters(table.gen_count)
           if apply_conjugation(w, x) == z]
    n, nz = len(w), len(z)
    prefix = 0
    while prefix < min(n, nz) and w[prefix] == z[prefix]:
        prefix += 1
    suffix = 0
    while suffix < min(n, nz) and w[n - 1 - suffix] == z[nz - 1 - suffix]:
        suffix += 1
    lengths = {len(r) for r in table.members}
    rmax = table.max_length
    found = []
    for m in range(min(n, suffix) + 1):
        cut = n - m
        # k letters of w left of the cut cancel against the relator head
        for k in range(max(0, cut - prefix), min(cut, rmax) + 1):
            rlen = nz - n + 2 * k
            if rlen not in lengths:
                continue
            start = cut - k
            if start > nz - m:
                continue
            r = inverse(w[start:cut]) + z[start : nz - m]
            i = table.index(r)
            if i is not None and apply_left_insertion(w, r, m) == z:
                found.append(MoveDescriptor.insert(i, m))
    out.extend(sorted(set(found), key=lambda d: (d.relator_index, d.position)))
    return out


def neighbours(w: Word, table: RelatorTable) -> dict[Word, list[MoveDescriptor]]:
    """All single-move outcomes of ``w`` keyed by the resulting word."""
    out: dict[Word, list[MoveDescriptor]] = {}
    for x in all_letters(table.gen_count):
        out.setdefault(apply_conjugation(w, x), []).append(MoveDescriptor.conj(x))
    for i, r in enumerate(table.members):
        for m in range(len(w) + 1):
            out.setdefault(apply_left_insertion(w, r, m), []).append(MoveDescriptor.insert(i, m))
    return out

import random

import pytest
from hypothesis import given, settings, strategies as st

from cogrowth.moves import (
    MoveDescriptor,
    MoveKind,
    apply_conjugation,
    apply_left_insertion,
    apply_move,
    enumerate_moves,
    enumerate_moves_exhaustive,
    insertion_outcome,
    neighbours,
)
from cogrowth.presentation import bundled, parse_presentation, relator_closure
from cogrowth.words import EMPTY, all_letters, free_reduce, inverse, power

a, A, b, B, c = 1, -1, 2, -2, 3

Z2 = relator_closure(bundled("z2"))


def test_conjugation_examples():
    assert apply_conjugation(EMPTY, a) == EMPTY
    assert apply_conjugation((b, a, B, A), a) == (a, b, a, B, A, A)
    w1 = (b, a, B)
    assert apply_conjugation((A,) + w1 + (a,), a) == w1


def test_insertion_guard_example():
    # the printed example has a^-4 in w, which is not trivial in Z^2; its own
    # worked reduction uses the suffix a b a^-3 b^-4, so that is the word here
    w = power((a,), 3) + power((b,), 4) + (A, B, a, b) + power((A,), 3) + power((B,), 4)
    assert sum(x for x in w if abs(x) == 1) == 0
    r = (b, a, B, A)
    assert apply_left_insertion(w, r, 9) is w
    assert insertion_outcome(w, r, 9)[1]
    # unrestricted insertion would give z, and inserting R^-1 into z never gives w
    z = free_reduce(w[:9] + r + w[9:])
    assert z == power((a,), 3) + power((b,), 4) + power((A,), 3) + power((B,), 4)
    r_inv = Z2.index(inverse(r))
    assert all(d.relator_index != r_inv for d in enumerate_moves(z, Z2, w))


def test_printed_guard_word_is_not_trivial():
    w = power((a,), 3) + power((b,), 4) + (A, B, a, b) + power((A,), 4) + power((B,), 4)
    assert sum(1 if x == a else -1 if x == A else 0 for x in w) == -1


def test_insert_into_empty():
    for r in Z2.members:
        assert apply_left_insertion(EMPTY, r, 0) == r


def test_four_insertions_into_abc_cubed():
    w = power((a, b, c), 3)
    for m in (0, 3, 6, 9):
        assert apply_left_insertion(w, (a, b, c), m) == power((a, b, c), 4)


def test_insertion_position_out_of_range():
    with pytest.raises(ValueError):
        apply_left_insertion((a, b), (a, b, A, B), 3)


def test_two_conjugations_between_rotations():
    for n in (1, 2, 3):
        w, z = power((a, b), n), power((b, a), n)
        found = enumerate_moves(w, Z2, z)
        assert sorted(d.conjugator for d in found if d.kind is MoveKind.CONJUGATION) == sorted([A, b])


def test_empty_to_empty_is_trivial_conjugations_only():
    found = enumerate_moves(EMPTY, Z2, EMPTY)
    assert found == [MoveDescriptor.conj(x) for x in all_letters(2)]
    assert found == enumerate_moves_exhaustive(EMPTY, Z2, EMPTY)


def test_single_insertion_reverses_with_inverse_relator():
    w = (a, b, A, B, a, b, A, B)
    checked = 0
    for i, r in enumerate(Z2.members):
        for m in range(len(w) + 1):
            z = apply_left_insertion(w, r, m)
            if z == w:
                continue
            fwd = [d for d in enumerate_moves(w, Z2, z) if d.kind is MoveKind.LEFT_INSERTION]
            back = [d for d in enumerate_moves(z, Z2, w) if d.kind is MoveKind.LEFT_INSERTION]
            assert len(fwd) == len(back)
            if len(fwd) == 1:
                assert back == [MoveDescriptor.insert(Z2.inverse_index(i), m)]
                checked += 1
    assert checked > 0


def _pool(name, size, seed):
    """Trivial words built from random products of conjugated relators."""
    t = relator_closure(bundled(name))
    rng = random.Random(seed)
    out = [EMPTY]
    for _ in range(size):
        w = EMPTY
        for _ in range(rng.randint(1, 3)):
            u = tuple(rng.choice(all_letters(t.gen_count)) for _ in range(rng.randint(0, 3)))
            w = free_reduce(w + inverse(u) + rng.choice(t.members) + u)
        out.append(w)
    return t, out


@pytest.mark.parametrize("name", ["z2", "k1", "bs12", "thompson_f1"])
def test_pruned_enumeration_matches_exhaustive(name):
    t, pool = _pool(name, 40, 7)
    rng = random.Random(11)
    for w in pool:
        nb = neighbours(w, t)
        for z in rng.sample(sorted(nb), min(6, len(nb))):
            assert enumerate_moves(w, t, z) == enumerate_moves_exhaustive(w, t, z)
            assert sorted(nb[z], key=repr) == sorted(enumerate_moves(w, t, z), key=repr)


@pytest.mark.parametrize("name", ["z2", "k1", "bs12", "thompson_f1"])
def test_move_counts_reversible(name):
    t, pool = _pool(name, 60, 5)
    for w in pool:
        for z, moves in neighbours(w, t).items():
            if z == w:
                continue
            back = enumerate_moves(z, t, w)
            for kind in MoveKind:
                assert (sum(d.kind is kind for d in moves) == sum(d.kind is kind for d in back))


def test_order_two_never_reaches_inverse_square():
    t = relator_closure(parse_presentation("gens: a\nrel: aa"))
    w = (a, a)
    outcomes = set(neighbours(w, t))
    assert (A, A) not in outcomes


letters2 = st.sampled_from([1, -1, 2, -2])


@settings(max_examples=200, deadline=None)
@given(st.lists(letters2, max_size=12), st.integers(0, 7), st.integers(0, 20))
def test_moves_preserve_reducedness_and_triviality(raw, ri, mi):
    # prefix any word with a relator conjugate so the input is trivial
    u = free_reduce(raw)
    w = free_reduce(inverse(u) + Z2.members[ri] + u)
    m = mi % (len(w) + 1)
    z = apply_move(w, MoveDescriptor.insert(ri, m), Z2)
    assert z == free_reduce(z)
    # abelian image stays zero
    assert sum(1 if x == a else -1 if x == A else 0 for x in z) == 0
    assert sum(1 if x == b else -1 if x == B else 0 for x in z) == 0

from hypothesis import given, strategies as st

from cogrowth.words import (
    EMPTY,
    all_letters,
    commutator,
    concat_reduce,
    conjugate,
    cyclic_permutations,
    format_word,
    free_reduce,
    inverse,
    is_reduced,
    letter,
    power,
)

a, A, b, B, c = 1, -1, 2, -2, 3

letters3 = st.sampled_from([1, -1, 2, -2, 3, -3])
raw_words = st.lists(letters3, max_size=30).map(tuple)
reduced_words = raw_words.map(free_reduce)


def test_letter_encoding():
    assert letter(0) == 1 and letter(0, -1) == -1 and letter(2, 1) == 3
    assert all_letters(2) == [1, -1, 2, -2]


def test_free_reduce_examples():
    assert free_reduce([a, A]) == EMPTY
    assert free_reduce([]) == EMPTY
    assert free_reduce([a, b, B, b, B, a]) == (a, a)


def test_concat_reduce_examples():
    assert concat_reduce((a, b), (B, a)) == (a, a)
    assert concat_reduce((a, b, a), (b,)) == (a, b, a, b)


def test_inverse_examples():
    assert inverse((a, B)) == (b, A)
    assert inverse(EMPTY) == EMPTY


def test_cyclic_permutations():
    assert cyclic_permutations((a, b, c)) == {(a, b, c), (b, c, a), (c, a, b)}
    assert cyclic_permutations((a, a, a)) == {(a, a, a)}
    # a^2 b a^-3 b^-1 has seven distinct reduced rotations
    assert len(cyclic_permutations((a, a, b, A, A, A, B))) == 7


def test_cyclic_rotation_can_shorten():
    assert cyclic_permutations((a, b, A)) == {(a, b, A), (b,)}


def test_power_commutator_conjugate():
    assert power((a, b), 2) == (a, b, a, b)
    assert power((a, b), -1) == (B, A)
    assert power((a,), 0) == EMPTY
    assert commutator((a,), (b,)) == (A, B, a, b)
    assert conjugate((a,), (b,)) == (B, a, b)


def test_format_word():
    assert format_word((a, B, A)) == "aBA"
    assert format_word(EMPTY) == "1"
    assert format_word((1, -2), ["x", "y"]) == "xY"


@given(raw_words)
def test_reduce_is_reduced_and_idempotent(w):
    r = free_reduce(w)
    assert is_reduced(r)
    assert free_reduce(r) == r


@given(reduced_words)
def test_inverse_involution_and_cancellation(w):
    assert inverse(inverse(w)) == w
    assert concat_reduce(w, inverse(w)) == EMPTY


@given(reduced_words, reduced_words)
def test_concat_matches_full_reduction(u, v):
    assert concat_reduce(u, v) == free_reduce(u + v)


@given(raw_words, raw_words)
def test_reduction_is_a_homomorphism(u, v):
    assert free_reduce(free_reduce(u) + free_reduce(v)) == free_reduce(u + v)

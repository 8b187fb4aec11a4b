import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cogrowth._kernel import CompiledChain, pack_table
from cogrowth.bruteforce import oracle_for, truncated_state_space
from cogrowth.chain import (
    ChainParams,
    accept_ratio_conjugation,
    accept_ratio_insertion,
    initial_word,
    log_weight,
    new_state,
    run,
    step,
    transition_probability,
    transition_row,
)
from cogrowth.presentation import bundled, parse_presentation, relator_closure
from cogrowth.words import EMPTY

Z2 = relator_closure(bundled("z2"))


def test_ratio_examples():
    p0 = ChainParams(alpha=0.0, beta=1 / 3)
    assert accept_ratio_conjugation(3, 3, p0) == 1.0
    assert accept_ratio_conjugation(2, 4, p0) == pytest.approx(5 / 27, rel=1e-14)
    assert accept_ratio_conjugation(4, 2, p0) == 1.0
    p1 = ChainParams(alpha=1.0, beta=1 / 3)
    assert accept_ratio_insertion(5, 5, p1) == 1.0
    assert accept_ratio_insertion(0, 4, p1) == pytest.approx(5 / 81, rel=1e-14)


@given(st.integers(0, 200), st.integers(0, 200), st.floats(-1, 3), st.floats(0.01, 0.99))
def test_ratio_product_law(n1, n2, alpha, beta):
    p = ChainParams(alpha=alpha, beta=beta)
    for f in (accept_ratio_conjugation, accept_ratio_insertion):
        fwd, back = f(n1, n2, p), f(n2, n1, p)
        assert 0.0 <= fwd <= 1.0 and 0.0 <= back <= 1.0
        if n1 != n2:
            assert fwd == 1.0 or back == 1.0


def test_ratio_survives_long_relators():
    p = ChainParams(alpha=1.0, beta=0.01)
    assert 0.0 <= accept_ratio_insertion(10, 5000, p) < 1e-300


def test_params_validation():
    for bad in (dict(alpha=1, beta=0), dict(alpha=1, beta=1), dict(alpha=1, beta=0.2, p_c=0),
                dict(alpha=math.nan, beta=0.2)):
        with pytest.raises(ValueError):
            ChainParams(**bad)


def test_initial_word():
    rng = np.random.default_rng(0)
    assert initial_word(Z2, False, rng) == EMPTY
    assert initial_word(Z2, True, rng) in Z2.members


def test_empty_word_only_leaves_by_insertion():
    p = ChainParams(alpha=1.0, beta=0.3, avoid_empty=False)
    row = transition_row(EMPTY, p, Z2)
    assert set(row) == set(Z2.members) | {EMPTY}
    s = new_state(Z2, p, seed=3)
    assert s.current == EMPTY
    for _ in range(200):
        before = s.current
        step(s, p, Z2)
        if before == EMPTY and s.current != EMPTY:
            assert s.current in Z2.members


def test_avoid_empty_never_visits_empty():
    p = ChainParams(alpha=-1.0, beta=0.1)
    s = new_state(Z2, p, seed=4)
    lengths = run(s, p, Z2, 20000)
    assert min(lengths) > 0
    assert s.counters.empty_rejects > 0


def test_order_two_never_reaches_inverse_square():
    t = relator_closure(parse_presentation("gens: a\nrel: aa"))
    p = ChainParams(alpha=0.0, beta=0.5)
    s = new_state(t, p, seed=9)
    s.current = (1, 1)
    seen = set()
    for _ in range(5000):
        step(s, p, t)
        seen.add(s.current)
    # a^2 and a^-2 are both trivial but a^2 cannot shrink to a^-2 past the guard
    assert all(w[0] == 1 for w in seen)


@pytest.mark.parametrize("name", ["z2", "k3", "thompson_f1", "bs23"])
def test_compiled_chain_matches_reference(name):
    t = relator_closure(bundled(name))
    params = ChainParams(alpha=1.0, beta=0.3, p_c=0.4)
    s = new_state(t, params, seed=5)
    lengths = run(s, params, t, 20000)
    rng = np.random.default_rng(5)
    w0 = initial_word(t, True, rng)
    c = CompiledChain(w0, t, pack_table(t), rng, alpha=1.0, beta=0.3, p_c=0.4, avoid_empty=True,
                      block_size=1, block_count=20000, ring_size=20000)
    c.advance(20000)
    assert c.word == s.current
    assert np.array_equal(c.block_sums, np.array(lengths))
    assert np.array_equal(c.counters, s.counters.as_array())
    assert np.array_equal(c.recent_lengths(), np.array(lengths))


def test_compiled_chain_in_segments_matches_one_call():
    t = Z2
    runs = []
    for segments in ([30000], [7, 9993, 20000]):
        rng = np.random.default_rng(12)
        c = CompiledChain(t.members[0], t, pack_table(t), rng, alpha=0.0, beta=0.28, p_c=0.5,
                          avoid_empty=True, burn_in=100, block_size=299, block_count=100, ring_size=4096)
        for n in segments:
            c.advance(n)
        runs.append((c.word, c.block_sums.copy(), c.recent_lengths()))
    assert runs[0][0] == runs[1][0]
    assert np.array_equal(runs[0][1], runs[1][1])
    assert np.array_equal(runs[0][2], runs[1][2])


def test_empirical_transition_frequencies():
    # one step from a fixed state, repeated; every outcome within 3 sigma of its probability
    p = ChainParams(alpha=0.0, beta=1 / 3)
    w = (1, 2, -1, -2)
    row = transition_row(w, p, Z2)
    s = new_state(Z2, p, seed=1)
    counts = Counter()
    n = 10**6
    for _ in range(n):
        s.current = w
        step(s, p, Z2)
        counts[s.current] += 1
    assert set(counts) <= set(row)
    for v, q in row.items():
        assert abs(counts[v] / n - q) <= 3 * math.sqrt(q * (1 - q) / n)


def test_rows_sum_to_one():
    p = ChainParams(alpha=1.0, beta=0.3)
    space = truncated_state_space(bundled("z2"), oracle_for("z2"), 8, include_empty=False)
    for u in space[::7]:
        row = transition_row(u, p, Z2)
        assert math.fsum(row.values()) == pytest.approx(1.0, abs=1e-14)
        assert min(row.values()) >= 0.0


def test_two_routes_agree():
    p = ChainParams(alpha=0.5, beta=0.27)
    space = truncated_state_space(bundled("z2"), oracle_for("z2"), 8, include_empty=False)
    for u in space[::11]:
        row = transition_row(u, p, Z2)
        for v in space:
            assert transition_probability(u, v, p, Z2) == pytest.approx(row.get(v, 0.0), abs=1e-15)


def test_single_move_probability_by_hand():
    # a b A B -> conjugation by a gives a a b A B A; one of 4 letters, accepted with
    # min(1, (7/5)^2 beta^2)
    p = ChainParams(alpha=1.0, beta=0.3)
    u = (1, 2, -1, -2)
    v = (1, 1, 2, -1, -2, -1)
    expected = 0.5 / 4 * min(1.0, (7 / 5) ** 2 * 0.3**2)
    assert transition_probability(u, v, p, Z2) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("alpha,beta", [(-1.0, 0.2), (0.0, 0.25), (1.0, 0.3), (2.5, 0.1)])
def test_detailed_balance_z2(alpha, beta):
    p = ChainParams(alpha=alpha, beta=beta)
    space = truncated_state_space(bundled("z2"), oracle_for("z2"), 8, include_empty=False)
    members = set(space)
    rows = {u: transition_row(u, p, Z2) for u in space}
    for u in space:
        for v, puv in rows[u].items():
            if v in members and v != u:
                lhs = math.exp(log_weight(len(u), alpha, beta)) * puv
                rhs = math.exp(log_weight(len(v), alpha, beta)) * rows[v][u]
                assert lhs == pytest.approx(rhs, rel=1e-12)


def test_detailed_balance_with_empty_word():
    p = ChainParams(alpha=0.0, beta=0.2, avoid_empty=False)
    space = truncated_state_space(bundled("z2"), oracle_for("z2"), 6, include_empty=True)
    rows = {u: transition_row(u, p, Z2) for u in space}
    for u in space:
        for v, puv in rows[u].items():
            if v in rows and v != u:
                lhs = math.exp(log_weight(len(u), 0.0, 0.2)) * puv
                rhs = math.exp(log_weight(len(v), 0.0, 0.2)) * rows[v][u]
                assert lhs == pytest.approx(rhs, rel=1e-12)


def test_uniform_relator_probability_is_exact():
    assert Z2.probability[0] == Fraction(1, 8)

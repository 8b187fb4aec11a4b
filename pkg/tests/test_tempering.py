import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cogrowth._kernel import CompiledChain, pack_table
from cogrowth.chain import initial_word, log_weight
from cogrowth.presentation import bundled, relator_closure
from cogrowth.series import converged_expected_length, woess_transform, z2_return_series
from cogrowth.tempering import (
    ConfigError,
    TemperingConfig,
    TemperingRun,
    linear_grid,
    parse_betas,
    run_grid,
    swap_accept_ratio,
)


def test_swap_ratio_examples():
    assert swap_accept_ratio(0.1, 0.2, 7, 7) == 1.0
    assert swap_accept_ratio(0.1, 0.2, 4, 8) < 1.0
    assert swap_accept_ratio(0.1, 0.2, 8, 4) == 1.0
    assert swap_accept_ratio(0.1, 0.3, 4, 6) == pytest.approx((1 / 3) ** 2)


@given(st.integers(0, 60), st.integers(0, 60), st.floats(0.01, 0.98), st.floats(0.001, 0.5),
       st.floats(-1, 3))
def test_swap_detailed_balance(n, m, b1, gap, alpha):
    # pi_i(x) pi_j(y) acc(x<->y) is symmetric under exchanging the two words
    b2 = min(b1 + gap, 0.99)
    fwd = log_weight(n, alpha, b1) + log_weight(m, alpha, b2)
    back = log_weight(m, alpha, b1) + log_weight(n, alpha, b2)
    a_f = swap_accept_ratio(b1, b2, n, m)
    a_b = swap_accept_ratio(b1, b2, m, n)
    if a_f > 0 and a_b > 0:
        assert fwd + math.log(a_f) == pytest.approx(back + math.log(a_b), abs=1e-9)


@pytest.mark.parametrize("bad", [
    dict(betas=()),
    dict(betas=(0.2, 0.1)),
    dict(betas=(0.1, 0.1)),
    dict(betas=(0.0, 0.1)),
    dict(betas=(0.1, 1.0)),
    dict(betas=(0.1,), p_c=1.0),
    dict(betas=(0.1,), swap_interval=0),
    dict(betas=(0.1,), block_count=1),
    dict(betas=(0.1,), steps_per_chain=10),
])
def test_config_validation(bad):
    kw = dict(alpha=1.0, steps_per_chain=1000)
    kw.update(bad)
    with pytest.raises(ConfigError):
        TemperingConfig(**kw)


def _plain(table, seed_seq, beta, steps, blocks=10):
    rng = np.random.default_rng(seed_seq)
    w0 = initial_word(table, True, rng)
    c = CompiledChain(w0, table, pack_table(table), rng, alpha=1.0, beta=beta, p_c=0.5,
                      avoid_empty=True, block_size=steps // blocks, block_count=blocks, ring_size=steps)
    c.advance(steps)
    return c


def test_single_beta_is_plain_chain():
    p = bundled("z2")
    cfg = TemperingConfig(betas=(0.2,), alpha=1.0, steps_per_chain=20000, block_count=10, seed=4)
    run = TemperingRun(cfg, p)
    reports = run.run()
    plain = _plain(run.table, np.random.SeedSequence(4).spawn(2)[0], 0.2, 20000)
    assert reports[0].block_means == list(plain.block_sums / plain.block_size)
    assert math.isnan(reports[0].swap_accept_rate)


def test_swaps_disabled_gives_independent_chains():
    p = bundled("z2")
    betas = (0.1, 0.2, 0.3)
    cfg = TemperingConfig(betas=betas, alpha=1.0, steps_per_chain=20000, block_count=10, seed=8,
                          swaps=False)
    run = TemperingRun(cfg, p)
    reports = run.run()
    seqs = np.random.SeedSequence(8).spawn(4)
    for r, b, ss in zip(reports, betas, seqs):
        plain = _plain(run.table, ss, b, 20000)
        assert r.block_means == list(plain.block_sums / plain.block_size)
    assert run.swap_attempts.sum() == 0


def test_swap_rounds_alternate_pairs():
    cfg = TemperingConfig(betas=(0.1, 0.15, 0.2, 0.25), alpha=1.0, steps_per_chain=1000,
                          block_count=10, swap_interval=100)
    run = TemperingRun(cfg, bundled("z2"))
    run.swap_round()
    assert list(run.swap_attempts) == [1, 0, 1]
    run.swap_round()
    assert list(run.swap_attempts) == [1, 1, 1]


def test_equal_length_swap_always_accepted():
    cfg = TemperingConfig(betas=(0.1, 0.3), alpha=1.0, steps_per_chain=1000, block_count=10)
    run = TemperingRun(cfg, bundled("z2"))
    a, b = run.chains
    assert a.length == b.length == 4
    wa, wb = a.word, b.word
    run.swap_round()
    assert run.swap_accepts[0] == 1
    assert (a.word, b.word) == (wb, wa)


def test_workers_do_not_change_results():
    kw = dict(betas=(0.1, 0.2, 0.25), alpha=1.0, steps_per_chain=30000, block_count=10, seed=2)
    one = run_grid(TemperingConfig(**kw), bundled("k3"))
    three = run_grid(TemperingConfig(workers=3, **kw), bundled("k3"))
    assert [r.row() for r in one] == [r.row() for r in three]


def test_tempered_means_match_exact():
    betas = (0.1, 0.2)
    cfg = TemperingConfig(betas=betas, alpha=1.0, steps_per_chain=10**6, burn_in=10**4, seed=6)
    make = lambda n: woess_transform(z2_return_series(n), 2, n)
    for r in run_grid(cfg, bundled("z2")):
        exact, _ = converged_expected_length(make, 1.0, r.beta)
        assert abs(r.mean_length - exact) < 4 * r.err
        assert r.samples == 10**6
        assert 0 < r.swap_accept_rate <= 1
        assert r.conj_accept_rate > 0 and r.insert_accept_rate > 0


def test_grid_helpers():
    assert linear_grid(0.05, 0.3, 6) == [0.05, 0.1, 0.15, 0.2, 0.25, 0.3]
    assert linear_grid(0.2, 0.3, 1) == [0.2]
    assert parse_betas("0.1, 0.2 0.3") == [0.1, 0.2, 0.3]
    with pytest.raises(ConfigError):
        linear_grid(0.1, 0.2, 0)

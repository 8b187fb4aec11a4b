"""The ten acceptance criteria, each at its stated tolerance.

Results are collected here and printed one line per criterion at the end of
the session (see conftest.py).
"""
import pytest

from cogrowth.verify import CHECKS, _Sampler, run_check

RESULTS = {}
_sampler = _Sampler()


@pytest.mark.parametrize("number", sorted(CHECKS))
def test_criterion(number):
    res = run_check(number, _sampler)
    RESULTS[number] = res
    print(res.line())
    assert res.passed, res.detail

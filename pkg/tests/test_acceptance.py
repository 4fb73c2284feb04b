"""Every acceptance criterion at its stated tolerance, one pass/fail line each.

The lines are printed in the terminal summary; measured values are attached
to the assertion message of a failing criterion.
"""

import pytest

from gksqueeze.acceptance import CRITERIA, run_one


@pytest.mark.parametrize("key", [k for k, _, _ in CRITERIA])
def test_criterion(key, acceptance_log):
    res = run_one(key)
    acceptance_log.append(res.line())
    print(res.line())
    for d in res.details:
        print("    " + d)
    assert res.passed, res.line() + "\n" + "\n".join(res.details)


def test_sign_error_in_a_squared_breaks_window_check(monkeypatch):
    import gksqueeze.stats as stats

    orig = stats.a_squared_expectation
    monkeypatch.setattr(stats, "a_squared_expectation", lambda st: -orig(st))
    assert not run_one("AC04").passed


def test_under_truncation_breaks_normalization_check():
    from gksqueeze.states import TruncationPolicy

    res = run_one("AC02", TruncationPolicy(max_n=5))
    assert not res.passed and "TruncationError" in res.details[0]

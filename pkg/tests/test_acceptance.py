"""One test per acceptance criterion at its stated tolerance and time limit.

Each check prints a single PASS/FAIL line, bypassing output capture.
"""

import pytest

from ulamkac import acceptance

CRITERIA = acceptance.criteria("full")


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"{c[0]:02d}_{c[1]}" for c in CRITERIA])
def test_criterion(criterion, capsys):
    check = acceptance.run_check(*criterion)
    with capsys.disabled():
        print("\n" + check.line())
    assert check.passed, check.line()


def test_fast_level_is_a_subset():
    fast = {c[0] for c in acceptance.criteria("fast")}
    assert fast == set(range(1, 14)) - {9}
    with pytest.raises(ValueError):
        acceptance.criteria("medium")


def test_crash_is_reported_as_failure():
    def boom():
        raise RuntimeError("kaput")
    check = acceptance.run_check(0, "boom", "DERIVED", 1, boom)
    assert not check.passed and "kaput" in check.observed


def test_time_limit_is_enforced():
    check = acceptance.run_check(0, "slow", "DERIVED", 0.0, lambda: ("x", "x", True))
    assert not check.passed

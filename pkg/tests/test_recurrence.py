import math
from fractions import Fraction

import pytest

from ulamkac.pathspace import exact_moment_oracle
from ulamkac.recurrence import (
    BudgetExceeded,
    build_coefficient_matrices,
    exact_moments,
    fraction_log,
    hardcoded_m2_moments,
    initial_state,
    laguerre_first_moment,
    laguerre_three_term,
    m2_ode_residual,
    m3_log_series,
    moment_states,
    scalar_m3_recurrence,
    step,
)

GAMMA = [Fraction(1), Fraction(8), Fraction(91, 2), Fraction(629, 3), Fraction(20003, 24),
         Fraction(8893, 3), Fraction(6953959, 720)]


def test_m3_row_two_one():
    mats = build_coefficient_matrices(3)
    assert mats.C1[1] == [1, 1, 0, 0]
    assert mats.C2[1] == [2, 4, 0, 2]
    assert mats.C3[1] == [1, 1, 1, 0]


def test_m3_remaining_rows():
    mats = build_coefficient_matrices(3)
    assert [mats.C2[i] for i in (0, 2, 3)] == [[6, 3, 3, 0], [0, 0, 0, 0], [0, 0, 0, 0]]
    assert [mats.C3[i] for i in (0, 2, 3)] == [[1, 0, 0, 0], [1, 1, 1, 0], [1, 3, 0, 3]]
    assert mats.C1 == [[1, 0, 0, 0], [1, 1, 0, 0], [1, 0, 1, 0], [1, 2, 0, 1]]


def test_m1_matrices():
    mats = build_coefficient_matrices(1)
    assert (mats.C1, mats.C2, mats.C3) == ([[1]], [[0]], [[1]])


@pytest.mark.parametrize("m", range(1, 8))
def test_matrix_structure(m):
    mats = build_coefficient_matrices(m)
    lengths = mats.basis.lengths
    d = mats.dim
    for i in range(d):
        assert mats.C1[i][i] == 1
        assert all(mats.C1[i][j] == 0 for j in range(i + 1, d))
        assert sum(mats.C1[i]) == 2 ** lengths[i]
        assert sum(mats.C3[i]) == 2 ** (lengths[i] + 1) - 1
        for j in range(d):
            if mats.C2[i][j]:
                assert lengths[i] - lengths[j] >= -1
            if mats.C3[i][j]:
                assert lengths[i] - lengths[j] >= 0
            assert min(mats.C1[i][j], mats.C2[i][j], mats.C3[i][j]) >= 0


def test_initial_state():
    st = initial_state(3)
    assert st.h == (1, 0, 0, 0) and st.s == (0, 0, 0, 0) and st.n == 0
    assert initial_state(1).h == (1,)


def test_step_m1():
    mats = build_coefficient_matrices(1)
    s1 = step(initial_state(1), mats)
    assert s1.h == (2,)
    s2 = step(s1, mats)
    assert s2.s == (3,) or s2.s == (Fraction(3),)
    assert s2.h == (Fraction(7, 2),)


def test_three_steps_m3():
    mats = build_coefficient_matrices(3)
    st = initial_state(3)
    for _ in range(3):
        st = step(st, mats)
    assert st.h[0] == Fraction(629, 3)


def test_third_moment_initial_values():
    assert exact_moments(3, 6).values == GAMMA


@pytest.mark.parametrize("m", range(1, 7))
def test_first_step_is_two_to_the_m(m):
    assert exact_moments(m, 1)[1] == 2**m


def test_second_moment_first_step():
    assert exact_moments(2, 1)[1] == 4


@pytest.mark.parametrize("m", range(1, 5))
def test_engine_matches_path_enumeration(m):
    table = exact_moments(m, 8)
    assert [table[n] for n in range(9)] == [exact_moment_oracle(m, n) for n in range(9)]


@pytest.mark.parametrize("m", range(1, 6))
def test_states_nonnegative_and_denominators_divide_factorial(m):
    for st in moment_states(m, 25):
        assert all(x >= 0 for x in st.h)
        assert st.h[0] >= 1
        assert all(math.factorial(st.n) % x.denominator == 0 for x in st.h)


def test_moment_table_nondecreasing():
    vals = exact_moments(3, 60).values
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        exact_moments(5, 1000, budget=100)


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("ULAMKAC_BUDGET", "10")
    with pytest.raises(BudgetExceeded):
        exact_moments(3, 5)


def test_laguerre_values():
    assert laguerre_first_moment(0) == 1
    assert laguerre_first_moment(2) == Fraction(7, 2)
    assert laguerre_first_moment(10) == exact_moments(1, 10)[10]


def test_laguerre_three_term_recurrence():
    assert laguerre_three_term(50) == [laguerre_first_moment(n) for n in range(51)]


def test_hardcoded_second_moment():
    sigma = hardcoded_m2_moments(40).values
    assert sigma[:3] == [1, 4, Fraction(25, 2)]
    assert sigma == exact_moments(2, 40).values


def test_m2_ode_annihilates_second_moments():
    residual = m2_ode_residual(exact_moments(2, 200).values)
    assert len(residual) >= 197
    assert all(r == 0 for r in residual[:197])


def test_m2_ode_detects_perturbation():
    sigma = exact_moments(2, 30).values
    sigma[10] += 1
    assert any(r != 0 for r in m2_ode_residual(sigma))


def test_scalar_m3_recurrence_matches_engine():
    scalar = scalar_m3_recurrence(20).values
    assert scalar[:7] == GAMMA
    assert scalar[1] == 8
    assert scalar == exact_moments(3, 20).values


def test_scalar_m3_requires_seven_terms():
    with pytest.raises(ValueError):
        scalar_m3_recurrence(5)


def test_m3_log_series_agrees_with_exact():
    exact = scalar_m3_recurrence(1000)
    series = m3_log_series(1000, precision=128)
    assert series[6][1] == pytest.approx(math.log(6953959 / 720), rel=1e-15)
    assert series[1000][1] == pytest.approx(fraction_log(exact[1000]), rel=1e-10)
    logs = [v for _, v in series]
    assert all(b > a for a, b in zip(logs, logs[1:]))


def test_m3_log_series_arguments():
    with pytest.raises(ValueError):
        m3_log_series(50)
    with pytest.raises(ValueError):
        m3_log_series(200, precision=32)


def test_log_moment_increments_in_sqrt_n_rise_towards_c3():
    pts = m3_log_series(1000, precision=128)
    x = [math.sqrt(n) for n, _ in pts]
    y = [v for _, v in pts]
    slopes = [(y[k + 1] - y[k]) / (x[k + 1] - x[k]) for k in range(1, 1000)]
    assert all(b > a for a, b in zip(slopes, slopes[1:]))
    assert slopes[-1] < 2 * math.sqrt(11.979293127704)

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ulamkac.gf_pipeline import decompose
from ulamkac.spectral import (
    NoConvergence,
    NotPrimitive,
    charpoly,
    is_primitive,
    largest_real_root,
    moment_constant,
    perron_eigenvalue,
    squarefree,
)

M0_M3 = [[1, 3, 3, 0], [1, 4, 4, 2], [1, 4, 4, 0], [2, 8, 8, 7]]


def test_primitivity_examples():
    assert is_primitive(M0_M3)
    assert not is_primitive(np.eye(2))
    swap = is_primitive([[0, 1], [1, 0]])
    assert not swap and swap.zero_entry is not None and swap.power == 2


def test_primitivity_rejects_negative():
    with pytest.raises(ValueError):
        is_primitive([[1, -1], [1, 1]])


def test_power_iteration_simple():
    lam, res, _ = perron_eigenvalue([[2, 1], [1, 2]])
    assert lam == pytest.approx(3, abs=1e-12)
    assert res < 1e-10


def test_power_iteration_cap():
    # eigenvalues 1 and 0.999999: the ratio makes 5 iterations hopeless
    A = np.array([[1.0, 0.0], [1e-3, 0.999999]]) + 1e-9
    with pytest.raises(NoConvergence):
        perron_eigenvalue(A, max_iter=5)


def test_charpoly_small():
    # x^2 - 4x + 3
    assert charpoly([[2, 1], [1, 2]]) == [1, -4, 3]


def test_squarefree_removes_repeated_root():
    # (x-1)^2 (x-2)
    p = [Fraction(c) for c in (1, -4, 5, -2)]
    q = squarefree(p)
    assert len(q) == 3
    assert largest_real_root(p) == pytest.approx(2, abs=1e-13)


def test_lambda3():
    r = moment_constant(3)
    assert r.lam == pytest.approx(11.979293127704, abs=1e-9)
    assert r.c == pytest.approx(6.9222, abs=1e-4)


@pytest.mark.parametrize("m", range(1, 7))
def test_power_iteration_matches_sturm_oracle(m):
    M0 = decompose(m).M0
    exact = float(largest_real_root(charpoly(M0)))
    assert moment_constant(m).lam == pytest.approx(exact, rel=1e-11)


def test_closed_forms():
    assert moment_constant(1).c == pytest.approx(2, abs=1e-12)
    assert moment_constant(2).lam == pytest.approx((5 + math.sqrt(17)) / 2, abs=1e-9)
    assert moment_constant(2).c == pytest.approx(math.sqrt(2 * (5 + math.sqrt(17))), abs=1e-6)


def test_constants_grow_and_respect_bounds():
    results = [moment_constant(m) for m in range(1, 9)]
    cs = [r.c for r in results]
    assert all(b > a for a, b in zip(cs, cs[1:]))
    for r in results:
        assert r.within_bounds
        assert r.c >= 2 * r.m
        assert r.lam <= r.max_column_sum + 1e-9
        assert r.in_conjectured_band


@st.composite
def positive_matrix_and_perm(draw):
    d = draw(st.integers(2, 5))
    entries = draw(st.lists(st.integers(1, 9), min_size=d * d, max_size=d * d))
    perm = draw(st.permutations(range(d)))
    return np.array(entries, dtype=float).reshape(d, d), list(perm)


@given(positive_matrix_and_perm())
@settings(max_examples=40, deadline=None)
def test_perron_root_invariant_under_permutation(data):
    A, perm = data
    lam, _, _ = perron_eigenvalue(A)
    lam_p, _, _ = perron_eigenvalue(A[np.ix_(perm, perm)])
    assert lam_p == pytest.approx(lam, rel=1e-10)
    assert lam == pytest.approx(max(abs(np.linalg.eigvals(A))), rel=1e-9)
    assert lam <= A.sum(axis=0).max() + 1e-9


def test_not_primitive_surfaces(monkeypatch):
    import ulamkac.spectral as spectral

    class Fake:
        M0 = [[1, 0], [0, 1]]

    monkeypatch.setattr(spectral, "decompose", lambda m: Fake)
    with pytest.raises(NotPrimitive):
        spectral.moment_constant(2)

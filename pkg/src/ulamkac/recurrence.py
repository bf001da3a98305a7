"""Exact moment recurrences for the adder ``X_{n+1} = X_n + X_{U(n)}``.

The vector ``h_n`` of all ``C_n(q; p)`` (canonical order) obeys

    h_{n+1} = C1 h_n + (C2 h_n + C3 (h_n + s_n)) / (n + 1),    s_n = h_0 + ... + h_{n-1}

with integer matrices ``C1, C2, C3`` read off the three kinds of terms
(plain, divided by ``n+1``, running average) of the general recurrence.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath

from .combinatorics import CanonicalBasis, Multiset, MomentIndex, canonical_basis, position_subsets

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "ULAMKAC_BUDGET"


class BudgetExceeded(RuntimeError):
    pass


class PrecisionExhausted(ArithmeticError):
    pass


def default_budget() -> int:
    value = os.environ.get(BUDGET_ENV)
    return int(value) if value else DEFAULT_BUDGET


IntMatrix = list[list[int]]


@dataclass(frozen=True)
class CoefficientMatrices:
    m: int
    basis: CanonicalBasis
    C1: IntMatrix
    C2: IntMatrix
    C3: IntMatrix

    @property
    def dim(self) -> int:
        return len(self.basis)

    def sparse(self):
        """Row-wise ``[(col, value), ...]`` lists for C1, C2, C3."""
        return tuple(
            [[(j, v) for j, v in enumerate(row) if v] for row in M]
            for M in (self.C1, self.C2, self.C3)
        )


def build_coefficient_matrices(m: int) -> CoefficientMatrices:
    basis = canonical_basis(m)
    d = len(basis)
    C1 = [[0] * d for _ in range(d)]
    C2 = [[0] * d for _ in range(d)]
    C3 = [[0] * d for _ in range(d)]

    def col(q: int, p: Multiset) -> int:
        idx = MomentIndex(q, p)
        if idx not in basis:
            raise AssertionError(f"builder produced {idx!r}, absent from the order-{m} basis")
        return basis.index(idx)

    for i, (q, p) in enumerate((e.q, e.p) for e in basis):
        for sub, rest in position_subsets(p):
            C1[i][col(q + sub.size, rest)] += 1
        for beta in range(1, q):
            weight = math.comb(q, beta)
            for sub, rest in position_subsets(p + [q - beta]):
                C2[i][col(beta + sub.size, rest)] += weight
        for sub, rest in position_subsets(p + [q]):
            if sub.length:
                C3[i][col(sub.size, rest)] += 1
    return CoefficientMatrices(m, basis, C1, C2, C3)


@dataclass(frozen=True)
class MomentState:
    n: int
    h: tuple[Fraction, ...]
    s: tuple[Fraction, ...]

    @property
    def moment(self) -> Fraction:
        return self.h[0]


def initial_state(m: int) -> MomentState:
    d = len(canonical_basis(m))
    zero = (Fraction(0),) * d
    return MomentState(0, (Fraction(1),) + zero[1:], zero)


def _matvec(rows, v):
    return [sum(c * v[j] for j, c in row) for row in rows]


def step(state: MomentState, mats: CoefficientMatrices, _sparse=None) -> MomentState:
    S1, S2, S3 = _sparse or mats.sparse()
    h, s = state.h, state.s
    if len(h) != mats.dim:
        raise ValueError("state dimension does not match the coefficient matrices")
    hs = [a + b for a, b in zip(h, s)]
    plain = _matvec(S1, h)
    bar = _matvec(S2, h)
    hat = _matvec(S3, hs)
    k = state.n + 1
    new_h = tuple(a + Fraction(b + c) / k for a, b, c in zip(plain, bar, hat))
    return MomentState(k, new_h, tuple(hs))


@dataclass(frozen=True)
class MomentTable:
    m: int
    rows: tuple[tuple[int, Fraction], ...]

    @property
    def values(self) -> list[Fraction]:
        return [v for _, v in self.rows]

    def __getitem__(self, n: int) -> Fraction:
        return self.rows[n][1]

    def __len__(self) -> int:
        return len(self.rows)


def moment_states(m: int, N: int, budget: int | None = None):
    """Yield the exact states ``h_0 .. h_N``."""
    mats = build_coefficient_matrices(m)
    budget = default_budget() if budget is None else budget
    if mats.dim * N > budget:
        raise BudgetExceeded(f"{mats.dim} x {N} state updates exceeds budget {budget}")
    sparse = mats.sparse()
    state = initial_state(m)
    yield state
    for _ in range(N):
        state = step(state, mats, sparse)
        yield state


def exact_moments(m: int, N: int, budget: int | None = None) -> MomentTable:
    if N < 0:
        raise ValueError("N must be nonnegative")
    rows = tuple((st.n, st.moment) for st in moment_states(m, N, budget))
    return MomentTable(m, rows)


def laguerre_first_moment(n: int) -> Fraction:
    """E[X_n] = L_n(-1) = sum_l binom(n, l) / l!."""
    return sum((Fraction(math.comb(n, l), math.factorial(l)) for l in range(n + 1)), Fraction(0))


def laguerre_three_term(N: int) -> list[Fraction]:
    """First moments from (n+2)mu_{n+2} = 2(n+2)mu_{n+1} - (n+1)mu_n."""
    mu = [Fraction(1), Fraction(2)]
    for n in range(N - 1):
        mu.append((2 * (n + 2) * mu[n + 1] - (n + 1) * mu[n]) / (n + 2))
    return mu[: N + 1]


def hardcoded_m2_moments(N: int) -> MomentTable:
    """Second moments from the two-sequence (sigma, alpha) system.

    alpha_n = sum_{l<n} E[X_n X_l]; the running sums are carried explicitly.
    """
    sigma, alpha = Fraction(1), Fraction(0)
    sum_sigma = sum_alpha = Fraction(0)
    rows = [(0, sigma)]
    for n in range(N):
        sum_sigma += sigma
        sum_alpha += alpha
        k = n + 1
        sigma, alpha = (
            sigma + Fraction(2, k) * (sigma + alpha) + sum_sigma / k,
            sigma + alpha + (sum_sigma + 2 * sum_alpha) / k,
        )
        rows.append((k, sigma))
    return MomentTable(2, tuple(rows))


def m2_ode_residual(sigma: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients of (z^2-6z+7)G + (3z-8)(1-z)^2 G' + (1-z)^4 G'' for G = sum sigma_n z^n.

    Only coefficients fully determined by the given terms are returned
    (indices 0 .. len(sigma) - 3).
    """
    N = len(sigma)
    G = list(sigma)
    dG = [(k + 1) * G[k + 1] for k in range(N - 1)]
    d2G = [(k + 1) * (k + 2) * G[k + 2] for k in range(N - 2)]
    terms = [
        ([7, -6, 1], G),
        (_polymul([-8, 3], [1, -2, 1]), dG),
        ([1, -4, 6, -4, 1], d2G),
    ]
    top = N - 2
    out = [Fraction(0)] * top
    for poly, series in terms:
        for i, c in enumerate(poly):
            for k in range(top - i):
                if k < len(series):
                    out[k + i] += c * series[k]
    return out


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


# third-moment scalar recurrence: sum_{i=0}^{7} g_i(n) gamma_{n+i} = 0
M3_INITIAL = (
    Fraction(1), Fraction(8), Fraction(91, 2), Fraction(629, 3),
    Fraction(20003, 24), Fraction(8893, 3), Fraction(6953959, 720),
)


def m3_coefficients(n: int) -> tuple[int, ...]:
    return (
        -(1 + n) ** 3 * (2 + n),
        (2 + n) ** 2 * (54 + 40 * n + 7 * n**2),
        -(2614 + 3203 * n + 1449 * n**2 + 287 * n**3 + 21 * n**4),
        10262 + 10108 * n + 3686 * n**2 + 590 * n**3 + 35 * n**4,
        -(4 + n) * (4430 + 2688 * n + 535 * n**2 + 35 * n**3),
        (4 + n) * (5 + n) * (738 + 251 * n + 21 * n**2),
        -(4 + n) * (5 + n) * (6 + n) * (48 + 7 * n),
        (n + 4) * (n + 5) * (n + 6) * (n + 7),
    )


def scalar_m3_recurrence(N: int) -> MomentTable:
    if N < 7:
        raise ValueError("N must be at least 7")
    gamma = list(M3_INITIAL)
    for n in range(N - 6):
        g = m3_coefficients(n)
        if g[7] == 0:
            raise ZeroDivisionError(f"leading coefficient vanishes at n={n}")
        gamma.append(-sum(g[i] * gamma[n + i] for i in range(7)) / g[7])
    return MomentTable(3, tuple(enumerate(gamma[: N + 1])))


def fraction_log(x: Fraction) -> float:
    """Natural log of a positive rational with arbitrarily large parts."""
    return math.log(x.numerator) - math.log(x.denominator)


def m3_log_series(N: int, precision: int = 256, rescale_bits: int = 64) -> list[tuple[int, float]]:
    """``(n, ln E[X_n^3])`` for ``n <= N`` from the scalar recurrence in floating point.

    The seven-term window is kept at magnitude ~1 by dividing out its largest
    entry whenever it exceeds ``2**rescale_bits``; the divided-out logarithm is
    accumulated separately. Relative error of ``ln`` grows roughly like
    ``N * 2**(1 - precision)``.
    """
    if N < 100:
        raise ValueError("N must be at least 100")
    if precision < 64:
        raise ValueError("precision must be at least 64 bits")
    out = []
    with mpmath.workprec(precision):
        window = [mpmath.mpf(x.numerator) / x.denominator for x in M3_INITIAL]
        offset = mpmath.mpf(0)
        limit = mpmath.mpf(2) ** rescale_bits
        for n, x in enumerate(window):
            out.append((n, float(mpmath.log(x))))
        for n in range(N - 6):
            g = m3_coefficients(n)
            nxt = -mpmath.fsum(g[i] * window[i] for i in range(7)) / g[7]
            window = window[1:] + [nxt]
            if not mpmath.isfinite(nxt) or nxt <= 0:
                raise PrecisionExhausted(f"window degenerated at n={n + 7}")
            if nxt > limit:
                scale = nxt
                window = [w / scale for w in window]
                offset += mpmath.log(scale)
                if window[0] == 0:
                    raise PrecisionExhausted(f"window underflow at n={n + 7}")
            out.append((n + 7, float(offset + mpmath.log(window[-1]))))
    return out[: N + 1]

"""Primitivity and Perron-Frobenius eigenvalues of nonnegative matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .combinatorics import basis_size
from .gf_pipeline import decompose


class NotPrimitive(ValueError):
    pass


class NoConvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class PrimitivityResult:
    primitive: bool
    power: int
    # (i, j) of a zero entry of M^power, or None when M^power > 0
    zero_entry: tuple[int, int] | None

    def __bool__(self):
        return self.primitive


def is_primitive(M) -> PrimitivityResult:
    """Decide primitivity by checking ``M^k > 0`` at the Wielandt bound ``k = (d-1)^2 + 1``."""
    A = np.asarray(M, dtype=float)
    if (A < 0).any():
        raise ValueError("matrix has negative entries")
    d = A.shape[0]
    k = (d - 1) ** 2 + 1
    B = (A > 0).astype(np.int64)
    # boolean power by repeated squaring, clipping to {0, 1}
    result = np.eye(d, dtype=np.int64)
    base, e = B, k
    while e:
        if e & 1:
            result = np.minimum(result @ base, 1)
        base = np.minimum(base @ base, 1)
        e >>= 1
    zeros = np.argwhere(result == 0)
    if len(zeros):
        i, j = zeros[0]
        return PrimitivityResult(False, k, (int(i), int(j)))
    return PrimitivityResult(True, k, None)


def perron_eigenvalue(M, tol: float = 1e-12, max_iter: int = 10**6) -> tuple[float, float, int]:
    """Power iteration from the all-ones vector with sup-norm normalisation.

    Stops once both the eigenvalue change and ``||Mv - lam v|| / ||v||`` (sup
    norms) are below ``tol * max(1, lam)``. Returns ``(lam, residual, iterations)``.
    """
    A = np.asarray(M, dtype=float)
    v = np.ones(A.shape[0])
    lam = 0.0
    residual = math.inf
    for it in range(1, max_iter + 1):
        y = A @ v
        lam_new = float(np.max(np.abs(y)) / np.max(np.abs(v)))
        v_new = y / np.max(np.abs(y))
        residual = float(np.max(np.abs(A @ v_new - lam_new * v_new)))
        scale = max(1.0, abs(lam_new))
        converged = abs(lam_new - lam) < tol * scale and residual < tol * scale
        v, lam = v_new, lam_new
        if converged:
            return lam, residual, it
    raise NoConvergence(f"no convergence after {max_iter} iterations (residual {residual:.3e})")


def charpoly(M) -> list[Fraction]:
    """Exact characteristic polynomial ``det(xI - M)``, highest degree first (Faddeev-LeVerrier)."""
    A = [[Fraction(x) for x in row] for row in M]
    d = len(A)
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * d for _ in range(d)]
    for k in range(1, d + 1):
        # Mk <- A Mk_prev + c_{k-1} I
        prev = Mk
        c_prev = coeffs[-1]
        Mk = [[sum(A[i][l] * prev[l][j] for l in range(d)) + (c_prev if i == j else 0) for j in range(d)] for i in range(d)]
        AM = [[sum(A[i][l] * Mk[l][j] for l in range(d)) for j in range(d)] for i in range(d)]
        coeffs.append(-sum(AM[i][i] for i in range(d)) / k)
    return coeffs


def _poly_eval(p, x):
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _poly_rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        f = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _derivative(p):
    d = len(p) - 1
    return [c * (d - i) for i, c in enumerate(p[:-1])]


def _poly_gcd(a, b):
    while b:
        a, b = b, _poly_rem(a, b)
    return [c / a[0] for c in a]


def _poly_div(a, b):
    a, q = list(a), []
    while len(a) >= len(b):
        f = a[0] / b[0]
        q.append(f)
        for i in range(len(b)):
            a[i] -= f * b[i]
        a.pop(0)
    return q


def squarefree(p):
    return _poly_div(p, _poly_gcd(p, _derivative(p)))


def _sturm_chain(p):
    chain = [p, _derivative(p)]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return chain


def _sign_changes(chain, x):
    signs = [s for s in (_poly_eval(q, x) for q in chain) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def largest_real_root(p, tol: Fraction = Fraction(1, 10**14)) -> Fraction:
    """Largest real root of a polynomial by Sturm-sequence bisection (exact arithmetic)."""
    p = [Fraction(c) for c in p]
    while p and p[0] == 0:
        p.pop(0)
    if len(p) > 2:
        p = squarefree(p)
    if len(p) == 2:
        return -p[1] / p[0]
    bound = 1 + max(abs(c / p[0]) for c in p[1:])
    chain = _sturm_chain(p)
    if _sign_changes(chain, -bound) == _sign_changes(chain, bound):
        raise ValueError("polynomial has no real roots")
    lo, hi = -bound, bound
    while hi - lo > tol:
        mid = (lo + hi) / 2
        # any root strictly above mid?
        if _sign_changes(chain, mid) > _sign_changes(chain, hi):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class AsymptoticResult:
    m: int
    M0: list[list]
    lam: float
    c: float
    iterations: int
    residual: float
    basis_size: int

    @property
    def lower_bound(self) -> float:
        return 2.0 * self.m

    @property
    def log2_upper_bound(self) -> float:
        return (self.m / 2 + 1) * math.exp(3 * math.sqrt(self.m))

    @property
    def within_bounds(self) -> bool:
        return self.c >= self.lower_bound - 1e-12 and math.log2(self.c) <= self.log2_upper_bound

    @property
    def conjectured_band(self) -> tuple[float, float]:
        """Conjectured range of ``log c_m``."""
        return round(0.3 * self.m, 12), round(0.4 * self.m + 1, 12)

    @property
    def in_conjectured_band(self) -> bool:
        lo, hi = self.conjectured_band
        return lo <= math.log(self.c) <= hi

    @property
    def max_column_sum(self) -> float:
        return float(np.asarray(self.M0, dtype=float).sum(axis=0).max())


def moment_constant(m: int, tol: float = 1e-12) -> AsymptoticResult:
    """``c_m = 2 sqrt(lambda_m)`` with ``lambda_m`` the Perron root of ``M0 = B1 E``."""
    M0 = decompose(m).M0
    prim = is_primitive(M0)
    if not prim:
        raise NotPrimitive(f"M0 for m={m} is not primitive: zero at {prim.zero_entry} of power {prim.power}")
    lam, residual, iterations = perron_eigenvalue(M0, tol)
    return AsymptoticResult(m, M0, lam, 2 * math.sqrt(lam), iterations, residual, basis_size(m))

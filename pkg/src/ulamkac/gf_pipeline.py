"""Generating-function pipeline in the variable ``w = 1 - z``.

With ``g' = R(z) g``, ``R = (I - z C1)^{-1} [C1 + C2 + C3 / (1 - z)]``, the
substitution ``g = P h``, ``P = diag(w^{-len(p_i)})``, and ``u = 1/w`` gives

    h'(u) = S(u) h(u),    S = w^2 P^{-1} R P - w G = sum_k M_k u^{-k}

Every entry met along the way is a Laurent polynomial in ``w`` (the inverse of
``Q = I - z C1`` has entries ``w^{-(len(p_i) - len(p_j) + 1)} * poly``), so no
rational-function arithmetic is needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

from .combinatorics import CanonicalBasis, MomentIndex, canonical_basis, position_subsets
from .recurrence import CoefficientMatrices, build_coefficient_matrices

import math


class StructuralViolation(ArithmeticError):
    """The symbolic pipeline met an exponent pattern that a correct build never produces."""


def _normalize(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


class LaurentPoly:
    """Finitely supported ``{exponent of w: rational coefficient}``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, Rational] | None = None):
        self.coeffs = {int(k): _normalize(v) for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def monomial(cls, c, k: int) -> "LaurentPoly":
        return cls({k: c})

    @classmethod
    def from_z_poly(cls, zcoeffs: Iterable) -> "LaurentPoly":
        """Re-express ``sum a_k z^k`` with ``z = 1 - w``."""
        out = ZERO
        one_minus_w = cls({0: 1, 1: -1})
        power = ONE
        for a in zcoeffs:
            out = out + power * a
            power = power * one_minus_w
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_exp(self) -> int:
        return min(self.coeffs)

    @property
    def max_exp(self) -> int:
        return max(self.coeffs)

    def coeff(self, k: int):
        return self.coeffs.get(k, 0)

    def __add__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, LaurentPoly) else -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            if other == 0:
                return ZERO
            return LaurentPoly({k: v * other for k, v in self.coeffs.items()})
        out: dict[int, Rational] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                out[i + j] = out.get(i + j, 0) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``w**k``."""
        return LaurentPoly({e + k: v for e, v in self.coeffs.items()})

    def is_monomial(self) -> bool:
        return len(self.coeffs) == 1

    def inverse_monomial(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ZeroDivisionError(f"{self!r} is not a unit of the Laurent ring")
        (k, c), = self.coeffs.items()
        inv = Fraction(1, c) if isinstance(c, int) else 1 / c
        return LaurentPoly({-k: inv})

    def __call__(self, w):
        """Evaluate at ``w`` (exact for rational ``w``)."""
        total = Fraction(0)
        for k, v in self.coeffs.items():
            total += v * Fraction(w) ** k
        return total

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{v}*w^{k}" for k, v in sorted(self.coeffs.items()))


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
W = LaurentPoly({1: 1})


class LaurentMatrix:
    """Square matrix of :class:`LaurentPoly` entries."""

    def __init__(self, entries):
        self.entries = [[e if isinstance(e, LaurentPoly) else LaurentPoly.const(e) for e in row] for row in entries]
        self.dim = len(self.entries)
        if any(len(row) != self.dim for row in self.entries):
            raise ValueError("LaurentMatrix must be square")

    @classmethod
    def identity(cls, d: int) -> "LaurentMatrix":
        return cls([[ONE if i == j else ZERO for j in range(d)] for i in range(d)])

    @classmethod
    def constant(cls, rows, scale: LaurentPoly = ONE) -> "LaurentMatrix":
        return cls([[scale * c if c else ZERO for c in row] for row in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        return LaurentMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def scale(self, c) -> "LaurentMatrix":
        return LaurentMatrix([[a * c for a in row] for row in self.entries])

    def __matmul__(self, other: "LaurentMatrix") -> "LaurentMatrix":
        d = self.dim
        cols = [[other.entries[k][j] for k in range(d)] for j in range(d)]
        out = []
        for row in self.entries:
            nz = [(k, a) for k, a in enumerate(row) if not a.is_zero()]
            out_row = []
            for col in cols:
                acc: dict[int, Rational] = {}
                for k, a in nz:
                    b = col[k]
                    for e1, v1 in a.coeffs.items():
                        for e2, v2 in b.coeffs.items():
                            acc[e1 + e2] = acc.get(e1 + e2, 0) + v1 * v2
                out_row.append(LaurentPoly(acc))
            out.append(out_row)
        return LaurentMatrix(out)

    def coefficient(self, k: int) -> list[list]:
        """Constant matrix of the ``w**k`` coefficients."""
        return [[e.coeff(k) for e in row] for row in self.entries]

    def exponent_range(self) -> tuple[int, int] | None:
        exps = [k for row in self.entries for e in row for k in e.coeffs]
        return (min(exps), max(exps)) if exps else None

    def evaluate(self, w) -> list[list[Fraction]]:
        return [[e(w) for e in row] for row in self.entries]

    def is_lower_triangular(self) -> bool:
        return all(self.entries[i][j].is_zero() for i in range(self.dim) for j in range(i + 1, self.dim))

    def __eq__(self, other):
        return isinstance(other, LaurentMatrix) and self.entries == other.entries

    def __repr__(self):
        return "LaurentMatrix(" + repr(self.entries) + ")"


def build_Q(mats: CoefficientMatrices) -> LaurentMatrix:
    """``Q = I - z C1`` written in ``w``: diagonal ``w``, off-diagonal ``-(1 - w) C1[i][j]``."""
    d = mats.dim
    one_minus_w = LaurentPoly({0: 1, 1: -1})
    rows = []
    for i in range(d):
        row = []
        for j in range(d):
            c = mats.C1[i][j]
            if i == j:
                row.append(ONE - one_minus_w * c)
            else:
                row.append(-(one_minus_w * c) if c else ZERO)
        rows.append(row)
    return LaurentMatrix(rows)


def invert_triangular(X: LaurentMatrix) -> LaurentMatrix:
    """Inverse of a lower-triangular matrix by forward recursion over rows.

    ``a[i][j] = (delta_ij - sum_{k<i} X[i][k] a[k][j]) / X[i][i]``; each
    diagonal entry must be a unit (a single Laurent monomial).
    """
    d = X.dim
    if not X.is_lower_triangular():
        raise StructuralViolation("matrix is not lower triangular")
    inv_diag = []
    for i in range(d):
        if X[i, i].is_zero():
            raise ZeroDivisionError(f"zero diagonal entry at index {i}")
        inv_diag.append(X[i, i].inverse_monomial())
    A = [[ZERO] * d for _ in range(d)]
    for i in range(d):
        nz = [(k, X[i, k]) for k in range(i) if not X[i, k].is_zero()]
        for j in range(i + 1):
            acc = ONE if i == j else ZERO
            for k, c in nz:
                if k >= j and not A[k][j].is_zero():
                    acc = acc - c * A[k][j]
            A[i][j] = acc * inv_diag[i]
    return LaurentMatrix(A)


def conjugate_by_P(M: LaurentMatrix, basis: CanonicalBasis, inverse: bool = False) -> LaurentMatrix:
    """``P^{-1} M P``: entry ``(i, j)`` times ``w^{len(p_i) - len(p_j)}`` (``inverse`` undoes it)."""
    lengths = basis.lengths
    if len(lengths) != M.dim:
        raise ValueError("basis and matrix dimensions differ")
    sign = -1 if inverse else 1
    return LaurentMatrix([
        [M[i, j].shift(sign * (lengths[i] - lengths[j])) for j in range(M.dim)]
        for i in range(M.dim)
    ])


@dataclass(frozen=True)
class SystemDecomposition:
    m: int
    basis: CanonicalBasis
    Q: LaurentMatrix
    Qinv: LaurentMatrix
    B1: list[list]
    B2: LaurentMatrix
    E: list[list]
    F: LaurentMatrix
    G: list[list[int]]
    S: LaurentMatrix
    Ms: tuple[list[list], ...]

    @property
    def M0(self) -> list[list]:
        return self.Ms[0]


def _split_pole(M: LaurentMatrix, what: str, window: int):
    """Split ``M = w^{-1} A + B`` with constant ``A`` and ``B`` polynomial in ``w``."""
    rng = M.exponent_range()
    if rng is not None:
        lo, hi = rng
        if lo < -1:
            raise StructuralViolation(f"{what} has a pole of order {-lo} > 1")
        if hi > window:
            raise StructuralViolation(f"{what} exponent {hi} exceeds window {window}")
    A = M.coefficient(-1)
    B = LaurentMatrix([[LaurentPoly({k: v for k, v in e.coeffs.items() if k != -1}) for e in row] for row in M.entries])
    return A, B


def _check_C1(mats: CoefficientMatrices):
    d = mats.dim
    for i in range(d):
        if mats.C1[i][i] != 1:
            raise StructuralViolation(f"C1[{i}][{i}] = {mats.C1[i][i]}, expected 1")
        for j in range(i + 1, d):
            if mats.C1[i][j]:
                raise StructuralViolation(f"C1[{i}][{j}] = {mats.C1[i][j]} above the diagonal")


def decompose(m: int, mats: CoefficientMatrices | None = None, window: int | None = None) -> SystemDecomposition:
    """Run the full pipeline for moment order ``m``; ``mats`` overrides the built matrices."""
    mats = mats or build_coefficient_matrices(m)
    basis = mats.basis
    window = 4 * m if window is None else window
    d = mats.dim
    _check_C1(mats)

    Q = build_Q(mats)
    Qinv = invert_triangular(Q)
    B1, B2 = _split_pole(conjugate_by_P(Qinv, basis), "P^-1 Q^-1 P", window)

    inner = LaurentMatrix([
        [LaurentPoly({0: mats.C1[i][j] + mats.C2[i][j], -1: mats.C3[i][j]}) for j in range(d)]
        for i in range(d)
    ])
    E, F = _split_pole(conjugate_by_P(inner, basis), "D", window)

    G = [[basis.lengths[i] if i == j else 0 for j in range(d)] for i in range(d)]
    B1L = LaurentMatrix.constant(B1)
    EL = LaurentMatrix.constant(E)
    # w^2 (w^-1 B1 + B2)(w^-1 E + F) - w G
    S = B1L @ EL + (B1L @ F + B2 @ EL - LaurentMatrix.constant(G)).scale(W) + (B2 @ F).scale(W * W)
    rng = S.exponent_range()
    if rng is not None and (rng[0] < 0 or rng[1] > window):
        raise StructuralViolation(f"S has exponents {rng} outside [0, {window}]")
    top = rng[1] if rng else 0
    Ms = tuple(S.coefficient(k) for k in range(top + 1))
    return SystemDecomposition(m, basis, Q, Qinv, B1, B2, E, F, G, S, Ms)


def restricted_E(m: int) -> list[list[int]]:
    """Pole coefficient of ``D`` from the term-restricted sums.

    Row ``(q; p)`` keeps the ``b = empty`` terms of the ``1/(n+1)`` sum and the
    single-part ``b`` terms of the running-average sum.
    """
    basis = canonical_basis(m)
    d = len(basis)
    E = [[0] * d for _ in range(d)]
    for i, e in enumerate(basis):
        q, p = e.q, e.p
        for beta in range(1, q):
            E[i][basis.index(MomentIndex(beta, p + [q - beta]))] += math.comb(q, beta)
        for sub, rest in position_subsets(p + [q]):
            if sub.length == 1:
                E[i][basis.index(MomentIndex(sub.size, rest))] += 1
    return E


def _solve_lower(A, b):
    x = []
    for i, row in enumerate(A):
        x.append((b[i] - sum(row[k] * x[k] for k in range(i))) / row[i])
    return x


def evaluate_R(m: int, z0) -> list[list[Fraction]]:
    """Exact ``R(z0) = (I - z0 C1)^{-1} [C1 + C2 + C3 / (1 - z0)]`` for ``z0 < 1``."""
    z0 = Fraction(z0)
    if z0 >= 1:
        raise ValueError(f"R is singular at z >= 1 (got {z0})")
    mats = build_coefficient_matrices(m)
    d = mats.dim
    Q = [[(1 if i == j else 0) - z0 * mats.C1[i][j] for j in range(d)] for i in range(d)]
    rhs = [[mats.C1[i][j] + mats.C2[i][j] + Fraction(mats.C3[i][j]) / (1 - z0) for j in range(d)] for i in range(d)]
    cols = [_solve_lower(Q, [rhs[i][j] for i in range(d)]) for j in range(d)]
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def R_from_decomposition(dec: SystemDecomposition, z0) -> list[list[Fraction]]:
    """Rebuild ``R(z0) = P (w^-2 S + w^-1 G) P^{-1}`` from the u-expansion."""
    w = 1 - Fraction(z0)
    lengths = dec.basis.lengths
    d = len(lengths)
    out = []
    for i in range(d):
        row = []
        for j in range(d):
            s = sum((Fraction(M[i][j]) * w**k for k, M in enumerate(dec.Ms)), Fraction(0))
            val = s / w**2 + (Fraction(dec.G[i][j]) / w)
            row.append(val * w ** (lengths[j] - lengths[i]))
        out.append(row)
    return out

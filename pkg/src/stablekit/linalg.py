"""Exact rational matrices: predicates, determinants, PSD tests.

The PSD test is a pivoted LDL-style elimination that is exact over the
rationals: it never takes square roots, only outer-product updates with
positive pivots.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import PreconditionError


def _rat(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalMatrix:
    """Immutable rectangular matrix with Fraction entries."""

    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(_rat(x) for x in row) for row in rows)
        if not rs:
            raise PreconditionError("empty matrix")
        w = len(rs[0])
        if any(len(r) != w for r in rs):
            raise PreconditionError("ragged rows")
        self.rows = rs

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "RationalMatrix":
        m = n if m is None else m
        return cls([[0] * m for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(zip(*self.rows))

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.n, self.m) != (other.n, other.m):
            raise PreconditionError("shape mismatch")
        return RationalMatrix(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.rows, other.rows)
            ]
        )

    def __mul__(self, other):
        if isinstance(other, RationalMatrix):
            if self.m != other.n:
                raise PreconditionError("shape mismatch")
            cols = other.transpose().rows
            return RationalMatrix(
                [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.rows]
            )
        c = _rat(other)
        return RationalMatrix([[c * x for x in row] for row in self.rows])

    __rmul__ = __mul__

    def trace(self) -> Fraction:
        self._require_square()
        return sum(self.rows[i][i] for i in range(self.n))

    def _require_square(self) -> None:
        if self.n != self.m:
            raise PreconditionError("matrix must be square")

    # -- predicates ----------------------------------------------------------

    def is_square(self) -> bool:
        return self.n == self.m

    def is_symmetric(self) -> bool:
        return self.is_square() and all(
            self.rows[i][j] == self.rows[j][i]
            for i in range(self.n)
            for j in range(i + 1, self.n)
        )

    def is_nonnegative(self) -> bool:
        return all(x >= 0 for row in self.rows for x in row)

    def is_zero_one(self) -> bool:
        return all(x == 0 or x == 1 for row in self.rows for x in row)

    def is_doubly_stochastic(self) -> bool:
        return (
            self.is_square()
            and self.is_nonnegative()
            and all(sum(row) == 1 for row in self.rows)
            and all(sum(col) == 1 for col in self.transpose().rows)
        )

    def is_monotone_column(self) -> bool:
        """Entries weakly decreasing down each column."""
        return all(
            self.rows[i][j] >= self.rows[i + 1][j]
            for i in range(self.n - 1)
            for j in range(self.m)
        )

    def is_psd(self) -> bool:
        """Exact positive-semidefiniteness via pivoted outer-product elimination.

        Requires symmetry.  At each step: a negative diagonal entry refutes;
        if the whole diagonal is zero the matrix must be zero; otherwise
        eliminate on any positive diagonal pivot.
        """
        if not self.is_symmetric():
            raise PreconditionError("PSD test requires a symmetric matrix")
        a = [list(row) for row in self.rows]
        active = list(range(self.n))
        while active:
            if any(a[i][i] < 0 for i in active):
                return False
            pivot = next((i for i in active if a[i][i] > 0), None)
            if pivot is None:
                # zero diagonal: PSD iff the remaining block is entirely zero
                return all(a[i][j] == 0 for i in active for j in active)
            active.remove(pivot)
            piv = a[pivot][pivot]
            for i in active:
                if a[i][pivot]:
                    f = a[i][pivot] / piv
                    for j in active:
                        a[i][j] -= f * a[pivot][j]
        return True

    # -- determinants --------------------------------------------------------

    def det(self) -> Fraction:
        """Exact determinant by fraction Gaussian elimination."""
        self._require_square()
        a = [list(row) for row in self.rows]
        n = self.n
        sign = 1
        det = Fraction(1)
        for col in range(n):
            pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
            if pivot_row is None:
                return Fraction(0)
            if pivot_row != col:
                a[col], a[pivot_row] = a[pivot_row], a[col]
                sign = -sign
            piv = a[col][col]
            det *= piv
            for r in range(col + 1, n):
                if a[r][col]:
                    f = a[r][col] / piv
                    for c in range(col, n):
                        a[r][c] -= f * a[col][c]
        return det * sign

    def charlike_poly(self) -> list[Fraction]:
        """Coefficients c_0..c_n of det(A + z*I), computed exactly.

        Uses evaluation at z = 0..n plus Lagrange interpolation, which keeps
        every intermediate value rational.
        """
        self._require_square()
        n = self.n
        values = []
        eye = RationalMatrix.identity(n)
        for k in range(n + 1):
            values.append((self + (eye * k)).det())
        return _interpolate(list(range(n + 1)), values)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        return {"rows": [[str(x) for x in row] for row in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "RationalMatrix":
        return cls([[Fraction(x) for x in row] for row in data["rows"]])

    def __repr__(self) -> str:
        return f"RationalMatrix({[[str(x) for x in row] for row in self.rows]})"


def _interpolate(xs: Sequence[int], ys: Sequence[Fraction]) -> list[Fraction]:
    """Coefficients of the unique degree-(len-1) polynomial through the points."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        # Lagrange basis polynomial for node i, expanded incrementally
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        w = ys[i] / denom
        for k in range(len(basis)):
            coeffs[k] += w * basis[k]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs

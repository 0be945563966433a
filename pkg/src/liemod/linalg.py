"""Exact rational matrices.

A :class:`Mat` stores an integer numerator matrix and one positive common
denominator, kept in lowest terms, so equality is structural. Products and
elimination run on the integer kernels in :mod:`liemod.kernels`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from . import kernels
from .errors import NoSolution, ShapeError


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"not an exact rational: {x!r}")


def format_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class Mat:
    """Immutable rational matrix."""

    __slots__ = ("num", "den", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], nrows: int | None = None, ncols: int | None = None):
        frows = [[to_fraction(x) for x in row] for row in rows]
        if nrows is None:
            nrows = len(frows)
        if ncols is None:
            ncols = len(frows[0]) if frows else 0
        if len(frows) != nrows or any(len(r) != ncols for r in frows):
            raise ShapeError(f"ragged or mis-sized matrix, expected {nrows}x{ncols}")
        den = 1
        for row in frows:
            for x in row:
                if x.denominator != 1:
                    den = _lcm(den, x.denominator)
        num = [[x.numerator * (den // x.denominator) for x in row] for row in frows]
        self._set(num, den, nrows, ncols)

    def _set(self, num, den, nrows, ncols):
        g = den
        for row in num:
            for x in row:
                if x:
                    g = gcd(g, x)
                    if g == 1:
                        break
            if g == 1:
                break
        if g > 1:
            num = [[x // g for x in row] for row in num]
            den //= g
        if not any(any(row) for row in num):
            den = 1
        self.num = tuple(tuple(row) for row in num)
        self.den = den
        self.nrows = nrows
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, num, den: int, nrows: int, ncols: int) -> "Mat":
        obj = cls.__new__(cls)
        if den < 0:
            num = [[-x for x in row] for row in num]
            den = -den
        obj._set(num, den, nrows, ncols)
        return obj

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Mat":
        return cls._raw([[0] * ncols for _ in range(nrows)], 1, nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls._raw([[int(i == j) for j in range(n)] for i in range(n)], 1, n, n)

    @classmethod
    def diag(cls, entries: Sequence) -> "Mat":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int) -> "Mat":
        return cls([[col[i] for col in cols] for i in range(nrows)], nrows, len(cols))

    # -- access ---------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return Fraction(self.num[i][j], self.den)

    def rows(self) -> list[list[Fraction]]:
        d = self.den
        return [[Fraction(x, d) for x in row] for row in self.num]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(Fraction(row[j], self.den) for row in self.num)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        num = [[self.num[i][j] for j in cols] for i in rows]
        return Mat._raw(num, self.den, len(rows), len(cols))

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.num)

    def nonzero_entries(self):
        for i, row in enumerate(self.num):
            for j, x in enumerate(row):
                if x:
                    yield i, j

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.den == other.den and self.num == other.num

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nrows, self.ncols, self.den, self.num))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_fraction(x) for x in row) for row in self.rows())
        return f"Mat[{self.nrows}x{self.ncols}]({body})"

    # -- arithmetic -----------------------------------------------------
    def _check_same(self, other: "Mat"):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Mat") -> "Mat":
        self._check_same(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        d = _lcm(self.den, other.den)
        a, b = d // self.den, d // other.den
        num = [[a * x + b * y for x, y in zip(r, s)] for r, s in zip(self.num, other.num)]
        return Mat._raw(num, d, self.nrows, self.ncols)

    def __neg__(self) -> "Mat":
        return Mat._raw([[-x for x in row] for row in self.num], self.den, self.nrows, self.ncols)

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def scale(self, c) -> "Mat":
        c = to_fraction(c)
        if c == 1:
            return self
        num = [[x * c.numerator for x in row] for row in self.num]
        return Mat._raw(num, self.den * c.denominator, self.nrows, self.ncols)

    def __mul__(self, c) -> "Mat":
        if isinstance(c, Mat):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.ncols != other.nrows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.is_zero() or other.is_zero():
            return Mat.zeros(self.nrows, other.ncols)
        num = kernels.int_matmul(self.num, other.num, other.ncols)
        return Mat._raw(num, self.den * other.den, self.nrows, other.ncols)

    def apply(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise ShapeError(f"vector of length {len(v)} for {self.shape} matrix")
        out = []
        for row in self.num:
            s = Fraction(0)
            for x, y in zip(row, v):
                if x and y:
                    s += x * y
            out.append(s / self.den)
        return tuple(out)

    @property
    def T(self) -> "Mat":
        num = [list(col) for col in zip(*self.num)] if self.nrows else [[] for _ in range(self.ncols)]
        return Mat._raw(num, self.den, self.ncols, self.nrows)

    def trace(self) -> Fraction:
        if self.nrows != self.ncols:
            raise ShapeError("trace of a non-square matrix")
        return Fraction(sum(self.num[i][i] for i in range(self.nrows)), self.den)

    # -- elimination ----------------------------------------------------
    def echelon(self):
        """Integer reduced echelon rows and pivot columns of the numerator."""
        return kernels.row_reduce(self.num, self.ncols)

    def rank(self) -> int:
        return len(self.echelon()[1])

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """Basis of the right kernel, one vector per free column."""
        rows, pivots = self.echelon()
        pivset = set(pivots)
        basis = []
        for f in range(self.ncols):
            if f in pivset:
                continue
            v = [Fraction(0)] * self.ncols
            v[f] = Fraction(1)
            for row, p in zip(rows, pivots):
                if row[f]:
                    v[p] = Fraction(-row[f], row[p])
            basis.append(tuple(v))
        return basis

    def left_nullspace(self) -> list[tuple[Fraction, ...]]:
        return self.T.nullspace()

    def column_space(self) -> list[tuple[Fraction, ...]]:
        """Canonical basis of the image: reduced echelon rows of the transpose."""
        rows, pivots = self.T.echelon()
        return [tuple(Fraction(x, row[p]) for x in row) for row, p in zip(rows, pivots)]

    def solve(self, y: Sequence) -> tuple[Fraction, ...]:
        """Some ``x`` with ``self @ x == y``.

        Raises :class:`NoSolution` carrying a covector ``z`` with ``z @ self == 0``
        and ``z . y != 0`` when ``y`` is not in the image.
        """
        y = [to_fraction(v) for v in y]
        if len(y) != self.nrows:
            raise ShapeError(f"right-hand side of length {len(y)} for {self.shape} matrix")
        dy = 1
        for v in y:
            dy = _lcm(dy, v.denominator)
        aug = [
            [x * dy for x in row] + [y[i].numerator * (dy // y[i].denominator) * self.den]
            for i, row in enumerate(self.num)
        ]
        rows, pivots = kernels.row_reduce(aug, self.ncols + 1)
        if pivots and pivots[-1] == self.ncols:
            for z in self.left_nullspace():
                if sum(a * b for a, b in zip(z, y)) != 0:
                    raise NoSolution(z)
            raise AssertionError("inconsistent system without a certificate")
        x = [Fraction(0)] * self.ncols
        for row, p in zip(rows, pivots):
            x[p] = Fraction(row[-1], row[p])
        return tuple(x)

    def inverse(self) -> "Mat":
        if self.nrows != self.ncols:
            raise ShapeError("inverse of a non-square matrix")
        n = self.nrows
        aug = [list(row) + [self.den * int(i == j) for j in range(n)] for i, row in enumerate(self.num)]
        rows, pivots = kernels.row_reduce(aug, 2 * n)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ValueError("matrix is singular")
        return Mat([[Fraction(x, row[i]) for x in row[n:]] for i, row in enumerate(rows[:n])], n, n)

    def det(self) -> Fraction:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.nrows != self.ncols:
            raise ShapeError("determinant of a non-square matrix")
        n = self.nrows
        if n == 0:
            return Fraction(1)
        m = [list(r) for r in self.num]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return Fraction(0)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return Fraction(sign * m[n - 1][n - 1], self.den**n)


def block_diag(blocks: Sequence[Mat]) -> Mat:
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    rows = [[Fraction(0)] * m for _ in range(n)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b.rows()):
            rows[r0 + i][c0 : c0 + b.ncols] = row
        r0 += b.nrows
        c0 += b.ncols
    return Mat(rows, n, m)


def rank_of(vectors: Sequence[Sequence], dim: int) -> int:
    if not vectors:
        return 0
    return Mat(vectors, len(vectors), dim).rank()

# -*- coding: utf-8 -*-
"""
Exact rational linear algebra.

Scalars are `fractions.Fraction` (always in lowest terms with a positive
denominator), vectors are tuples of fractions and matrices are immutable
row tuples with an explicit column count, so that a matrix with no rows
still knows its ambient dimension.  Nothing in this module rounds.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, InconsistentSystem, InputError

Rational = Fraction
RVector = Tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_LITERAL = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def to_rational(value) -> Fraction:
    """Parse an int, a Fraction or a string "p" / "p/q" into a Fraction."""
    if isinstance(value, bool):
        raise InputError(f"Booleans are not rationals: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        match = _RATIONAL_LITERAL.match(value)
        if not match:
            raise InputError(f"Not a rational literal: {value!r}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise InputError(f"Zero denominator in {value!r}")
        return Fraction(numerator, denominator)
    raise InputError(f"Unsupported rational value {value!r} ({type(value).__name__})")


def format_rational(value: Fraction) -> str:
    """Render as "p/q", or "p" when the denominator is 1."""
    return str(value)


# --- Vectors ---

def vector(entries: Iterable) -> RVector:
    return tuple(to_rational(v) for v in entries)


def zeros(n: int) -> RVector:
    return (ZERO,) * n


def unit(n: int, k: int) -> RVector:
    return tuple(ONE if i == k else ZERO for i in range(n))


def _check_same_length(u: Sequence, v: Sequence) -> None:
    if len(u) != len(v):
        raise DimensionMismatch(f"Vector lengths differ: {len(u)} != {len(v)}")


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    _check_same_length(u, v)
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total += a * b
    return total


def add(u: Sequence[Fraction], v: Sequence[Fraction]) -> RVector:
    _check_same_length(u, v)
    return tuple(a + b for a, b in zip(u, v))


def sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> RVector:
    _check_same_length(u, v)
    return tuple(a - b for a, b in zip(u, v))


def scale(c: Fraction, v: Sequence[Fraction]) -> RVector:
    return tuple(c * a for a in v)


def neg(v: Sequence[Fraction]) -> RVector:
    return tuple(-a for a in v)


def norm_sq(v: Sequence[Fraction]) -> Fraction:
    return dot(v, v)


def norm1(v: Sequence[Fraction]) -> Fraction:
    return sum((abs(a) for a in v), ZERO)


def is_zero(v: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in v)


def combination(coefficients: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]],
                dim: int) -> RVector:
    """Return sum of coefficients[i] * vectors[i] in R^dim."""
    if len(coefficients) != len(vectors):
        raise DimensionMismatch(f"{len(coefficients)} coefficients for {len(vectors)} vectors")
    total = [ZERO] * dim
    for c, v in zip(coefficients, vectors):
        if not c:
            continue
        if len(v) != dim:
            raise DimensionMismatch(f"Vector of length {len(v)} in R^{dim}")
        for k, a in enumerate(v):
            if a:
                total[k] += c * a
    return tuple(total)


def canonical_direction(v: Sequence[Fraction]) -> RVector:
    """Rescale to integer entries with content 1 and a positive leading entry."""
    if is_zero(v):
        return tuple(v)
    denominator = 1
    for a in v:
        denominator = denominator * a.denominator // gcd(denominator, a.denominator)
    integers = [int(a * denominator) for a in v]
    content = 0
    for n in integers:
        content = gcd(content, abs(n))
    leading = next(n for n in integers if n != 0)
    sign = 1 if leading > 0 else -1
    return tuple(Fraction(sign * n // content) for n in integers)


def common_denominator(v: Sequence[Fraction]) -> Tuple[Tuple[int, ...], int]:
    """(numerators, q) with v = numerators / q and q the least common denominator."""
    q = 1
    for a in v:
        q = q * a.denominator // gcd(q, a.denominator)
    return tuple(a.numerator * (q // a.denominator) for a in v), q


def positive_scaling(v: Sequence[Fraction]) -> Tuple[RVector, Fraction]:
    """Integer form with content 1 keeping the sign; returns (scaled, factor > 0)."""
    if is_zero(v):
        return tuple(v), ONE
    denominator = 1
    for a in v:
        denominator = denominator * a.denominator // gcd(denominator, a.denominator)
    integers = [int(a * denominator) for a in v]
    content = 0
    for n in integers:
        content = gcd(content, abs(n))
    factor = Fraction(denominator, content)
    return tuple(a * factor for a in v), factor


# --- Matrices ---

@dataclass(frozen=True)
class RMatrix:
    """Rational matrix stored as a tuple of rows plus the column count."""
    rows: Tuple[RVector, ...]
    ncols: int

    def __post_init__(self):
        for row in self.rows:
            if len(row) != self.ncols:
                raise DimensionMismatch(f"Row of length {len(row)} in a matrix with {self.ncols} columns")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], ncols: Optional[int] = None) -> "RMatrix":
        parsed = tuple(vector(row) for row in rows)
        if ncols is None:
            if not parsed:
                raise DimensionMismatch("Column count required for a matrix without rows")
            ncols = len(parsed[0])
        return cls(parsed, ncols)

    @classmethod
    def identity(cls, n: int) -> "RMatrix":
        return cls(tuple(unit(n, k) for k in range(n)), n)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "RMatrix":
        return cls(tuple(zeros(ncols) for _ in range(nrows)), ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def mul_vec(self, x: Sequence[Fraction]) -> RVector:
        if len(x) != self.ncols:
            raise DimensionMismatch(f"Vector of length {len(x)} for {self.ncols} columns")
        return tuple(dot(row, x) for row in self.rows)

    def select(self, indices: Iterable[int]) -> "RMatrix":
        return RMatrix(tuple(self.rows[i] for i in indices), self.ncols)

    def stack(self, rows: Iterable[Sequence[Fraction]]) -> "RMatrix":
        return RMatrix(self.rows + tuple(tuple(r) for r in rows), self.ncols)


def row_reduce(M: RMatrix) -> Tuple[List[List[Fraction]], List[int]]:
    """
    Reduced row echelon form.

    Pivot rule: scan columns left to right and take the topmost remaining row
    with a nonzero entry, so the output is a deterministic function of M.

    Returns:
        (nonzero rows of the RREF, pivot column of each of those rows)
    """
    work = [list(row) for row in M.rows]
    pivots: List[int] = []
    pivot_row = 0
    for col in range(M.ncols):
        if pivot_row == len(work):
            break
        source = next((r for r in range(pivot_row, len(work)) if work[r][col] != 0), None)
        if source is None:
            continue
        work[pivot_row], work[source] = work[source], work[pivot_row]
        pivot = work[pivot_row][col]
        if pivot != 1:
            work[pivot_row] = [a / pivot for a in work[pivot_row]]
        for r in range(len(work)):
            if r != pivot_row and work[r][col] != 0:
                factor = work[r][col]
                base = work[pivot_row]
                work[r] = [a - factor * b if b else a for a, b in zip(work[r], base)]
        pivots.append(col)
        pivot_row += 1
    return work[:pivot_row], pivots


def rank(M: RMatrix) -> int:
    return len(row_reduce(M)[1])


# --- Subspaces ---

@dataclass(frozen=True)
class SubspaceBasis:
    """Linearly independent vectors spanning a subspace of R^ambient_dim."""
    ambient_dim: int
    vectors: Tuple[RVector, ...]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @classmethod
    def spanned_by(cls, vectors: Iterable[Sequence[Fraction]], ambient_dim: int) -> "SubspaceBasis":
        """Canonical basis (RREF rows, integer content-1 form) of the span."""
        rows, _ = row_reduce(RMatrix(tuple(tuple(v) for v in vectors), ambient_dim))
        return cls(ambient_dim, tuple(canonical_direction(r) for r in rows))

    @classmethod
    def trivial(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, ())

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(ambient_dim, tuple(unit(ambient_dim, k) for k in range(ambient_dim)))

    def as_matrix(self) -> RMatrix:
        return RMatrix(self.vectors, self.ambient_dim)

    def contains(self, v: Sequence[Fraction]) -> bool:
        return rank(self.as_matrix().stack([v])) == self.dim

    def same_span(self, other: "SubspaceBasis") -> bool:
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        return all(self.contains(v) for v in other.vectors)


def kernel_basis(M: RMatrix) -> SubspaceBasis:
    """Basis of {x : Mx = 0}; its size is ncols - rank(M)."""
    rows, pivots = row_reduce(M)
    pivot_set = set(pivots)
    basis = []
    for free in range(M.ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * M.ncols
        v[free] = ONE
        for row, col in zip(rows, pivots):
            v[col] = -row[free]
        basis.append(canonical_direction(v))
    return SubspaceBasis(M.ncols, tuple(basis))


def orth_complement(B: SubspaceBasis) -> SubspaceBasis:
    return kernel_basis(B.as_matrix())


def _augmented_rref(Eq: RMatrix, c: Sequence[Fraction]) -> Tuple[List[List[Fraction]], List[int]]:
    if len(c) != Eq.nrows:
        raise DimensionMismatch(f"{Eq.nrows} equations but {len(c)} right-hand sides")
    augmented = RMatrix(tuple(row + (rhs,) for row, rhs in zip(Eq.rows, c)), Eq.ncols + 1)
    return row_reduce(augmented)


def solve_affine(Eq: RMatrix, c: Sequence[Fraction]) -> Optional[RVector]:
    """Some x with Eq x = c (free variables set to 0), or None if inconsistent."""
    rows, pivots = _augmented_rref(Eq, c)
    if pivots and pivots[-1] == Eq.ncols:
        return None
    x = [ZERO] * Eq.ncols
    for row, col in zip(rows, pivots):
        x[col] = row[Eq.ncols]
    return tuple(x)


def project_affine(x: Sequence[Fraction], Eq: RMatrix, c: Sequence[Fraction]) -> RVector:
    """
    Euclidean nearest point of {y : Eq y = c} to x.

    Works on an independent row subset R (with rhs c') and solves the normal
    equations (R R^T) z = R x - c', returning x - R^T z.

    Raises:
        InconsistentSystem: if the flat is empty
    """
    if len(x) != Eq.ncols:
        raise DimensionMismatch(f"Point of length {len(x)} for a flat in R^{Eq.ncols}")
    rows, pivots = _augmented_rref(Eq, c)
    if pivots and pivots[-1] == Eq.ncols:
        raise InconsistentSystem("Projection onto an empty affine subspace")
    if not rows:
        return tuple(x)
    normals = [tuple(row[:Eq.ncols]) for row in rows]
    rhs = [row[Eq.ncols] for row in rows]
    gram = RMatrix(tuple(tuple(dot(a, b) for b in normals) for a in normals), len(normals))
    residual = tuple(dot(a, x) - r for a, r in zip(normals, rhs))
    z = solve_affine(gram, residual)
    if z is None:
        raise InconsistentSystem("Singular Gram matrix for independent rows")
    return sub(x, combination(z, normals, Eq.ncols))

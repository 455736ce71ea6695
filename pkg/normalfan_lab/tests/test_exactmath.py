# -*- coding: utf-8 -*-
"""
Tests for exact rational linear algebra.
"""

import unittest
from fractions import Fraction as Q

import sys
from pathlib import Path

# Add parent directory to path
ROOT_DIR = Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from hypothesis import given, settings, strategies as st

from polyhedral_engine.errors import DimensionMismatch, InconsistentSystem, InputError
from polyhedral_engine.exactmath import (
    RMatrix, SubspaceBasis, canonical_direction, dot, format_rational, kernel_basis, norm_sq,
    orth_complement, project_affine, rank, solve_affine, sub, to_rational,
)


def rationals():
    return st.fractions(min_value=-4, max_value=4, max_denominator=4)


@st.composite
def matrices(draw, max_rows=4, max_cols=4):
    ncols = draw(st.integers(1, max_cols))
    nrows = draw(st.integers(0, max_rows))
    rows = draw(st.lists(st.lists(rationals(), min_size=ncols, max_size=ncols),
                         min_size=nrows, max_size=nrows))
    return RMatrix.from_rows(rows, ncols)


class TestRationals(unittest.TestCase):
    """Parsing and printing of rational literals"""

    def test_parse_reduces(self):
        """"3/6" parses to 1/2 in lowest terms"""
        value = to_rational("3/6")
        self.assertEqual(value, Q(1, 2))
        self.assertEqual(value.denominator, 2)

    def test_parse_integer_and_negative(self):
        """Integers and signed literals are accepted"""
        self.assertEqual(to_rational(7), Q(7))
        self.assertEqual(to_rational("-2/3"), Q(-2, 3))

    def test_parse_rejects_floats_and_garbage(self):
        """Floats, zero denominators and junk raise InputError"""
        for bad in (0.5, "1/0", "abc", "1.5", True):
            with self.assertRaises(InputError):
                to_rational(bad)

    def test_format(self):
        """Denominator 1 prints without a slash"""
        self.assertEqual(format_rational(Q(4, 2)), "2")
        self.assertEqual(format_rational(Q(-1, 3)), "-1/3")

    def test_canonical_direction(self):
        """Integer entries, content 1, positive leading entry"""
        self.assertEqual(canonical_direction((Q(1, 2), Q(-1, 3))), (Q(3), Q(-2)))
        self.assertEqual(canonical_direction((Q(0), Q(-4), Q(6))), (Q(0), Q(2), Q(-3)))


class TestRankAndKernel(unittest.TestCase):
    """rank and kernel_basis"""

    def test_rank_examples(self):
        """Identity, zero and dependent rows"""
        self.assertEqual(rank(RMatrix.identity(2)), 2)
        self.assertEqual(rank(RMatrix.zero(3, 2)), 0)
        self.assertEqual(rank(RMatrix.from_rows([[1, 0], [2, 0]])), 1)

    def test_kernel_examples(self):
        """Kernels of (0 1), the identity and (1 1)"""
        self.assertEqual(kernel_basis(RMatrix.from_rows([[0, 1]])).vectors, ((Q(1), Q(0)),))
        self.assertEqual(kernel_basis(RMatrix.identity(3)).dim, 0)
        self.assertEqual(kernel_basis(RMatrix.from_rows([[1, 1]])).vectors, ((Q(1), Q(-1)),))

    def test_kernel_of_matrix_without_rows(self):
        """A matrix with no rows has the whole space as kernel"""
        self.assertEqual(kernel_basis(RMatrix((), 3)).dim, 3)

    @given(matrices())
    @settings(max_examples=60, deadline=None)
    def test_rank_nullity(self, M):
        """rank + kernel dimension = column count, kernel vectors are annihilated"""
        kernel = kernel_basis(M)
        self.assertEqual(rank(M) + kernel.dim, M.ncols)
        for v in kernel.vectors:
            self.assertTrue(all(x == 0 for x in M.mul_vec(v)))
        self.assertEqual(rank(kernel.as_matrix()), kernel.dim)


class TestSubspaces(unittest.TestCase):
    """solve_affine, orth_complement and project_affine"""

    def test_solve_affine_examples(self):
        """Consistent systems are solved exactly, inconsistent ones give None"""
        x = solve_affine(RMatrix.from_rows([[1, 0]]), (Q(1),))
        self.assertEqual(x[0], 1)
        self.assertIsNone(solve_affine(RMatrix.from_rows([[1], [1]]), (Q(1), Q(2))))
        self.assertEqual(solve_affine(RMatrix.from_rows([[1, 1], [1, -1]]), (Q(2), Q(0))), (Q(1), Q(1)))

    def test_solve_affine_length_mismatch(self):
        """Right-hand side length must match the row count"""
        with self.assertRaises(DimensionMismatch):
            solve_affine(RMatrix.from_rows([[1, 0]]), (Q(1), Q(2)))

    def test_orth_complement_examples(self):
        """Complements in R^2 and R^3"""
        e1 = SubspaceBasis.spanned_by([(Q(1), Q(0))], 2)
        self.assertEqual(orth_complement(e1).vectors, ((Q(0), Q(1)),))
        self.assertEqual(orth_complement(SubspaceBasis.trivial(3)).dim, 3)
        diagonal = SubspaceBasis.spanned_by([(Q(1), Q(1))], 2)
        self.assertEqual(orth_complement(diagonal).vectors, ((Q(1), Q(-1)),))

    @given(matrices(max_rows=3, max_cols=4))
    @settings(max_examples=60, deadline=None)
    def test_complement_is_an_involution(self, M):
        """span(B) equals span of its double complement, cross products vanish"""
        B = SubspaceBasis.spanned_by(M.rows, M.ncols)
        C = orth_complement(B)
        self.assertEqual(B.dim + C.dim, M.ncols)
        for u in B.vectors:
            for v in C.vectors:
                self.assertEqual(dot(u, v), 0)
        self.assertTrue(B.same_span(orth_complement(C)))

    def test_project_examples(self):
        """Projection onto x1 = 1 and onto x1 + x2 = 0"""
        self.assertEqual(project_affine((Q(2), Q(1, 2)), RMatrix.from_rows([[1, 0]]), (Q(1),)),
                         (Q(1), Q(1, 2)))
        self.assertEqual(project_affine((Q(1), Q(1, 2)), RMatrix.from_rows([[1, 0]]), (Q(1),)),
                         (Q(1), Q(1, 2)))
        self.assertEqual(project_affine((Q(1), Q(1)), RMatrix.from_rows([[1, 1]]), (Q(0),)),
                         (Q(0), Q(0)))

    def test_project_onto_empty_flat(self):
        """An inconsistent flat raises InconsistentSystem"""
        with self.assertRaises(InconsistentSystem):
            project_affine((Q(0),), RMatrix.from_rows([[1], [1]]), (Q(1), Q(2)))

    @given(st.lists(rationals(), min_size=3, max_size=3),
           st.lists(rationals(), min_size=3, max_size=3),
           st.lists(rationals(), min_size=3, max_size=3))
    @settings(max_examples=60, deadline=None)
    def test_project_idempotent_and_nonexpansive(self, x, y, normal):
        """P(P(x)) = P(x), |P(x) - P(y)|^2 <= |x - y|^2, residual orthogonal to the flat"""
        Eq = RMatrix.from_rows([normal], 3)
        c = (Q(1),) if any(normal) else (Q(0),)
        px = project_affine(tuple(x), Eq, c)
        py = project_affine(tuple(y), Eq, c)
        self.assertEqual(project_affine(px, Eq, c), px)
        self.assertLessEqual(norm_sq(sub(px, py)), norm_sq(sub(tuple(x), tuple(y))))
        for v in kernel_basis(Eq).vectors:
            self.assertEqual(dot(sub(tuple(x), px), v), 0)


if __name__ == '__main__':
    unittest.main()

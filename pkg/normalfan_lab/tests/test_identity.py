# -*- coding: utf-8 -*-
"""
Tests for the signed cell sum and its companion identities.
"""

import dataclasses
import random
import unittest
from fractions import Fraction as Q
from unittest.mock import patch

import sys
from pathlib import Path

# Add parent directory to path
ROOT_DIR = Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from hypothesis import given, settings, strategies as st

from harness.generator import GenSpec, InstanceKind, gen_instance
from polyhedral_engine import identity
from polyhedral_engine.config import FULL_ACCEPTANCE
from polyhedral_engine.errors import CoverViolation, DimensionMismatch, NotACone, TheoremViolation
from polyhedral_engine.exactmath import RMatrix, neg, unit, vector
from polyhedral_engine.identity import (
    SampleStrategy, Stratum, apex_check, build_samples, cell_contains, check_interval_disjoint,
    constant_witness, covering_witness, degree_at, euler_sum, in_stratum, interval_phi, is_cone,
    lineality_reduction_check, open_cell_contains, phi_at, project_onto, psi, split_identity_check,
    squared_distance, strata_at, stratum_decomposition, verify_theorem,
)
from polyhedral_engine.polyhedron import decompose, make_polyhedron
from polyhedral_engine.serialization import load_polyhedron

DATA_DIR = ROOT_DIR / "data" / "instances"


def fixture(name: str):
    return load_polyhedron(DATA_DIR / f"{name}.json")


def small_points(dim: int):
    coordinate = st.fractions(min_value=-3, max_value=3, max_denominator=3)
    return st.lists(coordinate, min_size=dim, max_size=dim).map(tuple)


class TestPhi(unittest.TestCase):
    """phi_at on the fixtures"""

    def test_square_outside(self):
        """(2, 1/2) lies in the cells of v(0,1), v(0,0) and the left edge"""
        report = phi_at(fixture("unit_square"), vector([2, "1/2"]))
        self.assertEqual(report.members, [2, 3, 5])
        self.assertEqual(report.phi, 1)

    def test_square_boundary_point(self):
        """(2, 0) has the same memberships"""
        report = phi_at(fixture("unit_square"), vector([2, 0]))
        self.assertEqual(report.members, [2, 3, 5])
        self.assertEqual(report.phi, 1)

    def test_quadrant_and_spaces(self):
        """Line-free unbounded gives 0, the line -1, the plane 1"""
        self.assertEqual(phi_at(fixture("quadrant"), vector([1, 1])).phi, 0)
        self.assertEqual(phi_at(fixture("line"), vector([3, "-1/2"])).phi, -1)
        self.assertEqual(phi_at(fixture("plane"), vector([0, 0])).phi, 1)

    def test_point_dimension(self):
        """Points of the wrong length are rejected"""
        with self.assertRaises(DimensionMismatch):
            phi_at(fixture("unit_square"), vector([1]))

    def test_cell_predicates(self):
        """Closed and open cell membership of v(0,0)"""
        P = fixture("unit_square")
        self.assertTrue(cell_contains(P, P.lattice[3], vector([2, 0])))
        self.assertFalse(open_cell_contains(P, P.lattice[3], vector([2, 0])))
        self.assertTrue(open_cell_contains(P, P.lattice[3], vector([2, "1/2"])))

    @given(st.sampled_from(["unit_square", "cube"]), st.data())
    @settings(max_examples=40, deadline=None)
    def test_open_cell_is_interior(self, name, data):
        """x is in the open cell iff the closed cell holds x +- e_k / 100 for every k"""
        P = fixture(name)
        x = data.draw(small_points(P.dim))
        step = Q(1, 100)
        for F in P.lattice:
            nudged = [tuple(v + (sign * step if k == j else 0) for j, v in enumerate(x))
                      for k in range(P.dim) for sign in (1, -1)]
            with self.subTest(face=F.id):
                self.assertEqual(open_cell_contains(P, F, x), all(cell_contains(P, F, y) for y in nudged))

    @given(small_points(2))
    @settings(max_examples=40, deadline=None)
    def test_square_is_constant(self, x):
        """phi of the square is 1 everywhere"""
        self.assertEqual(phi_at(fixture("unit_square"), x).phi, 1)

    @given(small_points(2))
    @settings(max_examples=40, deadline=None)
    def test_half_plane_is_zero(self, x):
        """phi of a half-plane is 0 everywhere"""
        self.assertEqual(phi_at(fixture("half_plane"), x).phi, 0)

    @given(small_points(2))
    @settings(max_examples=30, deadline=None)
    def test_lineality_reduction(self, x):
        """phi_P(x) = -phi_P0(projection of x) for the line"""
        self.assertTrue(lineality_reduction_check(fixture("line"), x))


class TestEuler(unittest.TestCase):
    """euler_sum and is_cone"""

    def test_values(self):
        """Pointed cone 0, half-plane 0, line -1, plane 1"""
        self.assertEqual(euler_sum(fixture("quadrant")), 0)
        self.assertEqual(euler_sum(fixture("half_plane")), 0)
        self.assertEqual(euler_sum(fixture("line")), -1)
        self.assertEqual(euler_sum(fixture("plane")), 1)

    def test_not_a_cone(self):
        """The square is rejected"""
        self.assertFalse(is_cone(fixture("unit_square")))
        with self.assertRaises(NotACone):
            euler_sum(fixture("unit_square"))

    def test_apex(self):
        """phi at the apex equals the Euler sum"""
        for name in ("quadrant", "half_plane", "line", "plane"):
            with self.subTest(name=name):
                self.assertTrue(apex_check(fixture(name)))

    def test_coordinate_subspaces(self):
        """{x : x_j = 0 for j >= k} in R^4 sums to (-1)^k"""
        for k in range(5):
            rows, rhs = [], []
            for j in range(k, 4):
                rows += [unit(4, j), neg(unit(4, j))]
                rhs += [0, 0]
            P = make_polyhedron(RMatrix(tuple(rows), 4), vector(rhs))
            with self.subTest(k=k):
                self.assertEqual(euler_sum(P), (-1) ** k)

    @unittest.skipUnless(FULL_ACCEPTANCE, "set NORMALFAN_FULL_ACCEPTANCE=true for full-size runs")
    def test_acceptance_random_cones(self):
        """One hundred random cones in dimensions 1 to 4 that are not subspaces sum to 0"""
        for seed in range(100):
            dim = seed % 4 + 1
            P = gen_instance(GenSpec(seed=seed, dim=dim, n_constraints=dim + 1, kind=InstanceKind.CONE))
            with self.subTest(seed=seed, dim=dim):
                self.assertEqual(euler_sum(P), 0)


class TestCovering(unittest.TestCase):
    """covering_witness, project_onto, psi and degree_at"""

    def test_edge_region(self):
        """(2, 1/2) = (1, 1/2) + (1, 0) over the right edge"""
        witness = covering_witness(fixture("unit_square"), vector([2, "1/2"]))
        self.assertEqual(witness.face.id, 4)
        self.assertEqual(witness.x, vector([1, "1/2"]))
        self.assertEqual(witness.u, vector([1, 0]))

    def test_vertex_region(self):
        """(2, 2) = (1, 1) + (1, 1) over v(1,1)"""
        witness = covering_witness(fixture("unit_square"), vector([2, 2]))
        self.assertEqual(witness.face.id, 0)
        self.assertEqual(witness.x, vector([1, 1]))
        self.assertEqual(witness.u, vector([1, 1]))

    def test_psi(self):
        """Reflection across the covering face"""
        P = fixture("unit_square")
        self.assertEqual(psi(P, vector([2, "1/2"])), vector([0, "1/2"]))
        self.assertEqual(psi(P, vector([2, 2])), vector([0, 0]))
        self.assertEqual(psi(P, vector(["1/2", "1/2"])), vector(["1/2", "1/2"]))

    @given(small_points(2))
    @settings(max_examples=40, deadline=None)
    def test_projection_is_nearest(self, y):
        """The projection lies in P and beats every vertex of the square"""
        P = fixture("unit_square")
        x = project_onto(P, y)
        self.assertTrue(P.contains(x))
        for F in P.lattice:
            self.assertLessEqual(squared_distance(x, y), squared_distance(F.witness, y))

    def test_cover_violation_reports_matches(self):
        """A broken lattice shows up as CoverViolation"""
        P = fixture("unit_square")
        with patch.object(identity, "CellSystem") as cells:
            cells.return_value.solve.return_value = None
            with self.assertRaises(CoverViolation) as ctx:
                covering_witness(P, vector([2, 2]))
        self.assertEqual(ctx.exception.matches, [])

    def test_degree(self):
        """Degree 1 off the cell boundaries, None on them, 0 for the quadrant"""
        P = fixture("unit_square")
        self.assertEqual(degree_at(P, vector([2, "1/2"])), 1)
        self.assertIsNone(degree_at(P, vector([2, 0])))
        self.assertEqual(degree_at(fixture("quadrant"), vector([1, 1])), 0)

    @unittest.skipUnless(FULL_ACCEPTANCE, "set NORMALFAN_FULL_ACCEPTANCE=true for full-size runs")
    def test_regular_points_and_reflection(self):
        """Degree on 500 regular points, psi fixes 500 points of P, projections beat sampled rivals"""
        rng = random.Random(0)
        regular = fixed = 0
        seed = 0
        while regular < 500 or fixed < 500:
            kind = (InstanceKind.POLYTOPE, InstanceKind.LINE_FREE_UNBOUNDED)[seed % 2]
            P = gen_instance(GenSpec(seed=seed, dim=seed % 3 + 1, n_constraints=3, kind=kind))
            witnesses = [F.witness for F in P.lattice]
            for _ in range(25):
                z = tuple(Q(rng.randint(-40, 40), rng.randint(1, 7)) for _ in range(P.dim))
                degree = degree_at(P, z)
                if degree is not None:
                    regular += 1
                    self.assertEqual(degree, (-1) ** P.dim * phi_at(P, z).phi)
                weights = [rng.randint(0, 3) for _ in witnesses]
                weights[rng.randrange(len(weights))] += 1
                total = sum(weights)
                inside = tuple(sum(Q(w, total) * p[k] for w, p in zip(weights, witnesses))
                               for k in range(P.dim))
                self.assertEqual(psi(P, inside), inside)
                fixed += 1
                nearest = project_onto(P, z)
                for rival in witnesses + [inside]:
                    self.assertLessEqual(squared_distance(nearest, z), squared_distance(rival, z))
            seed += 1


class TestStrata(unittest.TestCase):
    """Strata, face intervals and the regrouped sum"""

    def test_strata_of_square(self):
        """(2, 0) is on one stratum, (1/2, 0) on three"""
        P = fixture("unit_square")
        self.assertEqual(strata_at(P, vector([2, 0])), [Stratum(3, 5)])
        self.assertEqual(strata_at(P, vector(["1/2", 0])), [Stratum(1, 4), Stratum(3, 5), Stratum(7, 8)])

    def test_stratum_decomposition(self):
        """(2, 0) = v(0,0) - (-2, 0)"""
        P = fixture("unit_square")
        g, v = stratum_decomposition(P, P.lattice[3], P.lattice[5], vector([2, 0]))
        self.assertEqual(g, vector([0, 0]))
        self.assertEqual(v, vector([-2, 0]))
        self.assertIsNone(stratum_decomposition(P, P.lattice[3], P.lattice[8], vector([2, 0])))
        self.assertFalse(in_stratum(P, P.lattice[0], P.lattice[4], vector([2, 0])))

    def test_interval_sum_vanishes(self):
        """The interval [v(0,0), left edge] sums to 0 at (2, 0)"""
        P = fixture("unit_square")
        self.assertEqual(interval_phi(P, P.lattice[3], P.lattice[5], vector([2, 0])), 0)

    def test_disjoint_and_split(self):
        """Intervals of distinct strata share no face and regroup phi"""
        P = fixture("unit_square")
        for x in (vector([2, 0]), vector(["1/2", 0]), vector([1, 1])):
            with self.subTest(x=x):
                self.assertTrue(check_interval_disjoint(P, x))
                self.assertTrue(split_identity_check(P, x, vector([x[0], x[1] + Q(1, 100)])))


class TestConstantWitness(unittest.TestCase):
    """constant_witness in both cases"""

    def test_bounded(self):
        """A polytope witness sits only in the cell of a vertex"""
        witness = constant_witness(fixture("unit_square"))
        self.assertEqual(witness.case, "bounded")
        self.assertEqual(witness.expected, 1)
        self.assertEqual(len(witness.members), 1)
        self.assertEqual(phi_at(fixture("unit_square"), witness.point).phi, 1)

    def test_line_uses_sign_of_minimal_face(self):
        """The line's only face has dimension 1"""
        witness = constant_witness(fixture("line"))
        self.assertEqual(witness.expected, -1)

    def test_unbounded(self):
        """A line-free unbounded witness lies in no cell"""
        for name in ("quadrant", "half_plane"):
            with self.subTest(name=name):
                witness = constant_witness(fixture(name))
                self.assertEqual(witness.case, "unbounded")
                self.assertEqual(witness.expected, 0)
                self.assertEqual(witness.members, ())


class TestVerify(unittest.TestCase):
    """verify_theorem and its sampling"""

    def test_samples_cover_every_kind(self):
        """Sanity, random, boundary and perturbed samples are all drawn"""
        samples = build_samples(fixture("unit_square"), SampleStrategy(random_samples=5, seed=3))
        kinds = {kind for kind, _ in samples}
        self.assertEqual(kinds, {"sanity", "random", "boundary", "perturbed"})
        again = build_samples(fixture("unit_square"), SampleStrategy(random_samples=5, seed=3))
        self.assertEqual(samples, again)

    def test_fixtures_verify(self):
        """Every fixture meets its predicted constant"""
        for name in ("unit_square", "quadrant", "half_plane", "line", "plane"):
            with self.subTest(name=name):
                report = verify_theorem(fixture(name), SampleStrategy(random_samples=8, seed=1))
                self.assertTrue(report.ok)
                self.assertEqual(report.predicted, decompose(fixture(name)).predicted_phi)

    def test_threaded_evaluation_matches(self):
        """Workers do not change the report"""
        P = fixture("unit_square")
        serial = verify_theorem(P, SampleStrategy(random_samples=6, seed=2, workers=1))
        threaded = verify_theorem(P, SampleStrategy(random_samples=6, seed=2, workers=4))
        self.assertEqual(serial.samples, threaded.samples)
        self.assertEqual(serial.breakdown, threaded.breakdown)

    def test_wrong_prediction_raises(self):
        """A falsified constant raises in strict mode and is reported otherwise"""
        P = fixture("unit_square")
        real = decompose(P)
        broken = dataclasses.replace(real, predicted_phi=5)
        with patch.object(identity, "decompose", return_value=broken):
            with self.assertRaises(TheoremViolation) as ctx:
                verify_theorem(P, SampleStrategy(random_samples=2, seed=0))
            self.assertEqual(ctx.exception.predicted, 5)
            report = verify_theorem(P, SampleStrategy(random_samples=2, seed=0), strict=False)
        self.assertFalse(report.ok)
        self.assertEqual(len(report.violations), report.samples)

    def test_debug_info(self):
        """With debugging on the report carries stage and sample statistics"""
        with patch.object(identity, "DEBUG_ENABLED", True):
            report = verify_theorem(fixture("unit_square"), SampleStrategy(random_samples=3, seed=0))
        self.assertEqual(report.debug["stats"]["lattice"]["faces"], 9)
        self.assertEqual(report.debug["summary"]["total_samples"], report.samples)
        self.assertEqual(report.debug["stats"]["phi"]["histogram"], {"1": report.samples})
        self.assertEqual([s["name"] for s in report.debug["stages"]],
                         ["lattice", "decompose", "samples", "evaluate"])

    def test_generated_instances(self):
        """Small generated instances of each class verify"""
        specs = [
            GenSpec(seed=1, dim=2, n_constraints=3, kind=InstanceKind.POLYTOPE),
            GenSpec(seed=2, dim=2, n_constraints=3, kind=InstanceKind.LINE_FREE_UNBOUNDED),
            GenSpec(seed=3, dim=2, n_constraints=2, kind=InstanceKind.WITH_LINEALITY, lineality=1),
        ]
        for spec in specs:
            with self.subTest(spec=spec.name):
                report = verify_theorem(gen_instance(spec), SampleStrategy(random_samples=5, seed=spec.seed))
                self.assertTrue(report.ok)

    @unittest.skipUnless(FULL_ACCEPTANCE, "set NORMALFAN_FULL_ACCEPTANCE=true for full-size runs")
    def test_acceptance_polytopes(self):
        """One hundred polytopes in dimensions 1 to 4 with at most 12 rows are 1 everywhere sampled"""
        for seed in range(100):
            P = gen_instance(GenSpec(seed=seed, dim=seed % 4 + 1, n_constraints=4))
            self.assertLessEqual(P.nrows, 12)
            report = verify_theorem(P, SampleStrategy(random_samples=50, seed=seed))
            self.assertTrue(report.ok)
            self.assertEqual(report.predicted, 1)
            self.assertGreater(report.breakdown["boundary"], 0)

    @unittest.skipUnless(FULL_ACCEPTANCE, "set NORMALFAN_FULL_ACCEPTANCE=true for full-size runs")
    def test_acceptance_line_free_unbounded(self):
        """One hundred line-free unbounded instances are 0 everywhere sampled"""
        for seed in range(100):
            P = gen_instance(GenSpec(seed=seed, dim=seed % 4 + 1, n_constraints=4,
                                     kind=InstanceKind.LINE_FREE_UNBOUNDED))
            self.assertLessEqual(P.nrows, 12)
            report = verify_theorem(P, SampleStrategy(random_samples=50, seed=seed))
            self.assertTrue(report.ok)
            self.assertEqual(report.predicted, 0)

    @unittest.skipUnless(FULL_ACCEPTANCE, "set NORMALFAN_FULL_ACCEPTANCE=true for full-size runs")
    def test_acceptance_lineality(self):
        """Lineality 1 and 2 over bounded and unbounded bases meet (-1)^k or 0"""
        for lineality in (1, 2):
            for base_kind in InstanceKind.LINEALITY_BASES:
                for seed in range(10):
                    dim = lineality + 1 + seed % 2
                    spec = GenSpec(seed=seed, dim=dim, n_constraints=3, kind=InstanceKind.WITH_LINEALITY,
                                   lineality=lineality, base_kind=base_kind)
                    with self.subTest(spec=spec.name, base=base_kind):
                        report = verify_theorem(gen_instance(spec), SampleStrategy(random_samples=20, seed=seed))
                        self.assertTrue(report.ok)
                        expected = (-1) ** lineality if base_kind == InstanceKind.POLYTOPE else 0
                        self.assertEqual(report.predicted, expected)


if __name__ == '__main__':
    unittest.main()

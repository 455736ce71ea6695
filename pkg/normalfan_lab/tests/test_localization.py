# -*- coding: utf-8 -*-
"""
Tests for stratum localization: local cones, safe radii and the local
equivalence of cell memberships.
"""

import random
import tempfile
import unittest
from fractions import Fraction as Q

import sys
from pathlib import Path

# Add parent directory to path
ROOT_DIR = Path(__file__).resolve().parent.parent
if str(ROOT_DIR) not in sys.path:
    sys.path.insert(0, str(ROOT_DIR))

from hypothesis import given, settings, strategies as st

from data_pipeline.corpus_loader import default_specs, load_corpus, write_corpus
from harness.generator import GenSpec, InstanceKind, boundary_samples, gen_instance
from polyhedral_engine.config import FULL_ACCEPTANCE, LEMMA2_SAMPLES_PER_STRATUM
from polyhedral_engine.errors import InputError, NotComparable, StratumMismatch
from polyhedral_engine.exactmath import norm_sq, vector
from polyhedral_engine.localization import (
    check_strata, lemma2_check, localize, safe_radius, small_displacements,
)
from polyhedral_engine.serialization import load_polyhedron

DATA_DIR = ROOT_DIR / "data" / "instances"


def fixture(name: str):
    return load_polyhedron(DATA_DIR / f"{name}.json")


class TestLocalize(unittest.TestCase):
    """localize"""

    def test_vertex_to_edge(self):
        """(v(0,0), bottom edge): one separating row, L3 along the edge"""
        P = fixture("unit_square")
        local = localize(P, P.lattice[3], P.lattice[7])
        self.assertEqual(local.J_H, (1,))
        self.assertEqual(local.L3_basis.vectors, (vector([1, 0]),))
        self.assertEqual(local.chart.dim, 1)
        self.assertEqual([F_id for F_id, _, _ in local.face_map], [3, 7])
        self.assertEqual([chart_face.dim for _, _, chart_face in local.face_map], [0, 1])

    def test_apex_of_quadrant(self):
        """At the apex the local cone is the quadrant itself"""
        P = fixture("quadrant")
        local = localize(P, P.lattice[0], P.lattice[3])
        self.assertEqual(local.J_H, (0, 1))
        self.assertEqual(local.L3_basis.dim, 2)
        self.assertEqual([chart_face.dim for _, _, chart_face in local.face_map], [0, 1, 1, 2])
        self.assertEqual(local.local_face(3).dim, 2)

    def test_local_face_outside_interval(self):
        """Faces outside [G, H] have no local counterpart"""
        P = fixture("unit_square")
        local = localize(P, P.lattice[3], P.lattice[7])
        with self.assertRaises(NotComparable):
            local.local_face(0)

    def test_requires_proper_pair(self):
        """Incomparable or equal faces are rejected"""
        P = fixture("unit_square")
        with self.assertRaises(NotComparable):
            localize(P, P.lattice[4], P.lattice[5])
        with self.assertRaises(NotComparable):
            localize(P, P.lattice[3], P.lattice[3])


class TestSafeRadius(unittest.TestCase):
    """safe_radius"""

    def test_square_stratum(self):
        """(2, 0) on (v(0,0), left edge): nearest slack row is at distance 1"""
        P = fixture("unit_square")
        self.assertEqual(safe_radius(P, P.lattice[3], P.lattice[5], vector([2, 0])), Q(1, 2))

    def test_off_stratum(self):
        """A point off the stratum is rejected"""
        P = fixture("unit_square")
        with self.assertRaises(StratumMismatch):
            safe_radius(P, P.lattice[3], P.lattice[8], vector([2, 0]))


class TestLocalEquivalence(unittest.TestCase):
    """lemma2_check, small_displacements and check_strata"""

    def test_displacements_along_the_edge(self):
        """Moving up or down from (2, 0) matches the local cone"""
        P = fixture("unit_square")
        G, H = P.lattice[3], P.lattice[5]
        for w in (vector([0, "1/4"]), vector([0, "-1/4"]), vector([0, 0])):
            with self.subTest(w=w):
                self.assertTrue(lemma2_check(P, G, H, vector([2, 0]), w))

    def test_rejected_displacements(self):
        """w outside L3, too long, or an eps above the safe radius"""
        P = fixture("unit_square")
        G, H = P.lattice[3], P.lattice[5]
        x = vector([2, 0])
        with self.assertRaises(InputError):
            lemma2_check(P, G, H, x, vector(["1/4", 0]))
        with self.assertRaises(InputError):
            lemma2_check(P, G, H, x, vector([0, 1]))
        with self.assertRaises(InputError):
            lemma2_check(P, G, H, x, vector([0, "1/4"]), eps=Q(1))
        with self.assertRaises(StratumMismatch):
            lemma2_check(P, G, P.lattice[8], x, vector([0, 0]))

    def test_small_displacements(self):
        """Samples stay in L3 and inside the radius, starting with 0"""
        P = fixture("quadrant")
        local = localize(P, P.lattice[0], P.lattice[3])
        samples = small_displacements(local, Q(1, 3), 6, random.Random(4))
        self.assertEqual(len(samples), 6)
        self.assertEqual(samples[0], vector([0, 0]))
        for w in samples:
            self.assertTrue(local.L3_basis.contains(w))
            self.assertLessEqual(norm_sq(w), Q(1, 9))

    def test_check_strata_on_square(self):
        """Every check passes at a point on three strata"""
        P = fixture("unit_square")
        results = check_strata(P, vector(["1/2", 0]), random.Random(0), samples_per_stratum=4)
        self.assertEqual(results, {"disjoint": True, "split": True, "lemma2": True})

    def test_check_strata_on_cube(self):
        """A point beyond a bottom edge of the cube, in the plane y = 0"""
        P = fixture("cube")
        results = check_strata(P, vector(["1/2", 0, 2]), random.Random(1), samples_per_stratum=3)
        self.assertTrue(all(results.values()))

    @given(st.integers(0, 10 ** 6))
    @settings(max_examples=4, deadline=None)
    def test_generated_boundary_points(self, seed):
        """Boundary samples of random 2-dimensional polytopes pass every check"""
        P = gen_instance(GenSpec(seed=seed, dim=2, n_constraints=2))
        rng = random.Random(seed)
        for x in boundary_samples(P, 1, seed)[:6]:
            self.assertTrue(all(check_strata(P, x, rng, samples_per_stratum=2).values()))

    @unittest.skipUnless(FULL_ACCEPTANCE, "set NORMALFAN_FULL_ACCEPTANCE=true for full-size runs")
    def test_every_stratum_of_a_corpus(self):
        """Every boundary sample of a small corpus passes with ten displacements per stratum"""
        kinds = [InstanceKind.POLYTOPE, InstanceKind.LINE_FREE_UNBOUNDED, InstanceKind.WITH_LINEALITY]
        with tempfile.TemporaryDirectory() as tmp:
            write_corpus(Path(tmp), default_specs(kinds, count=4, dim=2, n_constraints=3))
            write_corpus(Path(tmp), default_specs(kinds, count=2, dim=3, n_constraints=2, seed_start=50))
            entries = load_corpus(Path(tmp))
        for path, spec, P in entries:
            rng = random.Random(spec.seed)
            for x in boundary_samples(P, 1, spec.seed):
                with self.subTest(instance=path.name, x=x):
                    results = check_strata(P, x, rng, samples_per_stratum=LEMMA2_SAMPLES_PER_STRATUM)
                    self.assertEqual(results, {"disjoint": True, "split": True, "lemma2": True})


if __name__ == '__main__':
    unittest.main()

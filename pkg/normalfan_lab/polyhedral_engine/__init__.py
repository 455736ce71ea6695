# -*- coding: utf-8 -*-
"""
Exact polyhedral engine: face lattices, normal cones and the signed cell sum.
"""

from .polyhedron import HPolyhedron, make_polyhedron, enumerate_faces, normal_cone, decompose

__all__ = ['HPolyhedron', 'make_polyhedron', 'enumerate_faces', 'normal_cone', 'decompose']

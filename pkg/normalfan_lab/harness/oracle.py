# -*- coding: utf-8 -*-
"""
Brute-force oracle for the cell memberships.

Each cell F - N(P,F) is turned into an explicit H-representation by
Fourier-Motzkin elimination of the cone coefficients; membership is then
a direct row check, independent of the LP-based predicates.  Desk scale
only (d <= 3 keeps the elimination small).
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence, Tuple

from polyhedral_engine.errors import DimensionMismatch
from polyhedral_engine.lp import LinearSystem
from polyhedral_engine.polyhedron import HPolyhedron, cell_system

logger = logging.getLogger(__name__)


@lru_cache(maxsize=32)
def _hreps(P: HPolyhedron) -> Tuple[Tuple[int, LinearSystem], ...]:
    hreps = []
    for F in P.lattice:
        explicit = cell_system(P, F).explicit()
        logger.debug(f"Cell of face {F.id}: {len(explicit.ineqs)} rows, {len(explicit.eqs)} equalities")
        hreps.append((F.id, explicit))
    return tuple(hreps)


def oracle_cell_hreps(P: HPolyhedron) -> List[Tuple[int, LinearSystem]]:
    """(face id, explicit H-representation of F - N(P,F)) for every face."""
    return list(_hreps(P))


def oracle_phi(P: HPolyhedron, x: Sequence[Fraction]) -> int:
    if len(x) != P.dim:
        raise DimensionMismatch(f"Point of length {len(x)} for a polyhedron in R^{P.dim}")
    lattice = P.lattice
    return sum((-1) ** lattice[face_id].dim for face_id, hrep in _hreps(P) if hrep.contains(x))

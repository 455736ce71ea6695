# -*- coding: utf-8 -*-
"""
Localization of a stratum (G, H).

Near a point of relint G - relint N(P,H) only the faces between G and H
matter, and only the component of a displacement in
L3 = L(H) cap L(G)^perp.  The cone H* = {z in L3 : <u_j, z> <= 0 for rows j
tight on G but not on H} and its faces F* reproduce the local cell
memberships.  H* is realized twice: as an ambient polyhedron in R^d (used
for every metric predicate) and in integer coordinates of an L3 basis (used
for face dimensions and the face map only).
"""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .config import LEMMA2_SAMPLES_PER_STRATUM
from .errors import InputError, LocalizationError, NotComparable, StratumMismatch
from .exactmath import (
    ONE, RMatrix, RVector, SubspaceBasis, combination, dot, kernel_basis, norm1, norm_sq,
    scale, zeros,
)
from .identity import (
    cell_contains, check_interval_disjoint, in_stratum, interval_phi, phi_at,
    split_identity_check, strata_at, stratum_decomposition,
)
from .polyhedron import Face, HPolyhedron, cell_system, expand_equalities, face_interval, make_polyhedron

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalCone:
    G: int
    H: int
    base_point: RVector
    J_H: Tuple[int, ...]
    L3_basis: SubspaceBasis
    Hstar: HPolyhedron
    chart: HPolyhedron
    face_map: Tuple[Tuple[int, Face, Face], ...]

    def local_face(self, face_id: int) -> Face:
        """F* of the ambient H* for the interval face with this id."""
        for F_id, ambient, _ in self.face_map:
            if F_id == face_id:
                return ambient
        raise NotComparable(f"Face {face_id} is not in the interval of stratum ({self.G}, {self.H})")


def _lookup(P: HPolyhedron, active: frozenset, what: str) -> Face:
    face = P.lattice.by_active.get(active)
    if face is None:
        raise LocalizationError(f"No face of {what} has active set {sorted(active)}")
    return face


def localize(P: HPolyhedron, G: Face, H: Face) -> LocalCone:
    """
    Raises:
        NotComparable: unless G is a proper subface of H
        LocalizationError: if some F* misses its face of H* or its dimension
    """
    if G.id == H.id or not G.is_subface_of(H):
        raise NotComparable(f"Face {G.id} is not a proper subface of face {H.id}")
    d = P.dim
    J_H = tuple(j for j in G.active if j not in H.active_set)
    L_G = kernel_basis(P.A.select(G.active))
    H_normals = [P.A.rows[i] for i in H.active]
    L3 = kernel_basis(RMatrix(tuple(H_normals) + L_G.vectors, d))

    complement = RMatrix(tuple(H_normals) + L_G.vectors, d)
    cone_rows = RMatrix(tuple(P.A.rows[j] for j in J_H), d)
    A_star, b_star = expand_equalities(cone_rows, zeros(len(J_H)), complement, zeros(complement.nrows))
    Hstar = make_polyhedron(A_star, b_star)

    chart_rows = RMatrix(tuple(tuple(dot(P.A.rows[j], v) for v in L3.vectors) for j in J_H), L3.dim)
    chart = make_polyhedron(chart_rows, zeros(len(J_H)))

    equality_rows = frozenset(range(len(J_H), A_star.nrows))
    face_map = []
    for F in face_interval(P.lattice, G, H):
        positions = frozenset(k for k, j in enumerate(J_H) if j in F.active_set)
        chart_face = _lookup(chart, positions, "the local chart")
        ambient_face = _lookup(Hstar, positions | equality_rows, "H*")
        if chart_face.dim != F.dim - G.dim or ambient_face.dim != chart_face.dim:
            raise LocalizationError(
                f"Face {F.id}: local dimension {chart_face.dim}, expected {F.dim - G.dim}"
            )
        face_map.append((F.id, ambient_face, chart_face))
    logger.debug(f"Localized ({G.id}, {H.id}): |J_H| = {len(J_H)}, dim L3 = {L3.dim}")
    return LocalCone(G.id, H.id, G.witness, J_H, L3, Hstar, chart, tuple(face_map))


def safe_radius(P: HPolyhedron, G: Face, H: Face, x: Sequence[Fraction]) -> Fraction:
    """
    A radius r such that every w with |w|_2 <= r keeps x + w on the same side
    of every constraint that is slack at x.

    Half the minimum, over the rows of P slack at the point g of the
    decomposition x = g - v and over the rows of each interval cell's
    H-representation slack at x, of slack / |normal|_1.

    Raises:
        StratumMismatch: if x is not on the stratum (G, H)
    """
    split = stratum_decomposition(P, G, H, x)
    if split is None:
        raise StratumMismatch(f"Point is not in relint G{G.id} - relint N(P, H{H.id})")
    g, _ = split
    bounds: List[Fraction] = []
    for j, (a, beta) in enumerate(P.rows):
        if j not in G.active_set and norm1(a):
            bounds.append((beta - dot(a, g)) / norm1(a))
    for F in face_interval(P.lattice, G, H):
        explicit = cell_system(P, F).explicit()
        for a, beta in explicit.ineqs:
            slack = beta - dot(a, x)
            if slack > 0 and norm1(a):
                bounds.append(slack / norm1(a))
    if not bounds:
        return ONE
    return min(bounds) / 2


def lemma2_check(P: HPolyhedron, G: Face, H: Face, x: Sequence[Fraction],
                 w: Sequence[Fraction], eps: Optional[Fraction] = None,
                 local: Optional[LocalCone] = None) -> bool:
    """
    For every F between G and H: x + w in F - N(P,F) iff w in F* - N(H*,F*),
    and the interval sum at x + w equals (-1)^dim G * phi_H*(w).

    Raises:
        StratumMismatch: if (G, H) is not a stratum of x
        InputError: if w leaves L3 or exceeds eps, or eps exceeds the safe radius
    """
    if not in_stratum(P, G, H, x):
        raise StratumMismatch(f"({G.id}, {H.id}) is not a stratum of the point")
    local = local or localize(P, G, H)
    if not local.L3_basis.contains(w):
        raise InputError("Displacement must lie in L(H) cap L(G)^perp")
    radius = safe_radius(P, G, H, x)
    eps = radius if eps is None else eps
    if eps > radius:
        raise InputError(f"eps {eps} exceeds the safe radius {radius}")
    if norm_sq(w) > eps * eps:
        raise InputError("Displacement longer than eps")
    moved = tuple(a + b for a, b in zip(x, w))
    for F_id, ambient_face, _ in local.face_map:
        F = P.lattice[F_id]
        if cell_contains(P, F, moved) != cell_contains(local.Hstar, ambient_face, w):
            logger.warning(f"Cell membership of face {F_id} differs from its localization")
            return False
    return interval_phi(P, G, H, moved) == (-1) ** G.dim * phi_at(local.Hstar, w).phi


def small_displacements(local: LocalCone, radius: Fraction, count: int,
                        rng: random.Random) -> List[RVector]:
    """Random w in L3 with |w|_2 <= radius, including w = 0."""
    d = local.Hstar.dim
    samples = [zeros(d)]
    if local.L3_basis.dim == 0:
        return samples
    while len(samples) < count:
        coefficients = [Fraction(rng.randint(-3, 3)) for _ in range(local.L3_basis.dim)]
        w = combination(coefficients, local.L3_basis.vectors, d)
        length = norm1(w)
        if not length:
            continue
        shrink = Fraction(rng.randint(1, 9), 10)
        samples.append(scale(shrink * radius / length, w))
    return samples


def check_strata(P: HPolyhedron, x: Sequence[Fraction], rng: random.Random,
                 samples_per_stratum: int = LEMMA2_SAMPLES_PER_STRATUM) -> Dict[str, bool]:
    """Interval disjointness, the regrouped sum and the local equivalence at x."""
    lattice = P.lattice
    results = {"disjoint": check_interval_disjoint(P, x), "split": True, "lemma2": True}
    for stratum in strata_at(P, x):
        G, H = lattice[stratum.G], lattice[stratum.H]
        local = localize(P, G, H)
        radius = safe_radius(P, G, H, x)
        for w in small_displacements(local, radius, samples_per_stratum, rng):
            moved = tuple(a + b for a, b in zip(x, w))
            if not split_identity_check(P, x, moved):
                results["split"] = False
            if not lemma2_check(P, G, H, x, w, radius, local):
                results["lemma2"] = False
    return results

# -*- coding: utf-8 -*-
"""
Polyhedral sets in H-form.

Face lattices keyed by canonical active sets, normal cones in V-form,
recession and lineality structure, and the decomposition P = P0 + U_P
that fixes the value of the signed cell sum.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import DimensionMismatch, EmptyPolyhedron, NotComparable
from .exactmath import (
    ONE, ZERO, RMatrix, RVector, SubspaceBasis, combination, dot, kernel_basis,
    neg, rank, row_reduce, unit, zeros,
)
from .lp import (
    IntegerSystem, LinearSystem, OPTIMAL, cone_membership_system, feasible, fm_eliminate,
    optimize, relint_closure, strict_feasible,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Face:
    """A nonempty face, identified by the rows tight on all of it."""
    id: int
    active: Tuple[int, ...]
    dim: int
    witness: RVector
    is_whole: bool = False

    @property
    def active_set(self) -> FrozenSet[int]:
        return frozenset(self.active)

    def is_subface_of(self, other: "Face") -> bool:
        """G <= F iff I_F is contained in I_G."""
        return other.active_set <= self.active_set


@dataclass(frozen=True)
class FaceLattice:
    """All nonempty faces sorted by (dim, active set); a face's id is its position."""
    faces: Tuple[Face, ...]

    def __iter__(self) -> Iterator[Face]:
        return iter(self.faces)

    def __len__(self) -> int:
        return len(self.faces)

    def __getitem__(self, face_id: int) -> Face:
        return self.faces[face_id]

    @cached_property
    def by_active(self) -> Dict[FrozenSet[int], Face]:
        return {F.active_set: F for F in self.faces}

    @property
    def whole(self) -> Face:
        return self.faces[-1]

    @property
    def minimal_faces(self) -> List[Face]:
        return [G for G in self.faces
                if not any(F.active_set > G.active_set for F in self.faces)]

    @property
    def order(self) -> List[Tuple[int, int]]:
        """Pairs (G, F) of face ids with G a subface of F."""
        return [(G.id, F.id) for G in self.faces for F in self.faces if G.is_subface_of(F)]

    def proper_pairs(self) -> List[Tuple[Face, Face]]:
        return [(G, H) for G in self.faces for H in self.faces
                if G.id != H.id and G.is_subface_of(H)]

    def f_vector(self) -> List[int]:
        if not self.faces:
            return []
        counts = [0] * (self.whole.dim + 1)
        for F in self.faces:
            counts[F.dim] += 1
        return counts


@dataclass(frozen=True, eq=False)
class HPolyhedron:
    """
    P = {x : A x <= b}, nonempty.  Build with `make_polyhedron`, which fills
    the implicit-equality set, a relative-interior point and the lineality basis.
    """
    dim: int
    A: RMatrix
    b: RVector
    implicit: FrozenSet[int] = frozenset()
    relint_point: RVector = ()
    lineality: Optional[SubspaceBasis] = None

    @property
    def nrows(self) -> int:
        return self.A.nrows

    @property
    def rows(self) -> List[Tuple[RVector, Fraction]]:
        return list(zip(self.A.rows, self.b))

    @cached_property
    def system(self) -> LinearSystem:
        return LinearSystem(self.dim, tuple(self.rows))

    @cached_property
    def aff_dim(self) -> int:
        return self.dim - rank(self.A.select(sorted(self.implicit)))

    @cached_property
    def lattice(self) -> "FaceLattice":
        return enumerate_faces(self)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return self.system.contains(x)


@dataclass(frozen=True)
class VCone:
    """pos(generators) + span(lineality)."""
    ambient_dim: int
    generators: Tuple[RVector, ...]
    lineality: SubspaceBasis

    @property
    def spanning_vectors(self) -> Tuple[RVector, ...]:
        return self.generators + self.lineality.vectors

    def negated(self) -> "VCone":
        return VCone(self.ambient_dim, tuple(neg(g) for g in self.generators), self.lineality)

    def point(self, coefficients: Sequence[Fraction]) -> RVector:
        """sum lambda_i g_i + sum mu_j w_j for coefficients (lambda, mu)."""
        return combination(coefficients, self.spanning_vectors, self.ambient_dim)


@dataclass(frozen=True)
class LinealityDecomposition:
    U_basis: SubspaceBasis
    P0: HPolyhedron
    p0_bounded: bool
    predicted_phi: int


def make_polyhedron(A: RMatrix, b: Sequence[Fraction]) -> HPolyhedron:
    """
    Validate {x : Ax <= b} and populate its caches.

    Raises:
        DimensionMismatch: if the row count of A differs from len(b)
        EmptyPolyhedron: if the system has no solution
    """
    if A.nrows != len(b):
        raise DimensionMismatch(f"{A.nrows} rows but {len(b)} right-hand sides")
    S = LinearSystem(A.ncols, tuple(zip(A.rows, tuple(b))))
    result = relint_closure(S)
    if result is None:
        outcome = feasible(S)
        raise EmptyPolyhedron(
            f"No x satisfies the {A.nrows} rows "
            f"(Farkas multipliers {[str(y) for y in outcome.certificate.ineq_multipliers]})"
        )
    implicit, point = result
    P = HPolyhedron(A.ncols, A, tuple(b), implicit, point, kernel_basis(A))
    logger.debug(f"Polyhedron in R^{P.dim}: {A.nrows} rows, dim {P.aff_dim}, "
                 f"{len(implicit)} implicit rows, lineality dim {P.lineality.dim}")
    return P


def expand_equalities(A: RMatrix, b: Sequence[Fraction], E: RMatrix,
                      e: Sequence[Fraction]) -> Tuple[RMatrix, RVector]:
    """Rewrite Ex = e as the inequality pairs Ex <= e, -Ex <= -e."""
    if E.ncols != A.ncols:
        raise DimensionMismatch(f"Equality rows in R^{E.ncols} for a system in R^{A.ncols}")
    rows = list(A.rows)
    rhs = list(b)
    for normal, value in zip(E.rows, e):
        rows += [normal, neg(normal)]
        rhs += [value, -value]
    return RMatrix(tuple(rows), A.ncols), tuple(rhs)


def face_system(P: HPolyhedron, active: Iterable[int]) -> LinearSystem:
    """P's rows with the listed rows also imposed as equalities."""
    return LinearSystem(P.dim, tuple(P.rows), tuple(P.rows[i] for i in sorted(active)))


def face_relint_contains(P: HPolyhedron, F: Face, x: Sequence[Fraction]) -> bool:
    """Rows of I_F tight and every other row strict."""
    active = F.active_set
    for i, (a, beta) in enumerate(P.rows):
        value = dot(a, x)
        if i in active:
            if value != beta:
                return False
        elif value >= beta:
            return False
    return True


def enumerate_faces(P: HPolyhedron) -> FaceLattice:
    """
    Breadth-first from P: each candidate I_F + {i} is closed under implied
    tightness by one relative-interior LP and deduplicated on the result.

    Candidates are skipped without an LP when
      - the same candidate set was already closed from another face,
      - row i misses an ancestor of F, so it misses F too,
      - an earlier candidate of F closed to a facet G of F with i in I_G,
        since the only faces of F containing G are G and F.
    """
    found: Dict[FrozenSet[int], RVector] = {P.implicit: P.relint_point}
    closures: Dict[FrozenSet[int], Optional[FrozenSet[int]]] = {}
    misses: Dict[FrozenSet[int], FrozenSet[int]] = {P.implicit: frozenset()}
    dims: Dict[FrozenSet[int], int] = {}

    def dim_of(active: FrozenSet[int]) -> int:
        if active not in dims:
            dims[active] = P.dim - rank(P.A.select(sorted(active)))
        return dims[active]

    queue = deque([P.implicit])
    lp_calls = 0
    skipped = 0
    while queue:
        active = queue.popleft()
        missed = set(misses.get(active, frozenset()))
        settled = set(active)
        children: List[FrozenSet[int]] = []
        for i in range(P.nrows):
            if i in active:
                continue
            if i in settled or i in missed:
                skipped += 1
                continue
            candidate = active | {i}
            if candidate in closures:
                closure = closures[candidate]
            else:
                lp_calls += 1
                result = relint_closure(face_system(P, candidate))
                closure = None if result is None else result[0]
                closures[candidate] = closure
                if closure is not None and closure not in found:
                    found[closure] = result[1]
            if closure is None:
                missed.add(i)
                continue
            if dim_of(closure) == dim_of(active) - 1:
                settled |= closure
            children.append(closure)
        for child in children:
            if child not in misses:
                queue.append(child)
                misses[child] = frozenset(missed)
            else:
                misses[child] = misses[child] | missed

    keys = sorted(found, key=lambda s: (dim_of(s), tuple(sorted(s))))
    faces = tuple(
        Face(i, tuple(sorted(s)), dim_of(s), found[s], s == P.implicit)
        for i, s in enumerate(keys)
    )
    logger.debug(f"Enumerated {len(faces)} faces with {lp_calls} LPs ({skipped} candidates skipped)")
    return FaceLattice(faces)


def normal_cone(P: HPolyhedron, F: Face) -> VCone:
    """Generators A_i for tight non-implicit rows; lineality spanned by the implicit normals."""
    generators = tuple(P.A.rows[i] for i in F.active if i not in P.implicit)
    lineality = SubspaceBasis.spanned_by([P.A.rows[i] for i in sorted(P.implicit)], P.dim)
    return VCone(P.dim, generators, lineality)


def lineality_basis(P: HPolyhedron) -> SubspaceBasis:
    return P.lineality if P.lineality is not None else kernel_basis(P.A)


def recession_cone(P: HPolyhedron) -> HPolyhedron:
    return make_polyhedron(P.A, zeros(P.nrows))


def is_bounded(P: HPolyhedron) -> bool:
    """Recession cone is {0}: every coordinate of {Ax <= 0, -1 <= x <= 1} has max and min 0."""
    d = P.dim
    box = []
    for k in range(d):
        box.append((unit(d, k), ONE))
        box.append((neg(unit(d, k)), ONE))
    S = LinearSystem(d, tuple((a, ZERO) for a in P.A.rows) + tuple(box))
    for k in range(d):
        for direction in (unit(d, k), neg(unit(d, k))):
            outcome = optimize(direction, S)
            if outcome.status != OPTIMAL or outcome.value != 0:
                return False
    return True


def decompose(P: HPolyhedron) -> LinealityDecomposition:
    """P0 = P cap U_P^perp, appended as equality pairs <u,x> <= 0, -<u,x> <= 0."""
    U = lineality_basis(P)
    A0, b0 = expand_equalities(P.A, P.b, U.as_matrix(), zeros(U.dim))
    P0 = make_polyhedron(A0, b0)
    bounded = is_bounded(P0)
    predicted = (-1) ** U.dim if bounded else 0
    logger.debug(f"Lineality dim {U.dim}, P0 bounded={bounded}, predicted {predicted}")
    return LinealityDecomposition(U, P0, bounded, predicted)


def face_interval(lattice: FaceLattice, G: Face, H: Face) -> List[Face]:
    """
    I(G,H) = faces F with G <= F <= H.

    Raises:
        NotComparable: if G is not a subface of H
    """
    if not G.is_subface_of(H):
        raise NotComparable(f"Face {G.id} is not contained in face {H.id}")
    return [F for F in lattice if H.active_set <= F.active_set <= G.active_set]


def polar_cone(C: VCone) -> HPolyhedron:
    """{y : <y,g> <= 0 for generators g, <y,w> = 0 for lineality vectors w}."""
    A = RMatrix(C.generators, C.ambient_dim)
    A, b = expand_equalities(A, zeros(A.nrows), C.lineality.as_matrix(), zeros(C.lineality.dim))
    return make_polyhedron(A, b)


def cone_contains(C: VCone, v: Sequence[Fraction]) -> bool:
    if len(v) != C.ambient_dim:
        raise DimensionMismatch(f"Vector of length {len(v)} for a cone in R^{C.ambient_dim}")
    return feasible(cone_membership_system(C.generators, C.lineality.vectors, v)).is_feasible


def cone_relint_contains(C: VCone, v: Sequence[Fraction]) -> bool:
    """relint(pos G + W) is the set of combinations with every generator coefficient positive."""
    if len(v) != C.ambient_dim:
        raise DimensionMismatch(f"Vector of length {len(v)} for a cone in R^{C.ambient_dim}")
    S = cone_membership_system(C.generators, C.lineality.vectors, v)
    return strict_feasible(S, range(len(C.generators))) is not None


def cone_is_subspace(C: VCone) -> bool:
    return all(cone_contains(C, neg(g)) for g in C.generators)


def normal_cone_face(P: HPolyhedron, u: Sequence[Fraction]) -> List[Face]:
    """Faces H with u in relint N(P,H)."""
    return [H for H in P.lattice if cone_relint_contains(normal_cone(P, H), u)]


def product(P: HPolyhedron, Q: HPolyhedron) -> HPolyhedron:
    """P x Q in R^(dP + dQ), rows of P first."""
    rows = [a + zeros(Q.dim) for a in P.A.rows] + [zeros(P.dim) + a for a in Q.A.rows]
    return make_polyhedron(RMatrix(tuple(rows), P.dim + Q.dim), P.b + Q.b)


@dataclass(frozen=True)
class PinnedCell:
    """
    A cell whose coefficients are fixed by its tight rows:
    (lambda, mu)(x) = offset - slope x, so membership is a system over x.
    Inequalities keep the CellSystem order; equalities are the
    consistency conditions of the tight rows.
    """
    offset: RVector
    slope: Tuple[RVector, ...]
    system: LinearSystem
    rows: IntegerSystem

    def coefficients(self, x: Sequence[Fraction]) -> RVector:
        return tuple(o - dot(s, x) for o, s in zip(self.offset, self.slope))


@dataclass(frozen=True)
class CellSystem:
    """
    Membership in (face rows) - (cone), parameterized by the query point.

    With f = x + sum lambda_i g_i + sum mu_j w_j substituted, the unknowns are
    (lambda, mu) only: rows of `face` tight, other rows of P as inequalities,
    lambda >= 0.  Inequalities are ordered as the non-tight rows of P
    (ascending), then the generator bounds.
    """
    polyhedron: HPolyhedron
    face: Face
    cone: VCone
    coefficients: Tuple[RVector, ...] = field(init=False)

    def __post_init__(self):
        vectors = self.cone.spanning_vectors
        coefficients = tuple(tuple(dot(a, v) for v in vectors) for a in self.polyhedron.A.rows)
        object.__setattr__(self, "coefficients", coefficients)

    @property
    def n_vars(self) -> int:
        return len(self.cone.spanning_vectors)

    @property
    def loose_rows(self) -> List[int]:
        active = self.face.active_set
        return [j for j in range(self.polyhedron.nrows) if j not in active]

    @property
    def face_strict_rows(self) -> range:
        return range(len(self.loose_rows))

    @property
    def generator_rows(self) -> range:
        n = len(self.loose_rows)
        return range(n, n + len(self.cone.generators))

    def at(self, x: Sequence[Fraction]) -> LinearSystem:
        P = self.polyhedron
        if len(x) != P.dim:
            raise DimensionMismatch(f"Point of length {len(x)} for a polyhedron in R^{P.dim}")
        k = self.n_vars
        residual = [beta - dot(a, x) for a, beta in P.rows]
        ineqs = [(self.coefficients[j], residual[j]) for j in self.loose_rows]
        ineqs += [(neg(unit(k, i)), ZERO) for i in range(len(self.cone.generators))]
        eqs = [(self.coefficients[j], residual[j]) for j in self.face.active]
        return LinearSystem(k, tuple(ineqs), tuple(eqs))

    def lifted(self) -> LinearSystem:
        """The same rows over (x, lambda, mu) with x as unknowns."""
        P = self.polyhedron
        k = self.n_vars
        ineqs = [(P.A.rows[j] + self.coefficients[j], P.b[j]) for j in self.loose_rows]
        ineqs += [(zeros(P.dim) + neg(unit(k, i)), ZERO) for i in range(len(self.cone.generators))]
        eqs = [(P.A.rows[j] + self.coefficients[j], P.b[j]) for j in self.face.active]
        return LinearSystem(P.dim + k, tuple(ineqs), tuple(eqs))

    def explicit(self) -> LinearSystem:
        """H-representation of the set over x alone, by Fourier-Motzkin on the coefficients."""
        P = self.polyhedron
        return fm_eliminate(self.lifted(), range(P.dim, P.dim + self.n_vars))

    @cached_property
    def pinned(self) -> Optional[PinnedCell]:
        """
        The x-space form of the cell when the tight rows determine (lambda, mu)
        uniquely, else None.  Row-reducing [C_F | I] gives the inverse map on
        its first n_vars rows and the consistency conditions on the rest.
        """
        P = self.polyhedron
        k = self.n_vars
        active = self.face.active
        m = len(active)
        augmented = RMatrix(tuple(self.coefficients[j] + unit(m, r) for r, j in enumerate(active)), k + m)
        reduced, pivots = row_reduce(augmented)
        if pivots[:k] != list(range(k)):
            return None
        tight_normals = [P.A.rows[j] for j in active]
        tight_rhs = [P.b[j] for j in active]

        def through(weights: Sequence[Fraction]) -> Tuple[RVector, Fraction]:
            # weights . (b_F - A_F x) = rhs - <normal, x>
            return combination(weights, tight_normals, P.dim), dot(weights, tight_rhs)

        slope: List[RVector] = []
        offset: List[Fraction] = []
        for row in reduced[:k]:
            normal, rhs = through(row[k:])
            slope.append(normal)
            offset.append(rhs)
        ineqs = []
        for j in self.loose_rows:
            c = self.coefficients[j]
            normal = list(P.A.rows[j])
            rhs = P.b[j]
            for w, s, o in zip(c, slope, offset):
                if w:
                    normal = [a - w * t for a, t in zip(normal, s)]
                    rhs -= w * o
            ineqs.append((tuple(normal), rhs))
        ineqs += [(s, o) for s, o in zip(slope[:len(self.cone.generators)], offset)]
        eqs = [through(row[k:]) for row in reduced[k:]]
        system = LinearSystem(P.dim, tuple(ineqs), tuple(eqs))
        return PinnedCell(tuple(offset), tuple(slope), system, IntegerSystem.from_system(system))

    def solve(self, x: Sequence[Fraction], strict_face: bool = False,
              strict_cone: bool = False) -> Optional[RVector]:
        """Coefficients (lambda, mu) placing x in the set, or None."""
        strict: List[int] = []
        if strict_face:
            strict += list(self.face_strict_rows)
        if strict_cone:
            strict += list(self.generator_rows)
        pinned = self.pinned
        if pinned is not None:
            if not pinned.rows.contains(x, frozenset(strict)):
                return None
            return pinned.coefficients(x)
        return strict_feasible(self.at(x), strict)

    def contains(self, x: Sequence[Fraction]) -> bool:
        pinned = self.pinned
        if pinned is not None:
            return pinned.rows.contains(x)
        return feasible(self.at(x)).is_feasible


def cell_system(P: HPolyhedron, F: Face) -> CellSystem:
    """The membership system of the cell F - N(P,F)."""
    return CellSystem(P, F, normal_cone(P, F))

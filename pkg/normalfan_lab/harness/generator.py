# -*- coding: utf-8 -*-
"""
Seeded random instances and stratum samples.

Instance classes follow the three values of the signed cell sum: polytopes,
unbounded line-free polyhedra, and instances with a prescribed lineality
space.  Pointed cones are generated for the Euler relation.  Every instance
is a pure function of its GenSpec.
"""

from __future__ import annotations

import logging
import random
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from polyhedral_engine.config import DEFAULT_COEFFICIENT_BOUND, RESAMPLE_LIMIT
from polyhedral_engine.errors import EmptyPolyhedron, InputError, ResampleLimitExceeded
from polyhedral_engine.exactmath import RMatrix, RVector, dot, scale, sub, unit, neg
from polyhedral_engine.polyhedron import HPolyhedron, make_polyhedron, normal_cone

logger = logging.getLogger(__name__)


class InstanceKind:
    POLYTOPE = "polytope"
    CONE = "cone"
    LINE_FREE_UNBOUNDED = "line_free_unbounded"
    WITH_LINEALITY = "with_lineality"

    ALL = (POLYTOPE, CONE, LINE_FREE_UNBOUNDED, WITH_LINEALITY)
    # base instances for with_lineality, both of full rank
    LINEALITY_BASES = (POLYTOPE, LINE_FREE_UNBOUNDED)


@dataclass(frozen=True)
class GenSpec:
    seed: int
    dim: int
    n_constraints: int
    kind: str = InstanceKind.POLYTOPE
    coefficient_bound: int = DEFAULT_COEFFICIENT_BOUND
    lineality: int = 0
    base_kind: str = InstanceKind.POLYTOPE

    def __post_init__(self):
        if self.kind not in InstanceKind.ALL:
            raise InputError(f"Unknown instance kind {self.kind!r}; expected one of {InstanceKind.ALL}")
        if self.dim < 1 or self.n_constraints < 1:
            raise InputError("Instances need dim >= 1 and n_constraints >= 1")
        if self.coefficient_bound < 1:
            raise InputError("coefficient_bound must be positive")
        if self.kind == InstanceKind.WITH_LINEALITY:
            if not 1 <= self.lineality < self.dim:
                raise InputError(f"with_lineality needs 1 <= k < dim, got k={self.lineality}, dim={self.dim}")
            if self.base_kind not in InstanceKind.LINEALITY_BASES:
                raise InputError(f"base_kind must be one of {InstanceKind.LINEALITY_BASES}")

    @property
    def name(self) -> str:
        """File stem used in corpus directories."""
        if self.kind == InstanceKind.WITH_LINEALITY:
            return f"{self.kind}{self.lineality}-{self.seed}"
        return f"{self.kind}-{self.seed}"

    def to_dict(self) -> Dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Dict) -> "GenSpec":
        if not isinstance(payload, dict):
            raise InputError(f"GenSpec payload must be a JSON object, got {type(payload).__name__}")
        known = {k: payload[k] for k in cls.__dataclass_fields__ if k in payload}
        try:
            return cls(**known)
        except TypeError as exc:
            raise InputError(f"Malformed GenSpec: {exc}") from exc


def _random_row(rng: random.Random, dim: int, bound: int) -> RVector:
    while True:
        row = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(dim))
        if any(row):
            return row


def _random_center(rng: random.Random, dim: int) -> RVector:
    q = rng.choice((1, 2, 3, 4))
    return tuple(Fraction(rng.randint(-q, q), q) for _ in range(dim))


def _shifted(rows: Sequence[RVector], center: RVector, rng: random.Random,
             bound: int) -> Tuple[RVector, ...]:
    """Right-hand sides placing `center` strictly inside every row."""
    return tuple(dot(a, center) + rng.randint(1, bound) for a in rows)


def _polytope(rng: random.Random, dim: int, m: int, bound: int) -> HPolyhedron:
    rows = [_random_row(rng, dim, bound) for _ in range(m)]
    center = _random_center(rng, dim)
    b = list(_shifted(rows, center, rng, bound))
    for k in range(dim):
        rows += [unit(dim, k), neg(unit(dim, k))]
        b += [Fraction(bound), Fraction(bound)]
    return make_polyhedron(RMatrix(tuple(rows), dim), tuple(b))


def _attempts():
    for attempt in range(RESAMPLE_LIMIT):
        yield attempt
    raise ResampleLimitExceeded(f"No acceptable instance after {RESAMPLE_LIMIT} attempts")


def _cone(rng: random.Random, dim: int, m: int, bound: int) -> HPolyhedron:
    for attempt in _attempts():
        rows = tuple(_random_row(rng, dim, bound) for _ in range(m))
        P = make_polyhedron(RMatrix(rows, dim), tuple(Fraction(0) for _ in rows))
        if len(P.implicit) < P.nrows:
            return P
        logger.debug(f"Cone attempt {attempt} is a linear subspace, resampling")


def _line_free_unbounded(rng: random.Random, dim: int, m: int, bound: int) -> HPolyhedron:
    m = max(m, dim)
    for attempt in _attempts():
        direction = _random_row(rng, dim, bound)
        rows: List[RVector] = []
        for _ in range(m):
            for _ in _attempts():
                row = _random_row(rng, dim, bound)
                if dot(row, direction) <= 0:
                    rows.append(row)
                    break
        center = _random_center(rng, dim)
        P = make_polyhedron(RMatrix(tuple(rows), dim), _shifted(rows, center, rng, bound))
        if P.lineality.dim == 0:
            return P
        logger.debug(f"Line-free attempt {attempt} has lineality {P.lineality.dim}, resampling")


def _signed_permutation(rng: random.Random, dim: int) -> Tuple[List[int], List[int]]:
    permutation = list(range(dim))
    rng.shuffle(permutation)
    signs = [rng.choice((1, -1)) for _ in range(dim)]
    return permutation, signs


def _with_lineality(rng: random.Random, spec: GenSpec) -> HPolyhedron:
    d0 = spec.dim - spec.lineality
    base = _BUILDERS[spec.base_kind](rng, d0, spec.n_constraints, spec.coefficient_bound)
    permutation, signs = _signed_permutation(rng, spec.dim)
    rows = []
    for a in base.A.rows:
        padded = a + tuple(Fraction(0) for _ in range(spec.lineality))
        mapped = [Fraction(0)] * spec.dim
        for i, value in enumerate(padded):
            mapped[permutation[i]] = signs[i] * value
        rows.append(tuple(mapped))
    return make_polyhedron(RMatrix(tuple(rows), spec.dim), base.b)


_BUILDERS = {
    InstanceKind.POLYTOPE: _polytope,
    InstanceKind.CONE: _cone,
    InstanceKind.LINE_FREE_UNBOUNDED: _line_free_unbounded,
}


def gen_instance(spec: GenSpec) -> HPolyhedron:
    """
    Raises:
        ResampleLimitExceeded: if no acceptable instance turns up
    """
    rng = random.Random(spec.seed)
    try:
        if spec.kind == InstanceKind.WITH_LINEALITY:
            P = _with_lineality(rng, spec)
        else:
            P = _BUILDERS[spec.kind](rng, spec.dim, spec.n_constraints, spec.coefficient_bound)
    except EmptyPolyhedron as exc:
        # rows are shifted around an interior center, so this is a generator bug
        raise ResampleLimitExceeded(f"Generated an empty instance for {spec.name}: {exc}") from exc
    logger.debug(f"Generated {spec.name}: {P.nrows} rows in R^{P.dim}")
    return P


def boundary_samples(P: HPolyhedron, count: int, seed: int) -> List[RVector]:
    """
    Points on the strata relint G - relint N(P,H): for each proper pair
    G < H, g - v and g - 2v with g the relint witness of G and v a
    positive combination of the generators of N(P,H) plus a lineality
    shift, preceded by g itself.
    """
    rng = random.Random(seed)
    points: Dict[RVector, None] = {}
    for G, H in P.lattice.proper_pairs():
        cone = normal_cone(P, H)
        g = G.witness
        points.setdefault(g, None)
        for _ in range(count):
            coefficients = [Fraction(rng.randint(1, 8), rng.randint(1, 4)) for _ in cone.generators]
            coefficients += [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in cone.lineality.vectors]
            v = cone.point(coefficients)
            points.setdefault(sub(g, v), None)
            points.setdefault(sub(g, scale(Fraction(2), v)), None)
    return list(points)

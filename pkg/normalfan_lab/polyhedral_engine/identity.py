# -*- coding: utf-8 -*-
"""
Evaluation and verification of the signed cell sum

    phi_P = sum over faces F of (-1)^dim F * 1[F - N(P,F)].

Membership in a cell is an integer row check when the tight rows fix the
cell coefficients, and one exact LP otherwise.  Besides phi_at itself this module
checks the companion identities: the Euler relation for cones, the covering
of R^d by relint F + N(P,F), the reflection map psi and its degree, the
strata of non-regular points with their face intervals, and the
verification driver that evaluates phi on random, boundary and perturbed
samples.
"""

import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import ceil, floor
from typing import Dict, List, Optional, Sequence, Tuple

from harness.generator import boundary_samples

from .config import (
    DEBUG_ENABLED, DEFAULT_RANDOM_SAMPLES, DEFAULT_SEED, SAMPLE_WINDOW_MARGIN, VERIFY_WORKERS,
)
from .debug import VerificationDebugger
from .errors import (
    CertificateError, CoverViolation, DimensionMismatch, NotACone, TheoremViolation,
)
from .exactmath import (
    ONE, ZERO, RVector, add, dot, format_rational, is_zero, norm_sq, project_affine,
    scale, sub, zeros,
)
from .lp import LinearSystem, OPTIMAL, UNBOUNDED, optimize, strict_feasible
from .polyhedron import (
    CellSystem, Face, HPolyhedron, VCone, cell_system, cone_contains, decompose, face_interval,
    face_relint_contains, normal_cone,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhiTerm:
    face: int
    dim: int
    member: bool


@dataclass(frozen=True)
class PhiReport:
    point: RVector
    terms: Tuple[PhiTerm, ...]
    phi: int

    @property
    def members(self) -> List[int]:
        return [t.face for t in self.terms if t.member]


@dataclass(frozen=True)
class Stratum:
    G: int
    H: int


@dataclass(frozen=True)
class CoveringWitness:
    """y = x + u with x in relint F and u in N(P,F)."""
    face: Face
    x: RVector
    u: RVector


@dataclass(frozen=True)
class ConstantWitness:
    point: RVector
    expected: int
    case: str
    members: Tuple[int, ...] = ()


@dataclass(frozen=True)
class SampleStrategy:
    random_samples: int = DEFAULT_RANDOM_SAMPLES
    seed: int = DEFAULT_SEED
    boundary_per_pair: int = 1
    include_perturbed: bool = True
    workers: int = VERIFY_WORKERS


@dataclass(frozen=True)
class SampleResult:
    index: int
    kind: str
    report: PhiReport


@dataclass
class VerifyReport:
    predicted: int
    samples: int
    violations: List[SampleResult] = field(default_factory=list)
    breakdown: Dict[str, int] = field(default_factory=dict)
    debug: Optional[Dict] = None

    @property
    def ok(self) -> bool:
        return not self.violations


@lru_cache(maxsize=64)
def _cells(P: HPolyhedron) -> Tuple[CellSystem, ...]:
    return tuple(cell_system(P, F) for F in P.lattice)


@lru_cache(maxsize=64)
def _covering_cells(P: HPolyhedron) -> Tuple[Tuple[VCone, CellSystem], ...]:
    """Per face: N(P,F) and the system of relint F + N(P,F)."""
    cells = []
    for F in P.lattice:
        cone = normal_cone(P, F)
        cells.append((cone, CellSystem(P, F, cone.negated())))
    return tuple(cells)


def _check_point(P: HPolyhedron, x: Sequence[Fraction]) -> RVector:
    if len(x) != P.dim:
        raise DimensionMismatch(f"Point of length {len(x)} for a polyhedron in R^{P.dim}")
    return tuple(x)


def cell_contains(P: HPolyhedron, F: Face, x: Sequence[Fraction]) -> bool:
    """Some f in F with f - x in N(P,F)."""
    x = _check_point(P, x)
    return _cells(P)[F.id].contains(x)


def open_cell_contains(P: HPolyhedron, F: Face, z: Sequence[Fraction]) -> bool:
    """z in relint F - relint N(P,F), the interior of the cell."""
    z = _check_point(P, z)
    return _cells(P)[F.id].solve(z, strict_face=True, strict_cone=True) is not None


def phi_at(P: HPolyhedron, x: Sequence[Fraction]) -> PhiReport:
    x = _check_point(P, x)
    terms = []
    phi = 0
    for F, cell in zip(P.lattice, _cells(P)):
        member = cell.contains(x)
        if member:
            phi += (-1) ** F.dim
        terms.append(PhiTerm(F.id, F.dim, member))
    return PhiReport(x, tuple(terms), phi)


def is_cone(P: HPolyhedron) -> bool:
    """0 in P and no row exceeds 0 anywhere on P, so P equals its recession cone."""
    if any(beta < 0 for beta in P.b):
        return False
    for a, beta in P.rows:
        if beta == 0:
            continue
        outcome = optimize(a, P.system)
        if outcome.status == UNBOUNDED or outcome.value > 0:
            return False
    return True


def euler_sum(P: HPolyhedron) -> int:
    """
    sum of (-1)^dim F over all faces of a cone.

    Raises:
        NotACone: if P is not a cone with apex at the origin
    """
    if not is_cone(P):
        raise NotACone("euler_sum needs a polyhedral cone with apex at the origin")
    return sum((-1) ** F.dim for F in P.lattice)


def covering_witness(P: HPolyhedron, y: Sequence[Fraction]) -> CoveringWitness:
    """
    The face F with y in relint F + N(P,F), and the split y = x + u.

    Raises:
        CoverViolation: if zero or several faces match
    """
    y = _check_point(P, y)
    matches = []
    for F, (cone, flipped) in zip(P.lattice, _covering_cells(P)):
        coefficients = flipped.solve(y, strict_face=True)
        if coefficients is not None:
            matches.append((F, cone, coefficients))
    if len(matches) != 1:
        raise CoverViolation(y, [F.id for F, _, _ in matches])
    F, cone, coefficients = matches[0]
    u = cone.point(coefficients)
    x = sub(y, u)
    if not face_relint_contains(P, F, x) or not cone_contains(cone, u):
        raise CertificateError(f"Covering split at face {F.id} failed its exact re-check")
    return CoveringWitness(F, x, u)


def project_onto(P: HPolyhedron, y: Sequence[Fraction]) -> RVector:
    """Euclidean nearest point of P to y."""
    return covering_witness(P, y).x


def psi(P: HPolyhedron, y: Sequence[Fraction]) -> RVector:
    """Reflection x + u -> x - u across the face carrying y."""
    witness = covering_witness(P, y)
    return sub(witness.x, witness.u)


def degree_at(P: HPolyhedron, z: Sequence[Fraction]) -> Optional[int]:
    """
    Degree of psi at a regular point z, or None when z lies on a cell boundary.

    Raises:
        TheoremViolation: if the degree disagrees with (-1)^d phi_P(z)
    """
    z = _check_point(P, z)
    report = phi_at(P, z)
    degree = 0
    for F, term in zip(P.lattice, report.terms):
        if not term.member:
            continue
        if not open_cell_contains(P, F, z):
            return None
        degree += (-1) ** (P.dim - F.dim)
    if degree != (-1) ** P.dim * report.phi:
        raise TheoremViolation(z, report, (-1) ** P.dim * degree)
    return degree


@lru_cache(maxsize=4096)
def _stratum_system(P: HPolyhedron, G: Face, H: Face) -> CellSystem:
    return CellSystem(P, G, normal_cone(P, H))


def in_stratum(P: HPolyhedron, G: Face, H: Face, x: Sequence[Fraction]) -> bool:
    """x in relint G - relint N(P,H)."""
    return _stratum_system(P, G, H).solve(x, strict_face=True, strict_cone=True) is not None


def stratum_decomposition(P: HPolyhedron, G: Face, H: Face,
                          x: Sequence[Fraction]) -> Optional[Tuple[RVector, RVector]]:
    """(g, v) with x = g - v, g in relint G, v in relint N(P,H); None off the stratum."""
    system = _stratum_system(P, G, H)
    coefficients = system.solve(x, strict_face=True, strict_cone=True)
    if coefficients is None:
        return None
    v = system.cone.point(coefficients)
    return add(x, v), v


def strata_at(P: HPolyhedron, x: Sequence[Fraction]) -> List[Stratum]:
    x = _check_point(P, x)
    found = [Stratum(G.id, H.id) for G, H in P.lattice.proper_pairs() if in_stratum(P, G, H, x)]
    logger.debug(f"{len(found)} strata at {[format_rational(v) for v in x]}")
    return found


def interval_phi(P: HPolyhedron, G: Face, H: Face, y: Sequence[Fraction]) -> int:
    y = _check_point(P, y)
    return sum((-1) ** F.dim for F in face_interval(P.lattice, G, H) if cell_contains(P, F, y))


def _interval_ids(P: HPolyhedron, stratum: Stratum) -> frozenset:
    lattice = P.lattice
    return frozenset(F.id for F in face_interval(lattice, lattice[stratum.G], lattice[stratum.H]))


def check_interval_disjoint(P: HPolyhedron, x: Sequence[Fraction]) -> bool:
    intervals = [_interval_ids(P, s) for s in strata_at(P, x)]
    for i in range(len(intervals)):
        for j in range(i + 1, len(intervals)):
            if intervals[i] & intervals[j]:
                return False
    return True


def split_identity_check(P: HPolyhedron, x: Sequence[Fraction], y: Sequence[Fraction]) -> bool:
    """phi_P(y) regrouped as the interval sums over the strata of x plus the remaining faces."""
    lattice = P.lattice
    strata = strata_at(P, x)
    report = phi_at(P, y)
    member = {t.face: t.member for t in report.terms}
    covered = set()
    total = 0
    for s in strata:
        interval = _interval_ids(P, s)
        covered |= interval
        total += sum((-1) ** lattice[f].dim for f in interval if member[f])
    total += sum((-1) ** F.dim for F in lattice if F.id not in covered and member[F.id])
    return total == report.phi


def constant_witness(P: HPolyhedron) -> ConstantWitness:
    """
    A point whose cell memberships fix the constant.

    Bounded P0: move from a minimal face deep along the inside of its
    normal cone until that face's cell is the only one left.  Unbounded P0:
    take y in the polar of the recession cone with -y in the cone, then
    a1 + y for a maximizer a1 of <., y> lies in no cell.
    """
    decomposition = decompose(P)
    if decomposition.p0_bounded:
        G = P.lattice.minimal_faces[0]
        cone = normal_cone(P, G)
        direction = cone.point([ONE] * len(cone.generators) + [ZERO] * cone.lineality.dim)
        step = ONE
        point = G.witness
        for _ in range(64):
            point = sub(G.witness, scale(step, direction))
            members = phi_at(P, point).members
            if members == [G.id] or is_zero(direction):
                break
            step *= 2
        else:
            raise CertificateError(f"No point isolates the cell of minimal face {G.id}")
        return ConstantWitness(point, (-1) ** G.dim, "bounded", tuple(members))

    y = _recession_polar_direction(P)
    outcome = optimize(y, P.system)
    if outcome.status != OPTIMAL:
        raise CertificateError("<., y> is not bounded above on P for y in the recession polar")
    point = add(outcome.witness, y)
    members = phi_at(P, point).members
    return ConstantWitness(point, 0, "unbounded", tuple(members))


def _recession_polar_direction(P: HPolyhedron) -> RVector:
    """Nonzero y = A^T lambda (lambda >= 0) with A y >= 0."""
    m, d = P.nrows, P.dim
    gram = [[dot(a, c) for c in P.A.rows] for a in P.A.rows]
    ineqs = []
    for i in range(m):
        row = [ZERO] * m
        row[i] = -ONE
        ineqs.append((tuple(row), ZERO))
    for i in range(m):
        ineqs.append((tuple(-g for g in gram[i]), ZERO))
    for k in range(d):
        column = tuple(a[k] for a in P.A.rows)
        for sign in (ONE, -ONE):
            S = LinearSystem(m, tuple(ineqs) + ((tuple(-sign * c for c in column), -ONE),))
            multipliers = strict_feasible(S, ())
            if multipliers is not None:
                y = tuple(dot(multipliers, tuple(a[j] for a in P.A.rows)) for j in range(d))
                return y
    raise CertificateError("Recession cone has no nonzero direction in its polar's negative")


def lineality_reduction_check(P: HPolyhedron, x: Sequence[Fraction]) -> bool:
    """phi_P(x) = (-1)^dim U_P * phi_P0(x projected onto U_P^perp)."""
    x = _check_point(P, x)
    decomposition = decompose(P)
    U = decomposition.U_basis
    projected = project_affine(x, U.as_matrix(), zeros(U.dim))
    return phi_at(P, x).phi == (-1) ** U.dim * phi_at(decomposition.P0, projected).phi


def apex_check(P: HPolyhedron) -> bool:
    """phi_P(0) equals the Euler sum of the cone P."""
    return phi_at(P, zeros(P.dim)).phi == euler_sum(P)


def _random_rational(rng: random.Random, lo: int, hi: int) -> Fraction:
    denominator = rng.choice((1, 2, 3, 4, 5, 7))
    return Fraction(rng.randint(lo * denominator, hi * denominator), denominator)


def _sample_window(P: HPolyhedron) -> List[Tuple[int, int]]:
    witnesses = [F.witness for F in P.lattice]
    window = []
    for k in range(P.dim):
        values = [w[k] for w in witnesses]
        window.append((floor(min(values)) - SAMPLE_WINDOW_MARGIN, ceil(max(values)) + SAMPLE_WINDOW_MARGIN))
    return window


def _perturbed_samples(P: HPolyhedron, rng: random.Random) -> List[RVector]:
    points = []
    for F in P.lattice:
        if F.dim > P.lattice[0].dim:
            break
        for radius in (Fraction(1, 7), Fraction(1, 97)):
            direction = tuple(Fraction(rng.choice((-1, 0, 1))) for _ in range(P.dim))
            points.append(add(F.witness, scale(radius, direction)))
    return points


def build_samples(P: HPolyhedron, strategy: SampleStrategy,
                  debugger: Optional[VerificationDebugger] = None) -> List[Tuple[str, RVector]]:
    """(kind, point) pairs: sanity, random, boundary and perturbed."""
    rng = random.Random(strategy.seed)
    samples: List[Tuple[str, RVector]] = []

    sanity = [zeros(P.dim)] + [F.witness for F in P.lattice]
    sanity.append(constant_witness(P).point)
    samples += [("sanity", x) for x in sanity]

    window = _sample_window(P)
    randoms = [tuple(_random_rational(rng, lo, hi) for lo, hi in window)
               for _ in range(strategy.random_samples)]
    samples += [("random", x) for x in randoms]

    boundary = boundary_samples(P, strategy.boundary_per_pair, rng.randrange(2 ** 32))
    samples += [("boundary", x) for x in boundary]

    perturbed = _perturbed_samples(P, rng) if strategy.include_perturbed else []
    samples += [("perturbed", x) for x in perturbed]

    if debugger is not None:
        for kind, points in (("sanity", sanity), ("random", randoms),
                             ("boundary", boundary), ("perturbed", perturbed)):
            debugger.log_samples(kind, len(points))
    return samples


def verify_theorem(P: HPolyhedron, strategy: Optional[SampleStrategy] = None,
                   strict: bool = True) -> VerifyReport:
    """
    Evaluate phi_P on every sample and compare with the predicted constant.

    Raises:
        TheoremViolation: on the first falsifying sample when strict
    """
    strategy = strategy or SampleStrategy()
    debugger = VerificationDebugger(enabled=DEBUG_ENABLED)

    debugger.start_stage("lattice")
    lattice = P.lattice
    debugger.log_lattice(lattice.f_vector(), len(lattice))
    debugger.end_stage()

    debugger.start_stage("decompose")
    decomposition = decompose(P)
    predicted = decomposition.predicted_phi
    debugger.end_stage({"predicted": predicted, "lineality_dim": decomposition.U_basis.dim,
                        "p0_bounded": decomposition.p0_bounded})

    debugger.start_stage("samples", {"seed": strategy.seed, "random": strategy.random_samples})
    samples = build_samples(P, strategy, debugger)
    debugger.end_stage(len(samples))

    debugger.start_stage("evaluate", {"workers": strategy.workers})
    try:
        with ThreadPoolExecutor(max_workers=max(1, strategy.workers)) as pool:
            reports = list(pool.map(lambda sample: phi_at(P, sample[1]), samples))
    except CertificateError as exc:
        debugger.add_error("Evaluation failed", exc)
        logger.error(f"Evaluation failed: {exc}", exc_info=True)
        raise
    results = [SampleResult(i, kind, report) for i, ((kind, _), report) in enumerate(zip(samples, reports))]
    debugger.log_phi_values([r.report.phi for r in results])
    violations = [r for r in results if r.report.phi != predicted]
    for r in violations:
        debugger.log_violation(r.index, r.kind, [format_rational(v) for v in r.report.point], r.report.phi)
    debugger.end_stage(len(violations))

    if violations:
        debugger.add_warning(f"{len(violations)} of {len(samples)} samples disagree with predicted {predicted}")

    breakdown: Dict[str, int] = {}
    for kind, _ in samples:
        breakdown[kind] = breakdown.get(kind, 0) + 1
    report = VerifyReport(predicted, len(samples), violations, breakdown,
                          debugger.get_debug_info() if debugger.enabled else None)
    if violations:
        logger.warning(f"{len(violations)} of {len(samples)} samples disagree with predicted {predicted}")
        if strict:
            first = violations[0].report
            raise TheoremViolation(first.point, first, predicted, report)
    else:
        logger.info(f"Verified phi = {predicted} on {len(samples)} samples")
    return report


def squared_distance(x: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
    return norm_sq(sub(x, y))

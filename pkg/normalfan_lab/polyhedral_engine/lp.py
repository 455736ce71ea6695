# -*- coding: utf-8 -*-
"""
Exact rational linear programming.

Every geometric predicate of the engine is decided here: feasibility,
optimization (two-phase tableau simplex with Bland's rule), implicit
equalities, relative-interior witnesses, mixed strict feasibility and
Fourier-Motzkin projection.  All results are certified: witnesses are
re-checked row by row, unbounded rays are re-checked against the
recession inequalities and infeasibility carries a Farkas certificate.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .errors import CertificateError, DimensionMismatch, EmptyPolyhedron
from .exactmath import ONE, ZERO, RVector, common_denominator, dot, is_zero, positive_scaling, zeros

logger = logging.getLogger(__name__)

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

Row = Tuple[RVector, Fraction]


@dataclass(frozen=True)
class LinearSystem:
    """
    Rows <normal, x> <= rhs (ineqs) and <normal, x> = rhs (eqs) over R^dim.

    Use `LinearSystem.build` for external input: it folds zero-normal rows
    away, or keeps a contradictory one and flags the system infeasible.
    """
    dim: int
    ineqs: Tuple[Row, ...] = ()
    eqs: Tuple[Row, ...] = ()
    trivially_infeasible: bool = False

    def __post_init__(self):
        for normal, _ in self.ineqs + self.eqs:
            if len(normal) != self.dim:
                raise DimensionMismatch(f"Row normal of length {len(normal)} in R^{self.dim}")

    @classmethod
    def build(cls, dim: int, ineqs: Iterable[Row] = (), eqs: Iterable[Row] = ()) -> "LinearSystem":
        kept_ineqs: List[Row] = []
        kept_eqs: List[Row] = []
        infeasible = False
        for normal, rhs in ineqs:
            normal = tuple(normal)
            if len(normal) != dim:
                raise DimensionMismatch(f"Row normal of length {len(normal)} in R^{dim}")
            if is_zero(normal):
                if rhs < 0:
                    infeasible = True
                    kept_ineqs.append((normal, rhs))
                continue
            kept_ineqs.append((normal, rhs))
        for normal, rhs in eqs:
            normal = tuple(normal)
            if len(normal) != dim:
                raise DimensionMismatch(f"Row normal of length {len(normal)} in R^{dim}")
            if is_zero(normal):
                if rhs != 0:
                    infeasible = True
                    kept_eqs.append((normal, rhs))
                continue
            kept_eqs.append((normal, rhs))
        return cls(dim, tuple(kept_ineqs), tuple(kept_eqs), infeasible)

    def contains(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.dim:
            raise DimensionMismatch(f"Point of length {len(x)} for a system in R^{self.dim}")
        return (all(dot(a, x) <= b for a, b in self.ineqs)
                and all(dot(a, x) == b for a, b in self.eqs))


IntRow = Tuple[Tuple[int, ...], int]


def _integer_row(normal: Sequence[Fraction], rhs: Fraction) -> IntRow:
    scaled, _ = positive_scaling(tuple(normal) + (rhs,))
    return tuple(int(a) for a in scaled[:-1]), int(scaled[-1])


@dataclass(frozen=True)
class IntegerSystem:
    """
    A LinearSystem with every row scaled by a positive factor to integer
    entries.  Membership of a rational point is then decided in integer
    arithmetic.  Row order is kept, so strict indices mean the same rows.
    """
    dim: int
    ineqs: Tuple[IntRow, ...]
    eqs: Tuple[IntRow, ...]

    @classmethod
    def from_system(cls, S: LinearSystem) -> "IntegerSystem":
        return cls(S.dim, tuple(_integer_row(a, b) for a, b in S.ineqs),
                   tuple(_integer_row(a, b) for a, b in S.eqs))

    def contains(self, x: Sequence[Fraction], strict: FrozenSet[int] = frozenset()) -> bool:
        """Every row holds at x; rows listed in `strict` hold strictly."""
        if len(x) != self.dim:
            raise DimensionMismatch(f"Point of length {len(x)} for a system in R^{self.dim}")
        numerators, q = common_denominator(x)
        for normal, rhs in self.eqs:
            if sum(a * n for a, n in zip(normal, numerators) if a) != rhs * q:
                return False
        for j, (normal, rhs) in enumerate(self.ineqs):
            value = sum(a * n for a, n in zip(normal, numerators) if a)
            bound = rhs * q
            if value > bound or (value == bound and j in strict):
                return False
        return True


@dataclass(frozen=True)
class FarkasCertificate:
    """Multipliers y >= 0 (ineqs) and z (eqs) with y^T A + z^T E = 0 and y^T b + z^T e < 0."""
    ineq_multipliers: Tuple[Fraction, ...]
    eq_multipliers: Tuple[Fraction, ...]

    def verify(self, S: LinearSystem) -> bool:
        if len(self.ineq_multipliers) != len(S.ineqs) or len(self.eq_multipliers) != len(S.eqs):
            return False
        if any(y < 0 for y in self.ineq_multipliers):
            return False
        combined = [ZERO] * S.dim
        bound = ZERO
        for y, (a, b) in list(zip(self.ineq_multipliers, S.ineqs)) + list(zip(self.eq_multipliers, S.eqs)):
            if not y:
                continue
            for k, coeff in enumerate(a):
                if coeff:
                    combined[k] += y * coeff
            bound += y * b
        return is_zero(combined) and bound < 0


@dataclass(frozen=True)
class LPOutcome:
    status: str
    witness: Optional[RVector] = None
    value: Optional[Fraction] = None
    ray: Optional[RVector] = None
    certificate: Optional[FarkasCertificate] = None

    @property
    def is_feasible(self) -> bool:
        return self.status != INFEASIBLE


# --- Tableau simplex over {M v = r, v >= 0} ---

def _pivot(T: List[List[Fraction]], basis: List[int], r: int, c: int) -> None:
    pivot = T[r][c]
    if pivot != 1:
        T[r] = [a / pivot for a in T[r]]
    prow = T[r]
    nonzero = [k for k, a in enumerate(prow) if a]
    for i, row in enumerate(T):
        if i == r:
            continue
        f = row[c]
        if f:
            for k in nonzero:
                row[k] -= f * prow[k]
    basis[r] = c


def _bland(T: List[List[Fraction]], basis: List[int], cost: Sequence[Fraction],
           ncols: int) -> Tuple[str, Optional[int], int]:
    """
    Maximize cost over the current tableau; returns (status, unbounded column, pivots).

    The reduced-cost row rides along as the last row of T while pivoting
    and is removed before returning.
    """
    m = len(basis)
    width = len(T[0]) if T else ncols + 1
    reduced = list(cost[:ncols]) + [ZERO] * (width - ncols)
    for i, b in enumerate(basis):
        w = cost[b]
        if w:
            for k, a in enumerate(T[i]):
                if a:
                    reduced[k] -= w * a
    T.append(reduced)
    pivots = 0
    try:
        while True:
            R = T[-1]
            entering = next((j for j in range(ncols) if R[j] > 0), None)
            if entering is None:
                return OPTIMAL, None, pivots
            leaving = None
            best = None
            for i in range(m):
                row = T[i]
                a = row[entering]
                if a > 0:
                    key = (row[-1] / a, basis[i])
                    if best is None or key < best:
                        best, leaving = key, i
            if leaving is None:
                return UNBOUNDED, entering, pivots
            _pivot(T, basis, leaving, entering)
            pivots += 1
    finally:
        T.pop()


@dataclass(frozen=True)
class _TableauResult:
    status: str
    solution: Optional[List[Fraction]] = None
    ray: Optional[List[Fraction]] = None
    # y with rows^T y >= 0 and rhs^T y < 0 when infeasible
    multipliers: Optional[List[Fraction]] = None


def _simplex(rows: List[List[Fraction]], rhs: List[Fraction], cost: List[Fraction]) -> _TableauResult:
    """
    max cost.v s.t. rows v = rhs, v >= 0.

    On infeasibility the phase-1 dual c_B B^-1 is read off the artificial
    columns and returned as the row multipliers.
    """
    m = len(rows)
    n = len(cost)
    T: List[List[Fraction]] = []
    flipped: List[bool] = []
    for i, (row, r) in enumerate(zip(rows, rhs)):
        flipped.append(r < 0)
        if r < 0:
            row, r = [-a for a in row], -r
        artificial = [ZERO] * m
        artificial[i] = ONE
        T.append(list(row) + artificial + [r])
    basis = [n + i for i in range(m)]

    phase1_cost = [ZERO] * n + [-ONE] * m
    _, _, pivots = _bland(T, basis, phase1_cost, n + m)
    if any(b >= n and row[-1] != 0 for b, row in zip(basis, T)):
        logger.debug(f"Phase 1 infeasible after {pivots} pivots")
        multipliers = []
        for i in range(m):
            y = -sum((row[n + i] for b, row in zip(basis, T) if b >= n), ZERO)
            multipliers.append(-y if flipped[i] else y)
        return _TableauResult(INFEASIBLE, multipliers=multipliers)

    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                # redundant equality
                del T[i]
                del basis[i]
                continue
            _pivot(T, basis, i, col)
        i += 1
    T = [row[:n] + [row[-1]] for row in T]

    status, entering, more = _bland(T, basis, cost, n)
    logger.debug(f"Simplex {status} after {pivots + more} pivots ({len(T)} rows, {n} columns)")
    solution = [ZERO] * n
    for b, row in zip(basis, T):
        solution[b] = row[-1]
    if status == UNBOUNDED:
        ray = [ZERO] * n
        ray[entering] = ONE
        for b, row in zip(basis, T):
            ray[b] = -row[entering]
        return _TableauResult(UNBOUNDED, solution, ray)
    return _TableauResult(OPTIMAL, solution)


class _StandardForm:
    """
    Maps a LinearSystem over free variables to {M v = r, v >= 0}.

    A row of the exact form -x_k <= 0 marks x_k as sign-constrained and is
    absorbed into the variable bound; other variables are split as x+ - x-.
    """

    def __init__(self, S: LinearSystem):
        d = S.dim
        self.system = S
        # first absorbed row per sign-constrained variable
        self.absorbed: Dict[int, int] = {}
        self.remaining_index: List[int] = []
        nonneg: Set[int] = set()
        remaining: List[Row] = []
        for idx, (normal, rhs) in enumerate(S.ineqs):
            if rhs == 0:
                support = [k for k, a in enumerate(normal) if a]
                if len(support) == 1 and normal[support[0]] < 0:
                    nonneg.add(support[0])
                    self.absorbed.setdefault(support[0], idx)
                    continue
            remaining.append((normal, rhs))
            self.remaining_index.append(idx)
        self.columns: List[Tuple[int, int]] = []
        for k in range(d):
            self.columns.append((k, 1))
            if k not in nonneg:
                self.columns.append((k, -1))
        n_struct = len(self.columns)
        self.ncols = n_struct + len(remaining)
        self.dim = d
        self.rows: List[List[Fraction]] = []
        self.rhs: List[Fraction] = []
        for i, (normal, rhs) in enumerate(remaining):
            row = [sign * normal[k] for k, sign in self.columns] + [ZERO] * len(remaining)
            row[n_struct + i] = ONE
            self.rows.append(row)
            self.rhs.append(rhs)
        for normal, rhs in S.eqs:
            self.rows.append([sign * normal[k] for k, sign in self.columns] + [ZERO] * len(remaining))
            self.rhs.append(rhs)

    def cost(self, c: Sequence[Fraction]) -> List[Fraction]:
        return [sign * c[k] for k, sign in self.columns] + [ZERO] * (self.ncols - len(self.columns))

    def decode(self, v: Sequence[Fraction]) -> RVector:
        x = [ZERO] * self.dim
        for (k, sign), value in zip(self.columns, v):
            if value:
                x[k] += sign * value
        return tuple(x)

    def certificate(self, y: Sequence[Fraction]) -> FarkasCertificate:
        """
        Farkas multipliers for the original system from phase-1 row
        multipliers y.  An absorbed row -x_k <= 0 takes the k-th entry of
        the combination of the other rows, which is >= 0 when y is valid.
        """
        S = self.system
        n_remaining = len(self.remaining_index)
        ineq = [ZERO] * len(S.ineqs)
        for i, idx in enumerate(self.remaining_index):
            ineq[idx] = y[i]
        eq = tuple(y[n_remaining:])
        rows = [S.ineqs[idx] for idx in self.remaining_index] + list(S.eqs)
        for k, idx in self.absorbed.items():
            ineq[idx] = sum((w * normal[k] for w, (normal, _) in zip(y, rows) if w), ZERO)
        return FarkasCertificate(tuple(ineq), eq)


def farkas_certificate(S: LinearSystem) -> Optional[FarkasCertificate]:
    """
    Multipliers proving S infeasible, taken from the phase-1 tableau.
    None when S is feasible.
    """
    return feasible(S).certificate


def optimize(c: Sequence[Fraction], S: LinearSystem) -> LPOutcome:
    """
    Exact optimum of max <c, x> over S, an unbounded ray, or infeasibility.

    Returns:
        LPOutcome with witness/value (optimal), witness/ray (unbounded) or
        a Farkas certificate (infeasible)
    """
    if len(c) != S.dim:
        raise DimensionMismatch(f"Objective of length {len(c)} for a system in R^{S.dim}")
    form = _StandardForm(S)
    result = _simplex(form.rows, form.rhs, form.cost(c))
    if result.status == INFEASIBLE:
        certificate = form.certificate(result.multipliers)
        if not certificate.verify(S):
            raise CertificateError("Farkas certificate failed its exact re-check")
        return LPOutcome(INFEASIBLE, certificate=certificate)
    witness = form.decode(result.solution)
    if not S.contains(witness):
        raise CertificateError("Simplex witness violates the system")
    if result.status == UNBOUNDED:
        ray = form.decode(result.ray)
        if (any(dot(a, ray) > 0 for a, _ in S.ineqs) or any(dot(a, ray) != 0 for a, _ in S.eqs)
                or dot(c, ray) <= 0):
            raise CertificateError("Unbounded ray failed its exact re-check")
        return LPOutcome(UNBOUNDED, witness=witness, ray=ray)
    return LPOutcome(OPTIMAL, witness=witness, value=dot(c, witness))


def feasible(S: LinearSystem) -> LPOutcome:
    """Feasibility as an LP with zero objective: optimal (with witness) or infeasible."""
    return optimize(zeros(S.dim), S)


def strict_feasible(S: LinearSystem, strict: Iterable[int]) -> Optional[RVector]:
    """
    A solution satisfying the inequality rows listed in `strict` strictly.

    Maximizes a common slack t (t <= 1) added to the strict rows and
    accepts t > 0.
    """
    strict = set(strict)
    if not strict:
        outcome = feasible(S)
        return outcome.witness if outcome.is_feasible else None
    d = S.dim
    ineqs = [(a + ((ONE if i in strict else ZERO),), b) for i, (a, b) in enumerate(S.ineqs)]
    ineqs.append((zeros(d) + (ONE,), ONE))
    eqs = [(a + (ZERO,), b) for a, b in S.eqs]
    lifted = LinearSystem(d + 1, tuple(ineqs), tuple(eqs), S.trivially_infeasible)
    outcome = optimize(zeros(d) + (ONE,), lifted)
    if outcome.status != OPTIMAL or outcome.value <= 0:
        return None
    return outcome.witness[:d]


def cone_membership_system(generators: Sequence[RVector], lineality: Sequence[RVector],
                           v: Sequence[Fraction]) -> LinearSystem:
    """
    v = sum lambda_i g_i + sum mu_j w_j over (lambda, mu), with lambda >= 0.
    Inequality i is the bound on lambda_i.
    """
    vectors = list(generators) + list(lineality)
    k = len(vectors)
    ineqs = []
    for i in range(len(generators)):
        row = [ZERO] * k
        row[i] = -ONE
        ineqs.append((tuple(row), ZERO))
    eqs = [(tuple(u[coord] for u in vectors), v[coord]) for coord in range(len(v))]
    return LinearSystem(k, tuple(ineqs), tuple(eqs))


def relint_closure(S: LinearSystem) -> Optional[Tuple[FrozenSet[int], RVector]]:
    """
    Implicit equalities and a relative-interior point from one LP.

    Homogenized over (x, s, t): A_j x - b_j s + t_j <= 0, 0 <= t_j <= 1,
    E x = e s, s >= 1, maximize sum t_j.  Scaling (x, s) makes every
    non-implicit row reach t_j = 1, while implicit rows are pinned at 0.
    The LP is posed in s' = s - 1 >= 0 so that s and every t_j are plain
    sign-constrained variables.

    Returns:
        (implicit inequality indices, x / s) or None if S is infeasible
    """
    if S.trivially_infeasible:
        return None
    d = S.dim
    m = len(S.ineqs)
    n = d + 1 + m
    ineqs: List[Row] = []
    for j, (a, b) in enumerate(S.ineqs):
        t = [ZERO] * m
        t[j] = ONE
        ineqs.append((a + (-b,) + tuple(t), b))
    for j in range(m):
        upper = [ZERO] * n
        upper[d + 1 + j] = ONE
        ineqs.append((tuple(upper), ONE))
        lower = [ZERO] * n
        lower[d + 1 + j] = -ONE
        ineqs.append((tuple(lower), ZERO))
    s_bound = [ZERO] * n
    s_bound[d] = -ONE
    ineqs.append((tuple(s_bound), ZERO))
    eqs = [(a + (-b,) + zeros(m), b) for a, b in S.eqs]
    lifted = LinearSystem(n, tuple(ineqs), tuple(eqs))
    objective = zeros(d + 1) + (ONE,) * m
    outcome = optimize(objective, lifted)
    if outcome.status != OPTIMAL:
        return None
    v = outcome.witness
    s = ONE + v[d]
    implicit = frozenset(j for j in range(m) if v[d + 1 + j] < 1)
    point = tuple(a / s for a in v[:d])
    return implicit, point


def implicit_equalities(S: LinearSystem) -> FrozenSet[int]:
    """
    Inequality rows that hold with equality on all of S.

    Raises:
        EmptyPolyhedron: if S is infeasible
    """
    result = relint_closure(S)
    if result is None:
        raise EmptyPolyhedron("implicit_equalities of an infeasible system")
    return result[0]


def strict_interior(S: LinearSystem) -> Optional[RVector]:
    """A relative-interior point of S, or None if S is infeasible."""
    if not feasible(S).is_feasible:
        return None
    implicit = implicit_equalities(S)
    strict = [j for j in range(len(S.ineqs)) if j not in implicit]
    witness = strict_feasible(S, strict)
    if witness is None:
        raise CertificateError("Non-implicit rows admit no common strictly feasible point")
    return witness


def relint_contains(S: LinearSystem, x: Sequence[Fraction]) -> bool:
    """Equalities and implicit rows tight, every other inequality strict."""
    if len(x) != S.dim:
        raise DimensionMismatch(f"Point of length {len(x)} for a system in R^{S.dim}")
    if any(dot(a, x) != b for a, b in S.eqs):
        return False
    result = relint_closure(S)
    if result is None:
        return False
    implicit = result[0]
    for j, (a, b) in enumerate(S.ineqs):
        value = dot(a, x)
        if j in implicit:
            if value != b:
                return False
        elif value >= b:
            return False
    return True


# --- Fourier-Motzkin projection ---

def _row_key(normal: Sequence[Fraction], rhs: Fraction) -> Tuple[Fraction, ...]:
    scaled, _ = positive_scaling(tuple(normal) + (rhs,))
    return scaled


def _dedupe(rows: List[Tuple[List[Fraction], Fraction]]) -> List[Tuple[List[Fraction], Fraction]]:
    seen: Dict[Tuple[Fraction, ...], None] = {}
    kept = []
    contradiction = None
    for normal, rhs in rows:
        if is_zero(normal):
            if rhs < 0 and contradiction is None:
                contradiction = (normal, rhs)
            continue
        key = _row_key(normal, rhs)
        if key in seen:
            continue
        seen[key] = None
        kept.append((normal, rhs))
    if contradiction is not None:
        kept.append(contradiction)
    return kept


def fm_eliminate(S: LinearSystem, drop: Iterable[int]) -> LinearSystem:
    """
    Project the solution set of S onto the coordinates not in `drop`.

    Equalities touching a dropped coordinate are used first to substitute it
    out; the remaining coordinates go by Fourier-Motzkin, always eliminating
    the one that creates the fewest new rows.  Only exact duplicates are
    removed, so the output may contain redundant rows.
    """
    remaining = set(drop)
    for k in remaining:
        if not 0 <= k < S.dim:
            raise DimensionMismatch(f"Coordinate {k} outside R^{S.dim}")
    keep = [k for k in range(S.dim) if k not in remaining]
    ineqs = [(list(a), b) for a, b in S.ineqs]
    eqs = [(list(a), b) for a, b in S.eqs]

    while True:
        target = None
        for idx, (a, _) in enumerate(eqs):
            k = next((k for k in sorted(remaining) if a[k] != 0), None)
            if k is not None:
                target = (idx, k)
                break
        if target is None:
            break
        idx, k = target
        pivot_row, pivot_rhs = eqs.pop(idx)
        pivot = pivot_row[k]

        def substitute(row: List[Fraction], rhs: Fraction) -> Tuple[List[Fraction], Fraction]:
            f = row[k]
            if not f:
                return row, rhs
            ratio = f / pivot
            new = [r - ratio * p for r, p in zip(row, pivot_row)]
            new[k] = ZERO
            return new, rhs - ratio * pivot_rhs

        ineqs = [substitute(r, b) for r, b in ineqs]
        eqs = [substitute(r, b) for r, b in eqs]
        remaining.discard(k)

    while remaining:
        def cost(k: int) -> Tuple[int, int]:
            pos = sum(1 for a, _ in ineqs if a[k] > 0)
            neg = sum(1 for a, _ in ineqs if a[k] < 0)
            return pos * neg, k

        k = min(remaining, key=cost)
        positive = [(a, b) for a, b in ineqs if a[k] > 0]
        negative = [(a, b) for a, b in ineqs if a[k] < 0]
        combined = [(a, b) for a, b in ineqs if a[k] == 0]
        for ap, bp in positive:
            for an, bn in negative:
                wp = ONE / ap[k]
                wn = ONE / -an[k]
                normal = [wp * x + wn * y for x, y in zip(ap, an)]
                normal[k] = ZERO
                combined.append((normal, wp * bp + wn * bn))
        ineqs = _dedupe(combined)
        logger.debug(f"FM eliminated x{k}: {len(positive)}x{len(negative)} pairs, {len(ineqs)} rows")
        remaining.discard(k)

    def project(normal: List[Fraction]) -> RVector:
        return tuple(normal[k] for k in keep)

    return LinearSystem.build(
        len(keep),
        [(project(a), b) for a, b in ineqs],
        [(project(a), b) for a, b in eqs],
    )

# -*- coding: utf-8 -*-
"""
JSON codecs.  Rationals always travel as strings "p/q" (or "p").
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List

from .config import MAX_CONSTRAINTS, MAX_DIM
from .errors import DimensionMismatch, InputError
from .exactmath import RMatrix, RVector, SubspaceBasis, format_rational, to_rational
from .lp import LinearSystem
from .polyhedron import (
    Face, FaceLattice, HPolyhedron, LinealityDecomposition, VCone, expand_equalities,
    make_polyhedron,
)

logger = logging.getLogger(__name__)


def rationals_to_json(values: Iterable) -> List[str]:
    return [format_rational(v) for v in values]


def rationals_from_json(values: Any, what: str = "vector") -> RVector:
    if not isinstance(values, list):
        raise InputError(f"Expected a list of rationals for {what}")
    return tuple(to_rational(v) for v in values)


def parse_point(literal: str, dim: int) -> RVector:
    """Comma-separated rationals, e.g. "2,1/2"."""
    parts = [p for p in literal.split(",")] if literal.strip() else []
    point = tuple(to_rational(p) for p in parts)
    if len(point) != dim:
        raise DimensionMismatch(f"Point has {len(point)} coordinates, instance dimension is {dim}")
    return point


def _matrix_from_json(rows: Any, dim: int, what: str) -> RMatrix:
    if not isinstance(rows, list):
        raise InputError(f"Expected a list of rows for {what}")
    parsed = tuple(rationals_from_json(row, f"a row of {what}") for row in rows)
    for row in parsed:
        if len(row) != dim:
            raise DimensionMismatch(f"Row of length {len(row)} in {what}, expected {dim}")
    return RMatrix(parsed, dim)


def polyhedron_from_dict(payload: Dict) -> HPolyhedron:
    """
    {"d": int, "A": [[...]], "b": [...], "eqs": optional {"A": [[...]], "b": [...]}}

    Raises:
        InputError: malformed payload
        DimensionMismatch: inconsistent lengths or d above NORMALFAN_MAX_DIM
        EmptyPolyhedron: infeasible rows
    """
    if not isinstance(payload, dict):
        raise InputError("Polyhedron payload must be a JSON object")
    try:
        dim = int(payload["d"])
        A = _matrix_from_json(payload.get("A", []), dim, "A")
        b = rationals_from_json(payload.get("b", []), "b")
    except KeyError as exc:
        raise InputError(f"Missing key {exc} in polyhedron payload") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"Malformed polyhedron payload: {exc}") from exc
    if dim < 0 or dim > MAX_DIM:
        raise DimensionMismatch(f"Dimension {dim} outside 0..{MAX_DIM} (NORMALFAN_MAX_DIM)")
    if len(b) != A.nrows:
        raise DimensionMismatch(f"{A.nrows} rows in A but {len(b)} entries in b")
    eqs = payload.get("eqs")
    if eqs:
        if not isinstance(eqs, dict):
            raise InputError("'eqs' must be an object with keys A and b")
        E = _matrix_from_json(eqs.get("A", []), dim, "eqs.A")
        e = rationals_from_json(eqs.get("b", []), "eqs.b")
        if len(e) != E.nrows:
            raise DimensionMismatch(f"{E.nrows} equality rows but {len(e)} right-hand sides")
        A, b = expand_equalities(A, b, E, e)
    if A.nrows > MAX_CONSTRAINTS:
        logger.warning(f"{A.nrows} rows exceed the desk-scale limit of {MAX_CONSTRAINTS}")
    return make_polyhedron(A, b)


def polyhedron_to_dict(P: HPolyhedron) -> Dict:
    return {
        "d": P.dim,
        "A": [rationals_to_json(row) for row in P.A.rows],
        "b": rationals_to_json(P.b),
    }


def _row_to_dict(row) -> Dict:
    normal, rhs = row
    return {"a": rationals_to_json(normal), "b": format_rational(rhs)}


def system_to_dict(S: LinearSystem) -> Dict:
    return {
        "dim": S.dim,
        "ineqs": [_row_to_dict(row) for row in S.ineqs],
        "eqs": [_row_to_dict(row) for row in S.eqs],
    }


def _rows_from_json(rows: Any, what: str) -> List:
    if not isinstance(rows, list):
        raise InputError(f"Expected a list of rows for {what}")
    parsed = []
    for row in rows:
        if not isinstance(row, dict) or "a" not in row or "b" not in row:
            raise InputError(f"Each row of {what} needs keys 'a' and 'b'")
        parsed.append((rationals_from_json(row["a"], f"a row of {what}"), to_rational(row["b"])))
    return parsed


def system_from_dict(payload: Dict) -> LinearSystem:
    """
    {"dim": int, "ineqs": [{"a": [...], "b": "p/q"}], "eqs": [...]}

    Raises:
        InputError: malformed payload
        DimensionMismatch: a row of the wrong length
    """
    if not isinstance(payload, dict):
        raise InputError("Linear system payload must be a JSON object")
    try:
        dim = int(payload["dim"])
        ineqs = _rows_from_json(payload.get("ineqs", []), "ineqs")
        eqs = _rows_from_json(payload.get("eqs", []), "eqs")
    except KeyError as exc:
        raise InputError(f"Missing key {exc} in linear system payload") from exc
    except (TypeError, ValueError) as exc:
        raise InputError(f"Malformed linear system payload: {exc}") from exc
    return LinearSystem.build(dim, ineqs, eqs)


def load_polyhedron(path: Path) -> HPolyhedron:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"Cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    if isinstance(payload, dict) and "instance" in payload:
        payload = payload["instance"]
    return polyhedron_from_dict(payload)


def face_to_dict(F: Face, with_witness: bool = True) -> Dict:
    payload = {"id": F.id, "active": list(F.active), "dim": F.dim}
    if with_witness:
        payload["witness"] = rationals_to_json(F.witness)
    return payload


def lattice_to_dict(P: HPolyhedron, lattice: FaceLattice) -> Dict:
    return {
        "d": P.dim,
        "dim": P.aff_dim,
        "f_vector": lattice.f_vector(),
        "faces": [face_to_dict(F) for F in lattice],
    }


def subspace_to_json(B: SubspaceBasis) -> List[List[str]]:
    return [rationals_to_json(v) for v in B.vectors]


def vcone_to_dict(C: VCone) -> Dict:
    return {
        "generators": [rationals_to_json(g) for g in C.generators],
        "lineality": subspace_to_json(C.lineality),
    }


def decomposition_to_dict(decomposition: LinealityDecomposition) -> Dict:
    return {
        "lineality_dim": decomposition.U_basis.dim,
        "U_basis": subspace_to_json(decomposition.U_basis),
        "P0": polyhedron_to_dict(decomposition.P0),
        "p0_bounded": decomposition.p0_bounded,
        "predicted_phi": decomposition.predicted_phi,
    }


def phi_report_to_dict(report) -> Dict:
    return {
        "point": rationals_to_json(report.point),
        "phi": report.phi,
        "terms": [{"face": t.face, "dim": t.dim, "member": t.member} for t in report.terms],
    }


def verify_report_to_dict(report) -> Dict:
    payload = {
        "predicted": report.predicted,
        "samples": report.samples,
        "violations": [
            {
                "index": v.index,
                "kind": v.kind,
                "point": rationals_to_json(v.report.point),
                "phi": v.report.phi,
                "members": v.report.members,
            }
            for v in report.violations
        ],
        "breakdown": dict(sorted(report.breakdown.items())),
    }
    if report.debug:
        payload["debug"] = report.debug
    return payload


def local_cone_to_dict(local) -> Dict:
    return {
        "G": local.G,
        "H": local.H,
        "base_point": rationals_to_json(local.base_point),
        "J_H": list(local.J_H),
        "L3_basis": subspace_to_json(local.L3_basis),
        "Hstar": polyhedron_to_dict(local.Hstar),
        "chart": polyhedron_to_dict(local.chart),
        "face_map": [
            {"face": F_id, "local_active": list(chart_face.active), "local_dim": chart_face.dim}
            for F_id, _, chart_face in local.face_map
        ],
    }

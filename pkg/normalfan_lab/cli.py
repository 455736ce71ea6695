# -*- coding: utf-8 -*-
"""
Command-line surface: every operation as a JSON-in / JSON-out subcommand.

Exit codes: 0 success, 1 identity violation (report on stdout),
2 input or usage error (diagnostic on stderr).
Negative point coordinates need the attached form, e.g. --point=-1,2.
"""

import argparse
import json
import logging
import random
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

from data_pipeline.corpus_loader import load_corpus  # noqa: E402
from harness.generator import GenSpec, InstanceKind, boundary_samples, gen_instance  # noqa: E402
from harness.oracle import oracle_cell_hreps  # noqa: E402
from polyhedral_engine.config import (  # noqa: E402
    DEFAULT_COEFFICIENT_BOUND, DEFAULT_RANDOM_SAMPLES, DEFAULT_SEED, LOG_LEVEL, VERIFY_WORKERS,
)
from polyhedral_engine.errors import (  # noqa: E402
    CertificateError, CoverViolation, LocalizationError, NormalFanError, TheoremViolation,
)
from polyhedral_engine.exactmath import format_rational  # noqa: E402
from polyhedral_engine.identity import (  # noqa: E402
    SampleStrategy, check_interval_disjoint, covering_witness, degree_at, euler_sum,
    phi_at, psi, strata_at, verify_theorem,
)
from polyhedral_engine.localization import check_strata, localize, safe_radius  # noqa: E402
from polyhedral_engine.polyhedron import HPolyhedron, decompose, normal_cone  # noqa: E402
from polyhedral_engine.serialization import (  # noqa: E402
    decomposition_to_dict, face_to_dict, lattice_to_dict, load_polyhedron, local_cone_to_dict,
    parse_point, phi_report_to_dict, polyhedron_to_dict, rationals_to_json, system_to_dict,
    vcone_to_dict, verify_report_to_dict,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2


class UsageError(Exception):
    """Arguments that parse but do not fit the command."""


def _point(args: argparse.Namespace, P: HPolyhedron):
    if args.point is None:
        raise UsageError(f"'{args.command}' needs --point")
    return parse_point(args.point, P.dim)


def cmd_faces(args, P: HPolyhedron) -> Dict:
    return lattice_to_dict(P, P.lattice)


def cmd_normal_fan(args, P: HPolyhedron) -> Dict:
    return {
        "d": P.dim,
        "faces": [dict(face_to_dict(F), cone=vcone_to_dict(normal_cone(P, F))) for F in P.lattice],
    }


def cmd_cells(args, P: HPolyhedron) -> Dict:
    lattice = P.lattice
    return {
        "d": P.dim,
        "cells": [{"face": face_id, "dim": lattice[face_id].dim, "hrep": system_to_dict(hrep)}
                  for face_id, hrep in oracle_cell_hreps(P)],
    }


def cmd_phi(args, P: HPolyhedron) -> Dict:
    return phi_report_to_dict(phi_at(P, _point(args, P)))


def cmd_verify(args, P: HPolyhedron) -> Dict:
    strategy = SampleStrategy(random_samples=args.samples, seed=args.seed, workers=args.workers)
    return verify_report_to_dict(verify_theorem(P, strategy, strict=False))


def cmd_euler(args, P: HPolyhedron) -> Dict:
    total = euler_sum(P)
    return {"euler_sum": total, "is_subspace": len(P.implicit) == P.nrows, "dim": P.aff_dim}


def cmd_decompose(args, P: HPolyhedron) -> Dict:
    return decomposition_to_dict(decompose(P))


def cmd_covering(args, P: HPolyhedron) -> Dict:
    witness = covering_witness(P, _point(args, P))
    return {
        "face": face_to_dict(witness.face, with_witness=False),
        "x": rationals_to_json(witness.x),
        "u": rationals_to_json(witness.u),
    }


def cmd_project(args, P: HPolyhedron) -> Dict:
    y = _point(args, P)
    return {"point": rationals_to_json(y), "projection": rationals_to_json(covering_witness(P, y).x)}


def cmd_psi(args, P: HPolyhedron) -> Dict:
    y = _point(args, P)
    return {"point": rationals_to_json(y), "psi": rationals_to_json(psi(P, y))}


def cmd_degree(args, P: HPolyhedron) -> Dict:
    z = _point(args, P)
    degree = degree_at(P, z)
    return {"point": rationals_to_json(z), "regular": degree is not None, "degree": degree}


def cmd_strata(args, P: HPolyhedron) -> Dict:
    x = _point(args, P)
    strata = strata_at(P, x)
    return {
        "point": rationals_to_json(x),
        "strata": [{"G": s.G, "H": s.H} for s in strata],
        "intervals_disjoint": check_interval_disjoint(P, x),
    }


def cmd_localize(args, P: HPolyhedron) -> Dict:
    lattice = P.lattice
    if args.g is None or args.h is None:
        raise UsageError("'localize' needs --g and --h face ids")
    if not (0 <= args.g < len(lattice) and 0 <= args.h < len(lattice)):
        raise UsageError(f"Face ids must lie in 0..{len(lattice) - 1}")
    G, H = lattice[args.g], lattice[args.h]
    payload = local_cone_to_dict(localize(P, G, H))
    if args.point is not None:
        payload["safe_radius"] = format_rational(safe_radius(P, G, H, parse_point(args.point, P.dim)))
    return payload


COMMANDS = {
    "faces": cmd_faces,
    "normal-fan": cmd_normal_fan,
    "cells": cmd_cells,
    "phi": cmd_phi,
    "verify": cmd_verify,
    "euler": cmd_euler,
    "decompose": cmd_decompose,
    "covering": cmd_covering,
    "project": cmd_project,
    "psi": cmd_psi,
    "degree": cmd_degree,
    "strata": cmd_strata,
    "localize": cmd_localize,
}


def cmd_gen(args) -> Dict:
    spec = GenSpec(args.seed, args.dim, args.constraints, args.kind,
                   args.bound, args.lineality if args.kind == InstanceKind.WITH_LINEALITY else 0,
                   args.base_kind)
    return {"spec": spec.to_dict(), "instance": polyhedron_to_dict(gen_instance(spec))}


def cmd_verify_corpus(args) -> Dict:
    results = []
    for path, spec, P in load_corpus(args.directory):
        strategy = SampleStrategy(random_samples=args.samples, seed=args.seed, workers=args.workers)
        report = verify_theorem(P, strategy, strict=False)
        entry: Dict[str, Any] = {"file": path.name, "kind": spec.kind if spec else None,
                                 **verify_report_to_dict(report)}
        if args.strata:
            rng = random.Random(args.seed)
            failed = []
            for x in boundary_samples(P, 1, args.seed):
                checks = check_strata(P, x, rng)
                if not all(checks.values()):
                    failed.append({"point": rationals_to_json(x), "checks": checks})
            entry["strata_failures"] = failed
        results.append(entry)
    return {"instances": len(results), "results": results}


def _pretty(value: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    if isinstance(value, dict):
        lines = []
        for key, item in value.items():
            if isinstance(item, (dict, list)) and item:
                lines.append(f"{pad}{key}:")
                lines += _pretty(item, indent + 1)
            else:
                lines.append(f"{pad}{key}: {item}")
        return lines
    if isinstance(value, list):
        lines = []
        for item in value:
            if isinstance(item, dict):
                lines.append(f"{pad}-")
                lines += _pretty(item, indent + 1)
            else:
                lines.append(f"{pad}- {item}")
        return lines
    return [f"{pad}{value}"]


def emit(payload: Dict, fmt: str) -> None:
    if fmt == "pretty":
        print("\n".join(_pretty(payload)))
    else:
        print(json.dumps(payload, indent=2))


def _has_violation(command: str, payload: Dict) -> bool:
    if command == "verify":
        return bool(payload["violations"])
    if command == "verify-corpus":
        return any(r["violations"] or r.get("strata_failures") for r in payload["results"])
    return False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="normalfan",
        description="Exact face lattices, normal cones and the signed cell sum of H-polyhedra.",
    )
    parser.add_argument("--format", choices=("json", "pretty"), default="json",
                        help="Output format (json is stable, pretty is for humans).")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_command(name: str, help_text: str, point: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", type=Path, required=True, help="Polyhedron JSON file.")
        if point:
            p.add_argument("--point", type=str, required=True,
                           help="Comma-separated rationals, e.g. 2,1/2 (use --point=-1,2 for negatives).")
        return p

    instance_command("faces", "Face lattice dump.")
    instance_command("normal-fan", "Normal cone of every face.")
    instance_command("cells", "Explicit H-representation of every cell F - N(P,F).")
    instance_command("phi", "Term-by-term evaluation of phi at a point.", point=True)
    verify = instance_command("verify", "Check phi against its predicted constant.")
    verify.add_argument("--samples", type=int, default=DEFAULT_RANDOM_SAMPLES, help="Random sample count.")
    verify.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Sampling seed.")
    verify.add_argument("--workers", type=int, default=VERIFY_WORKERS, help="Evaluation threads.")
    instance_command("euler", "Euler sum of a cone.")
    instance_command("decompose", "Lineality decomposition and predicted constant.")
    instance_command("covering", "Face F with the point in relint F + N(P,F).", point=True)
    instance_command("project", "Nearest point of P.", point=True)
    instance_command("psi", "Reflection of the point across its covering face.", point=True)
    instance_command("degree", "Degree of psi at a regular point.", point=True)
    instance_command("strata", "Strata (G, H) through the point.", point=True)
    localize_parser = instance_command("localize", "Local cone of a stratum (G, H).")
    localize_parser.add_argument("--g", type=int, required=True, help="Face id of G.")
    localize_parser.add_argument("--h", type=int, required=True, help="Face id of H.")
    localize_parser.add_argument("--point", type=str, default=None,
                                 help="Optional stratum point; adds the safe radius.")

    gen = sub.add_parser("gen", help="Generate a seeded random instance.")
    gen.add_argument("--kind", choices=list(InstanceKind.ALL), required=True, help="Instance class.")
    gen.add_argument("--dim", type=int, required=True, help="Ambient dimension.")
    gen.add_argument("--seed", type=int, required=True, help="Generator seed.")
    gen.add_argument("--constraints", type=int, default=4, help="Random rows.")
    gen.add_argument("--bound", type=int, default=DEFAULT_COEFFICIENT_BOUND, help="Coefficient bound.")
    gen.add_argument("--lineality", type=int, default=1, help="k for with_lineality.")
    gen.add_argument("--base-kind", choices=list(InstanceKind.LINEALITY_BASES), default=InstanceKind.POLYTOPE,
                     help="Full-rank base instance padded by with_lineality.")

    corpus = sub.add_parser("verify-corpus", help="Verify every instance of a corpus directory.")
    corpus.add_argument("directory", type=Path, help="Directory of <kind>-<seed>.json files.")
    corpus.add_argument("--samples", type=int, default=DEFAULT_RANDOM_SAMPLES, help="Random sample count.")
    corpus.add_argument("--seed", type=int, default=DEFAULT_SEED, help="Sampling seed.")
    corpus.add_argument("--workers", type=int, default=VERIFY_WORKERS, help="Evaluation threads.")
    corpus.add_argument("--strata", action="store_true",
                        help="Also check interval disjointness, the regrouped sum and localization.")
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT

    try:
        if args.command == "gen":
            payload = cmd_gen(args)
        elif args.command == "verify-corpus":
            payload = cmd_verify_corpus(args)
        else:
            P = load_polyhedron(args.input)
            payload = COMMANDS[args.command](args, P)
    except TheoremViolation as exc:
        emit({"violation": str(exc), "phi": phi_report_to_dict(exc.phi_report),
              "predicted": exc.predicted}, args.format)
        return EXIT_VIOLATION
    except CoverViolation as exc:
        emit({"violation": str(exc), "point": rationals_to_json(exc.point), "matches": exc.matches},
             args.format)
        return EXIT_VIOLATION
    except (LocalizationError, CertificateError) as exc:
        logger.error(f"{args.command} failed: {exc}", exc_info=True)
        emit({"violation": str(exc)}, args.format)
        return EXIT_VIOLATION
    except (NormalFanError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    emit(payload, args.format)
    return EXIT_VIOLATION if _has_violation(args.command, payload) else EXIT_OK


def main() -> None:
    logging.basicConfig(level=LOG_LEVEL)
    sys.exit(run())


if __name__ == "__main__":
    main()

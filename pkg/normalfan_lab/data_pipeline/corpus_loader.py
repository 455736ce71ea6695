# -*- coding: utf-8 -*-
"""
Utilities to write and read instance corpora.

A corpus is a directory holding one JSON file per generated instance, named
<kind>-<seed>.json, each carrying the GenSpec it came from and the instance
itself.  `verify-corpus` in the CLI consumes these directories; failing
seeds are kept verbatim for replay.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

BASE_DIR = Path(__file__).resolve().parent.parent
if str(BASE_DIR) not in sys.path:
    sys.path.insert(0, str(BASE_DIR))

from harness.generator import GenSpec, InstanceKind, gen_instance  # noqa: E402
from polyhedral_engine.config import LOG_LEVEL  # noqa: E402
from polyhedral_engine.errors import InputError  # noqa: E402
from polyhedral_engine.polyhedron import HPolyhedron  # noqa: E402
from polyhedral_engine.serialization import polyhedron_from_dict, polyhedron_to_dict  # noqa: E402

logger = logging.getLogger(__name__)

DEFAULT_OUTPUT = BASE_DIR / "data" / "corpus"


def write_corpus(directory: Path, specs: Iterable[GenSpec]) -> List[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for spec in specs:
        P = gen_instance(spec)
        path = directory / f"{spec.name}.json"
        payload = {"spec": spec.to_dict(), "instance": polyhedron_to_dict(P)}
        path.write_text(json.dumps(payload, indent=2), encoding="utf-8")
        written.append(path)
    logger.info(f"Wrote {len(written)} instances to {directory}")
    return written


def load_corpus(directory: Path) -> List[Tuple[Path, GenSpec, HPolyhedron]]:
    """
    Raises:
        InputError: if the directory is missing or a file is malformed
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"Corpus directory {directory} does not exist")
    entries = []
    for path in sorted(directory.glob("*.json")):
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise InputError(f"Cannot read {path.name}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"{path.name} is not valid JSON: {exc}") from exc
        if not isinstance(payload, dict) or "instance" not in payload:
            raise InputError(f"{path.name} has no 'instance' entry")
        try:
            spec = GenSpec.from_dict(payload["spec"]) if "spec" in payload else None
        except InputError as exc:
            raise InputError(f"{path.name}: {exc}") from exc
        entries.append((path, spec, polyhedron_from_dict(payload["instance"])))
    logger.info(f"Loaded {len(entries)} instances from {directory}")
    return entries


def default_specs(kinds: Sequence[str], count: int, dim: int, n_constraints: int,
                  seed_start: int = 0, lineality: int = 1) -> List[GenSpec]:
    specs = []
    for kind in kinds:
        for seed in range(seed_start, seed_start + count):
            if kind == InstanceKind.WITH_LINEALITY:
                specs.append(GenSpec(seed, dim, n_constraints, kind, lineality=lineality))
            else:
                specs.append(GenSpec(seed, dim, n_constraints, kind))
    return specs


def _parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Generate a corpus of seeded random instances.")
    parser.add_argument(
        "--kinds",
        type=str,
        nargs="+",
        choices=list(InstanceKind.ALL),
        default=[InstanceKind.POLYTOPE, InstanceKind.LINE_FREE_UNBOUNDED, InstanceKind.CONE],
        help="Instance kinds to generate.",
    )
    parser.add_argument("--count", type=int, default=10, help="Instances per kind.")
    parser.add_argument("--dim", type=int, default=2, help="Ambient dimension.")
    parser.add_argument("--constraints", type=int, default=4, help="Random rows per instance.")
    parser.add_argument("--seed-start", type=int, default=0, help="First seed; seeds are consecutive.")
    parser.add_argument("--lineality", type=int, default=1, help="Lineality dimension for with_lineality.")
    parser.add_argument(
        "--output",
        type=Path,
        default=DEFAULT_OUTPUT,
        help="Directory that will receive one JSON file per instance.",
    )
    return parser.parse_args()


def main() -> None:
    logging.basicConfig(level=LOG_LEVEL)
    args = _parse_args()
    specs = default_specs(args.kinds, args.count, args.dim, args.constraints,
                          args.seed_start, args.lineality)
    written = write_corpus(args.output, specs)
    print(f"Saved {len(written)} instances to {args.output}")

    kind_counts: Dict[str, int] = {}
    for spec in specs:
        kind_counts[spec.kind] = kind_counts.get(spec.kind, 0) + 1
    print("Kind breakdown:")
    for kind, count in sorted(kind_counts.items()):
        print(f"  {kind}: {count} instances")


if __name__ == "__main__":
    main()

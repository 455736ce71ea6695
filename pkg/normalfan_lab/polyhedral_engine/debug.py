# -*- coding: utf-8 -*-
"""
Debug instrumentation for theorem verification.
Tracks the verification pipeline (lattice, decomposition, samples, evaluation) for diagnostics.
"""

from typing import Dict, List, Any
from collections import defaultdict, Counter

MAX_REPORTED_VIOLATIONS = 100


class VerificationDebugger:
    """Tracks verify_theorem execution for debugging and diagnostics."""

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self.stages = []
        self.current_stage = None
        self.violations = []
        self.warnings = []
        self.errors = []
        self.stats = defaultdict(dict)

    def start_stage(self, stage_name: str, context: Dict = None):
        if not self.enabled:
            return

        self.current_stage = {"name": stage_name, "context": context or {}}
        self.stages.append(self.current_stage)

    def end_stage(self, result: Any = None):
        if not self.enabled or not self.current_stage:
            return

        if result is not None:
            self.current_stage["result"] = result

    def _stage_name(self) -> str:
        return self.current_stage["name"] if self.current_stage else "unknown"

    def log_lattice(self, f_vector: List[int], n_faces: int):
        """Log the face lattice that every sample is evaluated against."""
        if not self.enabled:
            return

        self.stats["lattice"] = {"faces": n_faces, "f_vector": list(f_vector)}

    def log_samples(self, kind: str, count: int):
        if not self.enabled:
            return

        self.stats["samples"][kind] = count

    def log_phi_values(self, values: List[int]):
        """Log the histogram of evaluated values."""
        if not self.enabled or not values:
            return

        histogram = Counter(values)
        self.stats["phi"] = {
            "histogram": {str(k): v for k, v in sorted(histogram.items())},
            "total_evaluated": len(values)
        }

    def log_violation(self, index: int, kind: str, point: List[str], phi: int):
        """Log a sample whose value disagrees with the prediction."""
        if not self.enabled:
            return

        self.violations.append({"index": index, "kind": kind, "point": point, "phi": phi})

    def add_warning(self, message: str):
        if self.enabled:
            self.warnings.append({"message": message, "stage": self._stage_name()})

    def add_error(self, message: str, exception: Exception = None):
        if self.enabled:
            error_info = {"message": message, "stage": self._stage_name()}
            if exception:
                error_info["exception_type"] = type(exception).__name__
                error_info["exception_message"] = str(exception)
            self.errors.append(error_info)

    def get_debug_info(self) -> Dict:
        if not self.enabled:
            return {}

        summary = {
            "total_violations": len(self.violations),
            "total_warnings": len(self.warnings),
            "total_errors": len(self.errors)
        }
        if self.stats.get("samples"):
            summary["total_samples"] = sum(self.stats["samples"].values())

        return {
            "stages": self.stages,
            "violations": self.violations[:MAX_REPORTED_VIOLATIONS],
            "stats": dict(self.stats),
            "warnings": self.warnings,
            "errors": self.errors,
            "summary": summary
        }

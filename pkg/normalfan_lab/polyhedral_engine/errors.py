# -*- coding: utf-8 -*-
"""
Exception hierarchy for the polyhedral engine.

Infeasibility, unboundedness and "no such point" are returned as values;
exceptions are reserved for invalid input and for falsified identities.
"""

from typing import Any, Optional, Sequence


class NormalFanError(Exception):
    """Base class for every error raised by the engine."""


class InputError(NormalFanError):
    """Malformed literal, JSON payload or argument."""


class DimensionMismatch(NormalFanError):
    """Vectors, rows or points of incompatible lengths."""


class EmptyPolyhedron(NormalFanError):
    """The inequality system has no solution."""


class InconsistentSystem(NormalFanError):
    """An affine equality system has no solution."""


class NotComparable(NormalFanError):
    """Two faces are not ordered by inclusion."""


class NotACone(NormalFanError):
    """The polyhedron is not a cone with apex at the origin."""


class ResampleLimitExceeded(NormalFanError):
    """Instance generation gave up after the configured number of attempts."""


class CertificateError(NormalFanError):
    """An LP status whose exact certificate failed its re-check."""


class CoverViolation(NormalFanError):
    """A point lies in zero or several sets relint F + N(P,F)."""

    def __init__(self, point: Sequence[Any], matches: Sequence[int]):
        self.point = tuple(point)
        self.matches = list(matches)
        super().__init__(
            f"Point {[str(v) for v in self.point]} matched {len(self.matches)} faces "
            f"(ids {self.matches}); exactly one expected"
        )


class StratumMismatch(NormalFanError):
    """The pair (G, H) is not a stratum of the query point."""


class TheoremViolation(NormalFanError):
    """An evaluated value disagrees with the predicted constant."""

    def __init__(self, point: Sequence[Any], phi_report: Any, predicted: int,
                 verify_report: Optional[Any] = None):
        self.point = tuple(point)
        self.phi_report = phi_report
        self.predicted = predicted
        self.verify_report = verify_report
        super().__init__(
            f"phi({[str(v) for v in self.point]}) = {getattr(phi_report, 'phi', phi_report)}, "
            f"predicted {predicted}"
        )


class LocalizationError(NormalFanError):
    """A localized face does not match its predicted face of the local cone."""

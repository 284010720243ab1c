"""Exception hierarchy with stable machine-readable codes.

Every error carries a ``code`` string that is preserved across the CLI
(exit-code mapping) and the HTTP service (JSON error bodies).
"""

from __future__ import annotations


class LabError(Exception):
    """Base class for all package errors."""

    code = "error"
    exit_code = 3

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class UsageError(LabError):
    """Malformed command or arguments; the session state is untouched."""

    code = "usage"
    exit_code = 2


class DomainError(LabError):
    """Inputs violate a physical or model precondition."""

    code = "domain"
    exit_code = 3


class ValidationError(LabError):
    """A scenario or record failed schema/invariant validation."""

    code = "validation"
    exit_code = 3


class CalibrationError(LabError):
    """Envelope calibration constraints are mutually unsatisfiable."""

    code = "calibration"
    exit_code = 3

    def __init__(self, message: str, violated: list[str] | None = None):
        super().__init__(message)
        self.violated = violated or []


class NoSignalError(LabError):
    """Data contain no resolvable feature to fit."""

    code = "no_signal"
    exit_code = 3


class IndeterminateAngleError(LabError):
    """Polarization fringe has no contrast; the angle is undefined."""

    code = "indeterminate_angle"
    exit_code = 3


class NeverReachesError(LabError):
    """Requested tuner target is unreachable with the drift direction/rate."""

    code = "never_reaches"
    exit_code = 3


class AlignmentError(LabError):
    """Rotation alignment cannot proceed (e.g. zero-visibility emitter)."""

    code = "alignment_impossible"
    exit_code = 3


class NotFoundError(LabError):
    """A referenced record or file does not exist."""

    code = "not_found"
    exit_code = 4

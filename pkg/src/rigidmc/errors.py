"""Exception hierarchy.

Every error carries a short machine-readable ``code``.  The CLI maps
exception classes to exit codes: InputError -> 2, MathError -> 3.
Verification mismatches (corpus reports) are not exceptions; the CLI
inspects the report and exits 1.
"""

from __future__ import annotations


class RigidmcError(Exception):
    code = "ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class InputError(RigidmcError):
    """Malformed file, unparsable literal, or schema violation."""

    code = "SCHEMA"


class MathError(RigidmcError):
    """A mathematical precondition was violated."""

    code = "PRECONDITION"


class StepFailedError(MathError):
    """Plan replay failed at a specific step."""

    code = "STEP_FAILED"

    def __init__(self, index: int, cause: Exception):
        super().__init__(f"step {index} failed: {cause}")
        self.index = index
        self.cause = cause


class StuckError(MathError):
    """Rank reduction found no strictly decreasing twist/convolution step."""

    code = "STUCK"

    def __init__(self, message: str, best_candidate=None):
        super().__init__(message)
        self.best_candidate = best_candidate

"""
Errors raised by the hereditary toolkit and their mapping to exit codes
"""

from typing import Any

from django.core.management.base import CommandError

# exit codes of the command line
EXIT_OK = 0
EXIT_FAILS = 1
EXIT_INDETERMINATE = 2
EXIT_USAGE = 3


class HereditaryError(Exception):
    """
    Base class. `witness` carries whatever the caller needs to inspect the failure.
    """

    exit_code = EXIT_FAILS
    code = "hereditary-error"

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.message = message
        self.witness = witness

    def to_dict(self) -> dict:
        return {"error": self.code, "message": self.message}


class InvalidArgumentError(HereditaryError):
    exit_code = EXIT_USAGE
    code = "invalid-argument"


class SingularAtOriginError(HereditaryError):
    code = "singular-at-origin"


class OutOfDomainError(HereditaryError):
    exit_code = EXIT_USAGE
    code = "out-of-domain"


class SeriesOverflowError(HereditaryError):
    """Coefficients left the range of 64-bit floats."""

    code = "series-overflow"


class InversionError(HereditaryError):
    """The re-multiplied product of a series and its reciprocal is not 1 to tolerance."""

    code = "inversion-residual"


class GenerationFailedError(HereditaryError):
    code = "generation-failed"


class NotPSDError(HereditaryError):
    code = "not-psd"

    def __init__(self, message: str, min_eigenvalue: float) -> None:
        super().__init__(message, witness=min_eigenvalue)
        self.min_eigenvalue = min_eigenvalue


class ConvergenceNotCertifiedError(HereditaryError):
    """Raised with the partial result attached as `witness`."""

    code = "convergence-not-certified"


class UnboundedShiftError(HereditaryError):
    code = "unbounded-shift"


class TailUncertifiableError(HereditaryError):
    code = "tail-uncertifiable"


class ModelInvalidError(HereditaryError):
    code = "model-invalid"


class PreconditionError(HereditaryError):
    code = "precondition-failed"


class UnsupportedRegimeError(HereditaryError):
    exit_code = EXIT_USAGE
    code = "unsupported-regime"


class NotConvergedError(HereditaryError):
    code = "not-converged"


class KernelSpecSyntaxError(HereditaryError):
    """
    Syntax error in a kernel specification.
    `offset` is a byte offset into the UTF-8 encoded text.
    """

    exit_code = EXIT_USAGE
    code = "syntax-error"

    def __init__(self, message: str, offset: int, expected: tuple[str, ...]) -> None:
        super().__init__(
            f"{message} at byte {offset}, expected one of: {', '.join(expected)}",
            witness={"offset": offset, "expected": list(expected)},
        )
        self.offset = offset
        self.expected = expected


class KernelSpecSemanticError(HereditaryError):
    exit_code = EXIT_USAGE
    code = "semantic-error"

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at byte {offset}", witness={"offset": offset})
        self.offset = offset


def command_error_from(exc: HereditaryError, context: str) -> CommandError:
    """
    Wrap a toolkit error into a CommandError carrying the error's exit code,
    prefixed with the subcommand context.
    """
    return CommandError(f"{context}: [{exc.code}] {exc.message}", returncode=exc.exit_code)

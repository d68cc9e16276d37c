"""Exception types shared across the pipeline.

Each class carries the CLI exit code used when the corresponding stage fails,
so the command layer can map failures without isinstance ladders.
"""

from __future__ import annotations


class GreenlemError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(GreenlemError):
    """Malformed user input: bad dimensions, bad files, bad parameters."""

    exit_code = 2


class DomainValidationError(GreenlemError):
    """Domain failed semantic validation (unbounded, empty, bad weights)."""

    exit_code = 3

    def __init__(self, report, message: str = "domain validation failed"):
        super().__init__(message)
        self.report = report


class SelectionBudgetError(GreenlemError):
    """Support-piece refinement exhausted its budget before reaching target."""

    exit_code = 4

    def __init__(self, best_error: float, resolution: int):
        super().__init__(
            f"piece selection budget exhausted at resolution {resolution}; "
            f"best shell error {best_error:.6g}"
        )
        self.best_error = best_error
        self.resolution = resolution


class GeneralPositionError(GreenlemError):
    """No general-position witness found within the retry budget."""

    exit_code = 5

    def __init__(self, witness):
        super().__init__(f"general position failed; violating index set {witness}")
        self.witness = witness


class ConvergenceCapError(GreenlemError):
    """Power schedule cap reached before the convergence target."""

    exit_code = 6

    def __init__(self, best_s: int, best_error: float, cap: int):
        super().__init__(
            f"s cap {cap} reached; best s={best_s} with error {best_error:.6g}"
        )
        self.best_s = best_s
        self.best_error = best_error
        self.cap = cap


class CertificateError(GreenlemError):
    """Sandwich certificate failed one of its margin checks."""

    exit_code = 7

    def __init__(self, certificate, message: str = "sandwich certificate failed"):
        super().__init__(message)
        self.certificate = certificate


class RefutationError(GreenlemError):
    """A stored certificate was refuted on re-verification."""

    exit_code = 8


class ExpansionCapError(InputError):
    """Symbolic expansion would exceed the term cap; test without the oracle."""

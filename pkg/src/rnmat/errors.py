"""Exception types shared across the package."""


class RnmatError(Exception):
    """Base class for all package-specific errors."""


class FormulaSyntaxError(RnmatError):
    """Raised by the formula parser; carries the byte offset of the failure."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class AlgebraMismatchError(RnmatError):
    """Two values from different Boolean algebras were combined."""


class ElementSyntaxError(RnmatError):
    """Malformed element or algebra literal."""


class CarrierCapExceededError(RnmatError):
    """Snapshot carrier would exceed the configured size cap."""


class RowCapExceededError(RnmatError):
    """Entailment search aborted: row budget exhausted before a verdict.

    Carries the partial exploration statistics; no verdict is implied.
    """

    def __init__(self, rows_explored, rows_pruned_by_clause):
        super().__init__(
            f"row cap exceeded after {rows_explored} explored rows"
        )
        self.rows_explored = rows_explored
        self.rows_pruned_by_clause = rows_pruned_by_clause


class ClosureTooSmallError(RnmatError):
    """A valuation bridge needed a formula the closure does not contain."""


class NotAHomomorphismError(RnmatError):
    """A candidate snapshot map does not come from a Boolean homomorphism."""

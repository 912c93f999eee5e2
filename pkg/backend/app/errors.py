"""
Exception hierarchy.

Every error subclasses ValueError so callers can keep catching ValueError the
way the route handlers do; the CLI maps all of them to exit code 1.
Agent indices carried by errors are 1-based labels.
"""


class ConsensusFlowError(ValueError):
    """Base class for all library errors."""


class NegativeEntryError(ConsensusFlowError):
    def __init__(self, row: int, col: int, value: float):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(
            f"Negative entry {value!r} at ({row},{col})"
        )


class RowSumError(ConsensusFlowError):
    def __init__(self, row: int, deviation: float, tol: float):
        self.row = row
        self.deviation = deviation
        self.tol = tol
        super().__init__(
            f"Row {row} sums to 1{deviation:+.3g} (tolerance {tol:g})"
        )


class DimensionMismatchError(ConsensusFlowError):
    pass


class SizeBudgetError(ConsensusFlowError):
    pass


class DomainError(ConsensusFlowError):
    pass


class InfeasibleParameterError(ConsensusFlowError):
    pass


class UnsupportedSizeError(ConsensusFlowError):
    pass


class ResamplingBudgetError(ConsensusFlowError):
    def __init__(self, family: str, step: int, tries: int):
        self.family = family
        self.step = step
        self.tries = tries
        super().__init__(
            f"{family}: no accepted sample at step {step} after {tries} tries"
        )


class NonDisjointJetsError(ConsensusFlowError):
    def __init__(self, step: int, overlap: list[int]):
        self.step = step
        self.overlap = overlap
        super().__init__(f"Jets overlap at step {step}: agents {overlap}")


class NoPerfectMatchingError(ConsensusFlowError):
    """
    Hall's condition fails: the rows in `violator` only reach the columns in
    `neighbourhood`, and len(neighbourhood) < len(violator).
    """

    def __init__(self, violator: list[int], neighbourhood: list[int], delta: float):
        self.violator = violator
        self.neighbourhood = neighbourhood
        self.delta = delta
        super().__init__(
            f"No perfect matching above delta={delta:.6g}: rows {violator} "
            f"only reach columns {neighbourhood}"
        )


class MatchingStepError(ConsensusFlowError):
    def __init__(self, step: int, cause: NoPerfectMatchingError):
        self.step = step
        self.cause = cause
        super().__init__(f"Matching failed at step {step}: {cause}")


class ResidualError(ConsensusFlowError):
    def __init__(self, residual: float, tol: float):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"Absolute probability residual {residual:.3g} exceeds {tol:g}"
        )


class ChainFileError(ConsensusFlowError):
    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"[{', '.join(where)}] " if where else ""
        super().__init__(f"{prefix}{message}")

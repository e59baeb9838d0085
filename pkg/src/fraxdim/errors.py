"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: validation/config problems -> 2,
inconclusive finite-type detection -> 3, solver failures -> 4.
"""


class FraxdimError(Exception):
    exit_code = 1


class ParseError(FraxdimError):
    """Scene file is syntactically or structurally unusable."""

    exit_code = 2

    def __init__(self, message, path=""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class SemanticError(ParseError):
    """Scene parsed but violates a documented constraint."""


class ValidationFailure(FraxdimError):
    """A validator produced a non-empty violation report."""

    exit_code = 2

    def __init__(self, stage, report):
        self.stage = stage
        self.report = report
        super().__init__(f"{stage}: {report.summary()}")


class AssemblyRefused(FraxdimError):
    exit_code = 2

    def __init__(self, report):
        self.report = report
        super().__init__(f"GIFS assembly refused: {report.summary()}")


class InconclusiveFiniteType(FraxdimError):
    exit_code = 3


class LevelCapExceeded(InconclusiveFiniteType):
    def __init__(self, message, partial_report=None):
        self.partial_report = partial_report
        super().__init__(message)


class SolverFailure(FraxdimError):
    exit_code = 4


class NoConvergence(SolverFailure):
    def __init__(self, cap, last_estimates):
        self.cap = cap
        self.last_estimates = last_estimates
        super().__init__(
            f"power iteration did not converge in {cap} steps; last estimates {last_estimates}"
        )


class DegenerateSystem(SolverFailure):
    pass


class NoRootInInterval(FraxdimError):
    exit_code = 2


class RootNotGreaterThanOne(FraxdimError):
    exit_code = 2


class FieldMismatch(FraxdimError):
    exit_code = 2


class DivisionByZero(FraxdimError, ZeroDivisionError):
    exit_code = 2


class NonAdjacentEdges(FraxdimError):
    exit_code = 2


class BranchDomainGap(FraxdimError):
    exit_code = 2


class DepthTooLarge(FraxdimError):
    exit_code = 2


class InconsistentRepresentatives(FraxdimError):
    """Refinement claimed a fixed point but representatives disagree."""

    exit_code = 4

"""Exception types shared across the library."""


class Error(Exception):
    """Base class for all hhbounds errors."""


class ParseError(Error):
    """Source text does not match the expression grammar."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownFunctionError(ParseError):
    """A call names a function the grammar does not provide."""

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown function '{name}'", offset)
        self.name = name


class EvaluationError(Error):
    """A function value could not be produced at the requested point."""


class DomainError(EvaluationError):
    """Operand outside the mathematical domain of an operation."""


class NonDifferentiableError(EvaluationError):
    """Derivative requested where the one-sided derivatives disagree."""


class NoConvergenceError(Error):
    """Quadrature exhausted its budget before reaching the tolerance."""


class PanelLimitError(Error):
    """Bracketing exceeded the panel budget."""


class HypothesisFalsifiedError(Error):
    """Sampling refuted the convexity hypothesis a routine relies on."""

    def __init__(self, verdict):
        super().__init__(f"convexity hypothesis falsified: {verdict.witness}")
        self.verdict = verdict

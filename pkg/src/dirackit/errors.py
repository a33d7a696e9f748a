"""Exception hierarchy shared by every stage of the analyzer."""


class DiracKitError(Exception):
    """Base class for all errors raised by this package."""


class VarTableMismatch(DiracKitError, ValueError):
    """Two expressions built over different variable tables were combined."""


class UndeclaredVariable(DiracKitError, KeyError):
    def __str__(self):
        return f"undeclared variable {self.args[0]!r}"


class ModelError(DiracKitError):
    """A model file is syntactically or semantically invalid."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(f"{where}{message}")


class AlgorithmError(DiracKitError):
    """The constraint algorithm could not produce a consistent analysis."""


class NonTerminatingError(AlgorithmError):
    pass


class InconsistentModelError(AlgorithmError):
    pass


class ClassificationError(AlgorithmError):
    pass


class ClosureError(AlgorithmError):
    pass


class UnsupportedError(DiracKitError):
    """Input lies outside the supported polynomial / affine / p-degree class."""

"""Exception hierarchy. ``exit_code`` is what the CLI returns for each family."""


class QMacroError(Exception):
    exit_code = 1


class ValidationError(QMacroError, ValueError):
    exit_code = 2


class WindowError(ValidationError):
    """Precision or time argument lies outside the admissible window."""


class ConventionError(ValidationError):
    """Request conflicts with the orthogonal-branch (delta = 0) convention."""


class DegenerateSuperpositionError(ValidationError):
    """The two branches coincide up to a global phase."""


class NormalizationRequiredError(ValidationError):
    """Maximization over an unbounded family without a usable normalization."""


class NumericalError(QMacroError, ArithmeticError):
    exit_code = 3


class TruncationError(NumericalError):
    """Fock truncation too small for the requested state or operator."""


class CapacityError(QMacroError, MemoryError):
    exit_code = 4

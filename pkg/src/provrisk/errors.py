"""Exception types shared across the engine."""


class EngineError(Exception):
    """Base class for every error the engine raises on purpose."""


class StructuralError(EngineError):
    """Shapes disagree: wrong vector length, duplicate ids, mismatched factor sets."""


class DomainError(EngineError):
    """A value lies outside its documented domain (negative score, fraction > 1, ...)."""


class DegenerateInputError(EngineError):
    """Input is structurally fine but carries no usable signal, e.g. all zeros."""


class EmptyInputError(EngineError):
    """An operation that needs at least one element received none."""


class UndefinedCorrelationError(DegenerateInputError):
    """Correlation requested for a constant vector."""


class StrictPolicyError(EngineError):
    """Strict validation policy rejected the input.

    Carries the per-factor diagnostics so callers can report exactly which
    rows were off and by how much.
    """

    def __init__(self, message: str, diagnostics):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


class ParseError(EngineError):
    """A stored file could not be parsed; the message names the file and row."""


class SchemaVersionError(EngineError):
    """The workspace on disk uses a schema this build does not understand."""


class IntegrityError(EngineError):
    """A cross-entity reference is broken, e.g. an assessment against a
    weight-profile version that does not exist."""

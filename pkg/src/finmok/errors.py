"""Exception hierarchy shared by the finmok modules."""


class FinmokError(Exception):
    """Base class for all library errors."""


class FormulaSyntaxError(FinmokError, ValueError):
    """Raised when formula text cannot be parsed.

    ``position`` is the 0-based character offset of the offending token,
    or ``None`` for errors that are not tied to one location (for example
    an arity clash between two occurrences of the same letter).
    """

    def __init__(self, message: str, position: int | None = None):
        self.message = message
        self.position = position
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class EvaluationError(FinmokError, ValueError):
    """Raised when a formula cannot be evaluated against a model."""


class NonMonadicError(FinmokError, ValueError):
    """Raised when a decision procedure receives a non-monadic formula."""


class InfeasibleProfileError(FinmokError, ValueError):
    """Raised for per-world domain sizes that contradict the domain conditions."""


class ModelFormatError(FinmokError, ValueError):
    """Raised when frame/model/corpus JSON is malformed."""

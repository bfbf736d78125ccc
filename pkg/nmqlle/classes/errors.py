from typing import Optional


class QlleError(Exception):
    """Base class for failures raised by the embedding pipeline."""


class StageError(QlleError):
    """A pipeline stage failed; keeps the stage name and the original error."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")


class WeightSolveError(QlleError):
    def __init__(self, index: int, reason: str = "singular local Gram matrix"):
        self.index = index
        super().__init__(f"Cannot solve reconstruction weights for sample {index}: {reason}")


class EmbeddingError(QlleError):
    pass


class DatasetError(ValueError):
    """Feature file could not be parsed; carries the path and line when known."""

    def __init__(self, path, message: str, line: Optional[int] = None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")

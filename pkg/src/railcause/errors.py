"""Exception types shared across the package."""


class RailcauseError(Exception):
    """Base class for errors raised by this package."""


class ConfigError(RailcauseError):
    """Invalid or inconsistent run configuration."""


class DataError(RailcauseError):
    """Input data violates a documented contract."""


class InvalidCauseCodeError(DataError):
    """Cause code does not match the one-letter-plus-digits scheme."""


class UnsplittableClassError(DataError):
    """A class has too few records to produce a stratified split."""


class EmbeddingParseError(DataError):
    """Malformed line in an embedding text file."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class NonFiniteGradientError(RailcauseError):
    """A gradient contained NaN or infinity."""

    def __init__(self, param_name: str):
        super().__init__(f"non-finite gradient for parameter {param_name!r}")
        self.param_name = param_name


class TrainingDivergedError(RailcauseError):
    """Training loss became non-finite."""

    def __init__(self, message: str, epoch: int | None = None, batch: int | None = None):
        where = []
        if epoch is not None:
            where.append(f"epoch {epoch}")
        if batch is not None:
            where.append(f"batch {batch}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.epoch = epoch
        self.batch = batch

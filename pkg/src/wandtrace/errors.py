"""Exception types shared across the package."""


class WandtraceError(Exception):
    """Base class for all package-specific errors."""


class DatasetFormatError(WandtraceError):
    """A CSV row violates the 785-column label+pixels layout."""

    def __init__(self, row: int, message: str):
        self.row = row
        super().__init__(f"row {row}: {message}")


class EmptyResultError(WandtraceError):
    """A filter removed every sample."""


class DegenerateSplitError(WandtraceError):
    """A train/test split would leave one side empty."""


class SingleClassError(WandtraceError):
    """Training data contains fewer than two distinct labels."""


class DimensionMismatchError(WandtraceError):
    """A feature vector does not match the model's expected dimension."""


class EmptyTestSetError(WandtraceError):
    """Evaluation was asked to score an empty dataset."""


class EmptyPatternError(WandtraceError):
    """An all-zero image reached feature extraction."""


class WrongPhaseError(WandtraceError):
    """A trace operation was called in a phase that does not allow it."""


class UnsupportedLetterError(WandtraceError):
    """No gesture template exists for the requested letter."""


class BlobOutOfBoundsError(WandtraceError):
    """A synthesized blob center left the frame."""


class ModelFormatError(WandtraceError):
    """A model file has the wrong magic line or a malformed body."""


class ModelChecksumError(ModelFormatError):
    """A model file's CRC32 does not match its body."""


class ProtocolError(WandtraceError):
    """A session message arrived out of order or malformed."""

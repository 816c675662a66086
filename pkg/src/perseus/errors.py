"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`PerseusError`
so callers (and the CLI) can map categories to exit codes.
"""


class PerseusError(Exception):
    pass


class PreconditionError(PerseusError, ValueError):
    pass


class MalformedPayloadError(PerseusError, ValueError):
    pass


class LengthMismatchError(PerseusError, ValueError):
    pass


class InvalidBoundsError(PerseusError, ValueError):
    pass


class GenerationFailureError(PerseusError, RuntimeError):
    pass


class InvalidRangeError(PerseusError, ValueError):
    pass


class ParametersTooLargeError(PerseusError, ValueError):
    pass


class HypothesisSpaceTooLargeError(PerseusError, ValueError):
    pass


class EmptyInputError(PerseusError, ValueError):
    pass


class FormatError(PerseusError, ValueError):
    pass


class CorruptionError(PerseusError, ValueError):
    pass


class InvalidParamsError(PerseusError, ValueError):
    pass


class SequenceError(PerseusError, ValueError):
    pass


class IntegrityError(PerseusError):
    """Received symbols are inconsistent with the code they claim to come from."""

    def __init__(self, message, chunk_index=None):
        if chunk_index is not None:
            message = f"chunk {chunk_index}: {message}"
        super().__init__(message)
        self.chunk_index = chunk_index


class AmbiguousDecodeError(PerseusError):
    """The received symbols do not pin down a unique message."""

    def __init__(self, deficit, chunk_index=None):
        message = f"rank deficit {deficit}: message is not uniquely determined"
        if chunk_index is not None:
            message = f"chunk {chunk_index}: {message}"
        super().__init__(message)
        self.deficit = deficit
        self.chunk_index = chunk_index

"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class FrameError(Exception):
    exit_code = 4


class OrderTooLarge(FrameError):
    pass


class WrongGroupKind(FrameError):
    pass


class NotProjective(FrameError):
    pass


class NotHomomorphism(FrameError):
    pass


class InconsistentDegree(FrameError):
    pass


class DimMismatch(FrameError):
    pass


class NotAFrame(FrameError):
    exit_code = 2


class NotOvercomplete(FrameError):
    exit_code = 3


class NotSubcritical(FrameError):
    pass


class TruncationTooDeep(FrameError):
    pass


class GammaNotSubset(FrameError):
    pass


class GammaNotRemovable(FrameError):
    pass


class PipelineExhausted(FrameError):
    pass


class SchemaError(FrameError):
    """Malformed input document; ``pointer`` is a JSON pointer to the offending node."""

    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")

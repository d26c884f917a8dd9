"""Engine failures (as opposed to bad input, which raises ``ValueError``)."""


class EngineError(Exception):
    pass


class DeepeningCapError(EngineError):
    pass


class CertificationError(EngineError):
    """A description disagreed with exact membership; ``point`` is the witness."""

    def __init__(self, point, message: str = ""):
        super().__init__(message or f"certification failed at {point}")
        self.point = point

"""Exception hierarchy shared by every layer of the pipeline"""


class PsganError(Exception):
    """Base class for all pipeline errors"""

    exit_code = 2


class ConfigError(PsganError):
    exit_code = 1


class UsageError(PsganError):
    exit_code = 1


class DataError(PsganError):
    exit_code = 2


class InvalidBox(DataError):
    pass


class BoxTooLarge(DataError):
    pass


class SceneTooSmall(DataError):
    pass


class OutOfBounds(DataError):
    pass


class ShapeError(DataError):
    pass


class ShapeMismatch(DataError):
    pass


class CropTooSmall(DataError):
    pass


class DomainError(DataError):
    pass


class EmptyDataset(DataError):
    pass


class CorruptCheckpoint(DataError):
    pass


class AnnotationError(DataError):
    pass


class NumericError(PsganError):
    exit_code = 3


class NanDetected(NumericError):
    """A loss or parameter tensor stopped being finite"""

    def __init__(self, component):
        super().__init__(f'non-finite value detected in {component}')
        self.component = component

"""Exception hierarchy shared by all packages."""


class MagnusForestError(ValueError):
    """Base class for every error raised by the library."""


class TreeParseError(MagnusForestError):
    """Malformed tree text; ``offset`` is the byte offset of the first bad character."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class TruncationMismatchError(MagnusForestError):
    """Binary operation on series with different truncation degrees."""


class AugmentationError(MagnusForestError):
    """Constant term violates the operation's precondition."""


class UnitHalfProductError(MagnusForestError):
    """Half-product involving the unit where it is undefined."""


class DimensionMismatchError(MagnusForestError):
    """Matrix paths of different dimensions."""


class InvalidLevelsError(MagnusForestError):
    """Level map that is not a decreasing bijection."""


class InvalidPermutationError(MagnusForestError):
    """Word that is not a permutation, or standardization of a word with repeats."""


class DegreeError(MagnusForestError):
    """Degree or range precondition violated."""


class ResourceCapError(MagnusForestError):
    """Requested degree exceeds a configured safety cap."""


class PathFormatError(MagnusForestError):
    """Malformed path JSON."""


class ConfigurationError(MagnusForestError):
    """Invalid command configuration."""

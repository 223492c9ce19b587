class CubeColorError(Exception):
    """Base class for library errors."""


class DimensionError(CubeColorError, ValueError):
    """A vertex or dimension outside the supported range."""


class InstanceTooLarge(CubeColorError):
    """An exhaustive computation was refused by its size guard."""


class NotInFstar(CubeColorError, ValueError):
    """A coloring handed to the template decomposition is not in F*.

    ``condition`` names the first failed membership condition.
    """

    def __init__(self, condition: str):
        super().__init__("coloring is not in F*: %s" % condition)
        self.condition = condition


class AuditFailure(CubeColorError):
    """An invariant audit found a violation."""

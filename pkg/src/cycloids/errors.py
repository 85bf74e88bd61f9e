"""Exception types shared across the package."""


class CycloidError(ValueError):
    """A parameter or precondition outside the domain of an operation."""


class ParameterError(CycloidError):
    pass


class NotEnabledError(CycloidError):
    """Raised when firing a transition whose preset (or postset) forbids it."""

    def __init__(self, transition, place, message=None):
        self.transition = transition
        self.place = place
        super().__init__(message or f"{transition} is not enabled: violated at place {place}")


class ResourceError(RuntimeError):
    """A configured size or state bound was exceeded."""


class ParseError(ValueError):
    def __init__(self, message, path="$"):
        self.path = path
        super().__init__(f"{path}: {message}")

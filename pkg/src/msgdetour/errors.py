"""Exception hierarchy shared by every module."""


class MsgDetourError(Exception):
    pass


class GraphValidationError(MsgDetourError, ValueError):
    """Raised for self-loops, out-of-range endpoints and similar invariant breaks."""


class ParseError(MsgDetourError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SchemaError(MsgDetourError, ValueError):
    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")


class ResourceError(MsgDetourError, RuntimeError):
    """A state-count or size budget was exceeded."""


class NumericalError(MsgDetourError, ArithmeticError):
    pass

"""Exception types shared across the toolkit."""


class AugbiasError(Exception):
    """Base class for all toolkit errors."""


class InputConsistencyError(AugbiasError):
    """Inputs reference unknown samples/classes or violate an invariant."""


class FormatError(AugbiasError):
    """A file did not match the documented format."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        prefix = ""
        if path is not None:
            prefix = f"{path}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        super().__init__(prefix + message)

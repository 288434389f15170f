"""Exception hierarchy shared by all modules."""


class GridError(ValueError):
    """Base class for every error raised by gridid."""


class ParameterError(GridError):
    """An argument is outside its documented range."""


class InsufficientWindowError(GridError):
    """A query touches vertices whose codeword status is unknown."""


class UncoveredVertexError(GridError):
    """A vertex has an empty I-set, so its share contribution is undefined."""

    def __init__(self, vertex):
        super().__init__(f"vertex {tuple(vertex)} is not covered by any codeword")
        self.vertex = tuple(vertex)


class PatternParseError(GridError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column

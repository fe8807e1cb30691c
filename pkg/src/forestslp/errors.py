"""Exception hierarchy shared by all grammar kinds."""


class GrammarError(Exception):
    """Base class for everything this package raises on bad input."""


class ForestSyntaxError(GrammarError, ValueError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class UnknownLabelError(GrammarError, KeyError):
    def __init__(self, name):
        super().__init__(name)
        self.name = name

    def __str__(self):
        return f"unknown label {self.name!r}"


class GrammarSyntaxError(GrammarError, ValueError):
    def __init__(self, message, line=None):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line


class CycleError(GrammarError):
    """The edge relation of a straight-line program is not acyclic."""


class UndefinedOperationError(GrammarError):
    """A right-hand side applies a partial operation outside its domain."""

    def __init__(self, variable, message):
        super().__init__(f"variable {variable}: {message}")
        self.variable = variable


class RankViolation(UndefinedOperationError):
    pass


class RootLabelMismatch(UndefinedOperationError):
    pass


class BottomLabelMismatch(UndefinedOperationError):
    pass


class ExplosionGuardError(GrammarError):
    """Decompression would produce more symbols than the configured cap."""

    def __init__(self, length, cap):
        super().__init__(f"value has length {length}, cap is {cap}")
        self.length = length
        self.cap = cap


class NotNormalFormError(GrammarError):
    pass


class NotATreeError(GrammarError):
    pass


class TreeTooSmallError(GrammarError):
    pass


class NotAnFcnsImageError(GrammarError):
    def __init__(self, variable, message):
        super().__init__(f"variable {variable}: {message}")
        self.variable = variable

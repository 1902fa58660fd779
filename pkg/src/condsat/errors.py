"""Exception hierarchy shared by all condsat modules."""


class CondsatError(Exception):
    """Base class for every error raised by the library."""


class DomainMismatch(CondsatError):
    pass


class CodomainMismatch(CondsatError):
    pass


class LabelClash(CondsatError):
    pass


class NotIso(CondsatError):
    pass


class NotMono(CondsatError):
    pass


class BackendMismatch(CondsatError):
    pass


class InterfaceMismatch(CondsatError):
    pass


class NotLeftLinear(CondsatError):
    pass


class ArityMismatch(CondsatError):
    pass


class NoMatchingProjection(CondsatError):
    pass


class BoundExceeded(CondsatError):
    pass


class IllFormed(CondsatError):
    def __init__(self, path, message):
        super().__init__(f"{message} at child path {list(path)}")
        self.path = tuple(path)


class NotAlternating(CondsatError):
    pass


class NotRightInverse(CondsatError):
    pass


class NotUniversal(CondsatError):
    pass


class EmptyExistential(CondsatError):
    pass


class BranchNotTerminal(CondsatError):
    pass


class ConfigError(CondsatError):
    pass


class ParseError(CondsatError):
    def __init__(self, line, col, expected, found=""):
        exp = ", ".join(sorted(expected))
        msg = f"line {line}, column {col}: expected {exp}"
        if found:
            msg += f", found {found!r}"
        super().__init__(msg)
        self.line = line
        self.col = col
        self.expected = frozenset(expected)


class TypeCheckError(CondsatError):
    """An arrow in a parsed condition does not chain with its parent."""

    def __init__(self, path, message):
        super().__init__(f"{message} at child path {list(path)}")
        self.path = tuple(path)

"""Exception hierarchy shared across the package."""


class MultivendorError(Exception):
    pass


class ParseError(MultivendorError):
    """Malformed input file. Carries the position when it is known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class ValidationError(MultivendorError):
    """Well-formed input that breaks one or more scenario invariants."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnknownSupplier(MultivendorError, KeyError):
    def __str__(self) -> str:
        return Exception.__str__(self)


class InstanceTooLarge(MultivendorError):
    pass


class TooManySuppliers(MultivendorError):
    pass


class InvalidParameters(MultivendorError, ValueError):
    pass


class EmptyDistribution(MultivendorError, ValueError):
    pass

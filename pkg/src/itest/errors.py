"""Exception types raised across the pipeline."""

from __future__ import annotations


class ItestError(Exception):
    """Base class for all toolchain errors."""


class UnbalancedDelimiter(ItestError):
    """A bracket or string literal is left open at end of line/file."""

    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: {reason}")


class MalformedChain(ItestError):
    """An inline-test chain could not be parsed into a declaration."""

    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: malformed inline test: {reason}")


class NoOracle(ItestError):
    """Chain declares no check_* call."""

    def __init__(self, path: str, line: int):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: inline test has no check_eq/check_true/check_false oracle")


class BadParameterization(ItestError):
    """Parameterized declaration with missing, non-list, or unequal given lists."""

    def __init__(self, path: str, line: int, reason: str):
        self.path = path
        self.line = line
        self.reason = reason
        super().__init__(f"{path}:{line}: bad parameterization: {reason}")


class NoTarget(ItestError):
    """No preceding non-inline-test statement exists at the test's indent."""

    def __init__(self, path: str, line: int):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: no target statement precedes this inline test at its indent")


class GroupOnNonHeader(ItestError):
    """Group(i) used while the target is not an if/while header."""

    def __init__(self, path: str, line: int):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: Group(i) requires an if/while header target")


class GroupIndexOutOfRange(ItestError):
    """Group(i) references more condition operands than the header has."""

    def __init__(self, index: int, available: int, path: str, line: int):
        self.index = index
        self.available = available
        self.path = path
        self.line = line
        super().__init__(
            f"{path}:{line}: Group({index}) out of range, header has {available} operand(s)"
        )


class InterpreterNotFound(ItestError):
    """The configured subject-language interpreter cannot be resolved."""

    def __init__(self, command: str):
        self.command = command
        super().__init__(f"interpreter not found: {command!r}")


class ProtocolViolation(ItestError):
    """A line between the result sentinels is not a valid result record."""

    def __init__(self, line_text: str):
        self.line_text = line_text
        super().__init__(f"invalid result record line: {line_text!r}")


class DestinationUnwritable(ItestError):
    """A report or rewrite destination cannot be written."""

    def __init__(self, destination: str, reason: str = ""):
        self.destination = destination
        self.reason = reason
        suffix = f": {reason}" if reason else ""
        super().__init__(f"cannot write {destination}{suffix}")

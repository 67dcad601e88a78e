"""Exception types shared across the simulator."""


class SmartCaneError(Exception):
    """Base class for all simulator errors."""


class DomainError(SmartCaneError, ValueError):
    """An argument lies outside the domain of an operation."""


class OutOfRangeError(DomainError):
    """A query falls outside the span of a lookup table."""


class FormatError(SmartCaneError, ValueError):
    """Malformed input text or data."""


class ScenarioError(FormatError):
    """A scenario file could not be parsed or violates an invariant.

    ``line`` is 1-based; ``directive`` is the upper-cased directive name,
    or ``None`` when the error is not tied to a single line.
    """

    def __init__(self, reason, line=None, directive=None):
        self.reason = reason
        self.line = line
        self.directive = directive
        where = []
        if line is not None:
            where.append(f"line {line}")
        if directive:
            where.append(directive)
        prefix = ": ".join([", ".join(where)]) + ": " if where else ""
        super().__init__(prefix + reason)

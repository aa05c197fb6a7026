"""Exception and warning classes raised across the package."""


class PvorosError(Exception):
    """Base class for all errors raised by pvoros."""


class DataError(PvorosError, ValueError):
    """Malformed or insufficient input data.

    ``line`` is the 1-based line number in the offending file, when known.
    """

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}"
            if line is not None:
                where += f":{line}"
            where += ": "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)


class ConfigError(PvorosError, ValueError):
    """Inconsistent or incomplete run configuration."""


class AssumptionError(PvorosError, ValueError):
    """Constraints, dataset, or cost range fall outside the supported regime."""


class DegenerateRegionError(PvorosError, ValueError):
    """The feasible region has zero area, so areas cannot be normalized."""

    def __init__(self, case, message=None):
        self.case = case
        super().__init__(message or f"feasible region is degenerate ({case}); it has zero area")


class InfeasiblePointError(PvorosError, ValueError):
    """An operating point violates the precision or capacity bound."""


class NoFeasiblePointWarning(UserWarning):
    """Only the never-alarm point of a curve is feasible."""

"""Exception types raised by hypergrowth.

Input problems (``ParseError``, ``ValidationError``, ``LabelNotFoundError``)
are distinguished from analysis problems (``AnalysisError`` and its
subclasses) so the CLI can map them onto different exit statuses.
"""


class HypergrowthError(Exception):
    pass


class ParseError(HypergrowthError, ValueError):
    """Malformed input text. ``line``/``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(HypergrowthError, ValueError):
    pass


class LabelNotFoundError(HypergrowthError, LookupError):
    def __init__(self, label, available):
        self.label = label
        self.available = list(available)
        super().__init__(
            f"row {label!r} not found; available rows: {', '.join(self.available)}"
        )

    def __str__(self):
        return self.args[0]


class AnalysisError(HypergrowthError):
    pass


class DegenerateInputError(AnalysisError, ValueError):
    pass


class InsufficientDataError(AnalysisError, ValueError):
    pass


class InfeasiblePartitionError(AnalysisError, ValueError):
    pass


class SingularityError(AnalysisError, ArithmeticError):
    def __init__(self, year, singularity):
        self.year = year
        self.singularity = singularity
        super().__init__(
            f"year {year} is at or beyond the singularity year {singularity:.6g}"
        )


class NothingToPlotError(HypergrowthError, ValueError):
    pass

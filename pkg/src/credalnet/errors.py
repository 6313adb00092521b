"""Exception types raised by credalnet.

Every exception carries a short ``kind`` string; the command line front end
prints it as ``ERROR <kind>: <detail>``.
"""


class CredalError(Exception):
    kind = "CredalError"


class ZeroEvidence(CredalError):
    kind = "ZeroEvidence"


class ZeroMarginal(CredalError):
    kind = "ZeroMarginal"


class Infeasible(CredalError):
    kind = "Infeasible"


class DimensionCap(CredalError):
    kind = "DimensionCap"


class CombinationLimit(CredalError):
    kind = "CombinationLimit"

    def __init__(self, count, limit):
        self.count = count
        self.limit = limit
        super().__init__(f"{count} selections exceed the limit of {limit}")


class EmptyRestriction(CredalError):
    kind = "EmptyRestriction"


class InfeasibleLocal(CredalError):
    kind = "InfeasibleLocal"


class InfeasibleSpec(CredalError):
    kind = "InfeasibleSpec"


class UnsupportedScale(CredalError):
    kind = "UnsupportedScale"


class CycleError(CredalError):
    kind = "CycleError"


class MissingCpt(CredalError):
    kind = "MissingCpt"


class NetworkSyntaxError(CredalError):
    """Malformed network text; ``line`` and ``column`` are 1-based."""

    kind = "SyntaxError"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" if line is not None else ""
        if column is not None:
            where += f", column {column}"
        super().__init__(f"{where}: {message}" if where else message)

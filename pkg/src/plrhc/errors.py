"""Exception hierarchy shared across the package.

Every error carries a short ``kind`` string used by the CLI for its
machine-parsable ``ERROR <kind>:`` prefix.
"""


class PlrhcError(Exception):
    kind = "Error"


class ParseError(PlrhcError):
    kind = "ParseError"

    def __init__(self, row, col, token):
        self.row = row
        self.col = col
        self.token = token
        super().__init__(f"non-binary token {token!r} at row {row}, column {col}")


class ShapeError(PlrhcError):
    kind = "ShapeError"


class EmptyInput(PlrhcError):
    kind = "EmptyInput"


class InvalidBlanket(PlrhcError):
    kind = "InvalidBlanket"


class BlanketTooLarge(PlrhcError):
    kind = "BlanketTooLarge"


class InvalidDimension(PlrhcError):
    kind = "InvalidDimension"


class InvalidSize(PlrhcError):
    kind = "InvalidSize"


class TooLarge(PlrhcError):
    kind = "TooLarge"


class DegenerateTruth(PlrhcError):
    kind = "DegenerateTruth"


class SearchBudgetExceeded(PlrhcError):
    kind = "SearchBudgetExceeded"

"""Exception types shared across the package."""


class PointfreeError(Exception):
    """Base class for all package errors."""


class CapExceeded(PointfreeError):
    """An enumeration would exceed the configured desk-scale cap."""

    def __init__(self, what, size, cap):
        super().__init__(f"{what} has size {size}, exceeding cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class ParseError(PointfreeError):
    """Syntax or semantic error in one of the text formats."""

    def __init__(self, message, line=None, col=None):
        loc = ""
        if line is not None:
            loc = f" at line {line}" + (f", col {col}" if col is not None else "")
        super().__init__(message + loc)
        self.message = message
        self.line = line
        self.col = col


class MixedPresentations(PointfreeError):
    """Two C-ideals from different presentations were combined."""


class NotDistributive(PointfreeError):
    """A lattice failed the distributivity law; carries a witness triple."""

    def __init__(self, witness):
        a, b, c = witness
        super().__init__(f"distributivity fails on triple ({a}, {b}, {c})")
        self.witness = witness


class NotACover(PointfreeError):
    """A subset claimed to cover the top element does not."""


class BudgetExhausted(PointfreeError):
    """A search ran out of its node budget; carries any partial result."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial

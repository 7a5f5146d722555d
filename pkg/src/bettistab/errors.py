"""Exception hierarchy shared by the engine and the command-line front end."""


class BettiStabError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class DimensionError(BettiStabError):
    pass


class ZeroIdealError(BettiStabError):
    pass


class UnitIdealError(BettiStabError):
    pass


class ExponentOverflowError(BettiStabError, OverflowError):
    pass


class NotEquigeneratedError(BettiStabError):
    def __init__(self, degrees):
        self.degrees = tuple(sorted(degrees))
        super().__init__(f"not equigenerated: generator degrees {sorted(set(self.degrees))}")


class MalformedInputError(BettiStabError):
    pass


class PreconditionError(BettiStabError):
    pass


class ContractError(BettiStabError):
    """Companion inputs disagree (e.g. Rees data header vs. ideal)."""


class CutoffExceededError(BettiStabError):
    pass


class ParseError(BettiStabError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class ResourceLimitError(BettiStabError):
    """A configured size or time budget was exhausted."""

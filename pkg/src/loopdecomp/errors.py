"""Exception hierarchy shared by every module."""


class LoopDecompError(Exception):
    """Base class for all engine errors."""


class ValidationError(LoopDecompError, ValueError):
    pass


class ContractError(LoopDecompError):
    """A caller broke an operation's precondition."""


class OutOfRangeError(LoopDecompError):
    pass


class NotApplicableError(LoopDecompError):
    pass


class ExcludedCaseError(LoopDecompError):
    pass


class SlotError(LoopDecompError):
    pass


class ParseError(LoopDecompError, ValueError):
    pass


class NotQuasiRegularError(LoopDecompError):
    def __init__(self, group, prime, condition):
        self.group = group
        self.prime = prime
        self.condition = condition
        super().__init__(
            f"{group} is not quasi-{prime}-regular ({condition} fails); no extension entry"
        )


class ParameterError(LoopDecompError, ValueError):
    pass


class PrimeError(LoopDecompError):
    pass


class UnsupportedError(LoopDecompError):
    pass


class ConfigurationError(LoopDecompError):
    pass


class UndeterminedError(LoopDecompError):
    """The engine cannot decide the answer; `note` explains the obstruction."""

    def __init__(self, message, note=None, slot=None):
        super().__init__(message)
        self.note = note or message
        self.slot = slot

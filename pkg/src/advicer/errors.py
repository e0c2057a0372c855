"""Exception hierarchy shared by every module.

Everything raised on purpose derives from :class:`AdviceError`, so the CLI
can map domain failures to exit code 1 without swallowing real bugs.
"""


class AdviceError(Exception):
    """Base class for all library errors."""


class ContractError(AdviceError, ValueError):
    """A precondition of an operation was violated by the caller."""


class AlphabetError(ContractError):
    """A symbol outside the expected alphabet was supplied."""

    def __init__(self, symbol, position=None, alphabet=None):
        self.symbol = symbol
        self.position = position
        self.alphabet = alphabet
        where = f" at position {position}" if position is not None else ""
        allowed = f" (alphabet: {', '.join(alphabet)})" if alphabet is not None else ""
        super().__init__(f"symbol {symbol!r}{where} not in alphabet{allowed}")


class UnsupportedAdviceError(AdviceError):
    """An exact computation needs ultimately periodic advice."""


class SizeError(AdviceError):
    """An enumeration would exceed its desk-scale guard."""


class BoundViolationError(AdviceError):
    """A language has more congruence classes than the requested bound."""

    def __init__(self, where, width, bound, witnesses):
        self.where = where
        self.width = width
        self.bound = bound
        self.witnesses = tuple(witnesses)
        super().__init__(
            f"width {width} exceeds bound {bound} at {where}; "
            f"pairwise inequivalent witnesses: {list(self.witnesses)}"
        )


class DepthInsufficientError(AdviceError):
    """A class's successors straddle two classes; the suffix depth is too small."""


class DegenerateMachineError(AdviceError):
    """A machine lacks the structure an operation needs (e.g. no accepting state)."""


class FormatError(AdviceError):
    """Malformed textual input."""

"""Exception types shared across the package.

Everything user-triggerable derives from CouplingLabError so the CLI can
map any validation or input problem to a single exit code.
"""


class CouplingLabError(Exception):
    """Base class for all errors raised by coupling_lab."""


class NegativeEntry(CouplingLabError):
    """A probability entry is negative."""


class SumNotOne(CouplingLabError):
    """Probabilities do not sum to exactly one.

    The exact shortfall (one minus the actual sum) is kept in ``deficit``.
    """

    def __init__(self, deficit, what="probabilities"):
        self.deficit = deficit
        super().__init__(f"{what} sum to {1 - deficit}, deficit {deficit}")


class UnknownState(CouplingLabError):
    """A state label is not part of the state space."""


class SpaceMismatch(CouplingLabError):
    """Operands are defined over different state spaces (or wrong sizes)."""


class EnumerationLimitExceeded(CouplingLabError):
    """An exact path enumeration would exceed the configured term limit."""


class ZeroSamples(CouplingLabError):
    """A Monte Carlo estimate was requested with no samples."""


class ParseError(CouplingLabError):
    """An input file or value could not be parsed."""

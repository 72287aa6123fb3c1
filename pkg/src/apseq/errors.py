"""Exception types shared across the toolkit.

Each signal is distinct so callers (and the command line front end) can map
failures to stable exit codes.
"""


class ApseqError(Exception):
    """Base class for all toolkit errors."""


class SpecError(ApseqError):
    """A sequence spec, word, or parameter is malformed."""


class HorizonExhausted(ApseqError):
    """An evaluation ran into the configured symbol horizon cap."""

    def __init__(self, message, needed=None, cap=None):
        super().__init__(message)
        self.needed = needed
        self.cap = cap


class PrecisionExhausted(ApseqError):
    """A real-parameter enclosure could not separate a floor/ceiling
    after the refinement budget."""


class GenerationStuck(ApseqError):
    """A scheme generation search hit a dead end."""

    def __init__(self, message, level=None):
        super().__init__(message)
        self.level = level


class MachineFault(ApseqError):
    """A pushdown machine performed an illegal stack action."""


class MachineParseError(ApseqError):
    """A transducer/automaton text file failed to parse."""


class NoCertifiedBound(ApseqError):
    """A decision was requested for a sequence without a certified
    regulator bound.  This is the decidability boundary: acceptance is
    decided only for sequences that are effectively almost periodic."""


class CostRefusal(ApseqError):
    """The window required by a certified decision exceeds the horizon cap."""

    def __init__(self, message, needed=None, cap=None):
        super().__init__(message)
        self.needed = needed
        self.cap = cap


class UnsupportedFeature(ApseqError):
    """Parsed but deliberately undecided input (e.g. nondeterministic
    omega-automata)."""

"""Toolkit for infinite symbolic sequences that are close to periodic:
generators, finite-state transforms, recurrence analysis, and a certified
acceptance decision engine for deterministic omega-automata."""

from .core import (Alphabet, Bound, Provenance, Segment, Sequence, Word,
                   agreement_length, factors, occurrences, prefix, segment, shift)
from .errors import (ApseqError, CostRefusal, GenerationStuck, HorizonExhausted,
                     MachineFault, MachineParseError, NoCertifiedBound,
                     PrecisionExhausted, SpecError, UnsupportedFeature)

__all__ = [
    "Alphabet", "Bound", "Provenance", "Segment", "Sequence", "Word",
    "agreement_length", "factors", "occurrences", "prefix", "segment", "shift",
    "ApseqError", "CostRefusal", "GenerationStuck", "HorizonExhausted",
    "MachineFault", "MachineParseError", "NoCertifiedBound",
    "PrecisionExhausted", "SpecError", "UnsupportedFeature",
]

__version__ = "0.1.0"

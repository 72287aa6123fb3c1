"""Alphabets, finite words, and lazy infinite symbolic sequences.

Conventions used throughout the toolkit:

* indexing is 0-based;
* ``segment(x, Segment(i, j))`` is the inclusive slice x(i)x(i+1)...x(j);
* symbols are opaque tokens with printable names (plain strings); binary
  sequences use the names "0" and "1".

A Sequence is an immutable value: a total index oracle plus a memo cache
that grows monotonically in chunks.  Evaluation past the horizon cap
(default 10**7 symbols) raises :class:`HorizonExhausted` instead of
blocking forever.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import HorizonExhausted, SpecError

DEFAULT_HORIZON_CAP = 10**7

_CHUNK = 4096  # memo cache grows in chunks of this many symbols


@dataclass(frozen=True)
class Alphabet:
    """An ordered finite set of distinct symbols.

    Symbol order is fixed at construction and used for every canonical
    enumeration (factor sets, lexicographic generation policies, ...).
    """

    symbols: tuple

    def __post_init__(self):
        if len(self.symbols) < 1:
            raise SpecError("alphabet must contain at least one symbol")
        if len(set(self.symbols)) != len(self.symbols):
            raise SpecError("alphabet symbols must be distinct")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.symbols)})

    @staticmethod
    def of(*symbols) -> "Alphabet":
        return Alphabet(tuple(str(s) for s in symbols))

    @staticmethod
    def binary() -> "Alphabet":
        return Alphabet(("0", "1"))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def index(self, symbol) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise SpecError(f"symbol {symbol!r} not in alphabet {self.symbols}") from None

    def word(self, letters) -> "Word":
        """Build a Word from an iterable of symbols, or from a plain string
        when every symbol name is a single character."""
        if isinstance(letters, Word):
            return letters
        if isinstance(letters, str) and all(len(s) == 1 for s in self.symbols):
            letters = tuple(letters)
        return Word(self, tuple(self.index(s) for s in letters))

    @property
    def single_char(self) -> bool:
        return all(len(s) == 1 for s in self.symbols)


@dataclass(frozen=True)
class Word:
    """A finite word over a declared alphabet (possibly empty).

    Letters are stored as indices into the alphabet; ``text`` renders the
    printable form (joined directly for single-character symbol names,
    comma-separated otherwise).
    """

    alphabet: Alphabet
    codes: tuple

    def __post_init__(self):
        if self.codes and not (0 <= min(self.codes) and max(self.codes) < len(self.alphabet)):
            raise SpecError("letter code out of range for alphabet")

    def __len__(self):
        return len(self.codes)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.codes[i])
        return self.alphabet.symbols[self.codes[i]]

    def __iter__(self):
        for c in self.codes:
            yield self.alphabet.symbols[c]

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise SpecError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.codes + other.codes)

    def __mul__(self, k: int) -> "Word":
        return Word(self.alphabet, self.codes * k)

    def count(self, symbol) -> int:
        return self.codes.count(self.alphabet.index(symbol))

    @property
    def text(self) -> str:
        names = [self.alphabet.symbols[c] for c in self.codes]
        return "".join(names) if self.alphabet.single_char else ",".join(names)

    def __str__(self):
        return self.text

    def complement(self) -> "Word":
        """Bitwise complement; defined for binary alphabets only."""
        if len(self.alphabet) != 2:
            raise SpecError("complement requires a binary alphabet")
        return Word(self.alphabet, tuple(1 - c for c in self.codes))

    def factors(self, n: int) -> set:
        """All length-n factors; empty set when n exceeds the word length."""
        if n < 1:
            raise SpecError("factor length must be >= 1")
        return {Word(self.alphabet, self.codes[i:i + n]) for i in range(len(self.codes) - n + 1)}


EMPTY_BINARY_WORD = Word(Alphabet.binary(), ())


@dataclass(frozen=True)
class Segment:
    """Inclusive index range [i, j] of a sequence."""

    i: int
    j: int

    def __post_init__(self):
        if self.i < 0 or self.i > self.j:
            raise SpecError(f"segment requires 0 <= i <= j, got [{self.i}, {self.j}]")

    def __len__(self):
        return self.j - self.i + 1


@dataclass(frozen=True)
class Bound:
    """A certified upper bound on the regulator of a sequence.

    ``fn`` is total and monotone with fn(n) >= n (a window shorter than the
    factor cannot contain it); ``provenance`` names the argument that
    produced the formula.  Bounds are metadata asserted by constructors and
    never inferred from data.
    """

    fn: Callable[[int], int]
    provenance: str

    def __call__(self, n: int) -> int:
        if n < 1:
            raise SpecError("bound is defined for factor lengths n >= 1")
        value = int(self.fn(n))
        if value < n:
            raise SpecError(f"bound {self.provenance} returned {value} < n={n}")
        return value


@dataclass(frozen=True)
class Provenance:
    """Construction descriptor: family name plus family-specific parameters."""

    family: str
    params: dict = field(default_factory=dict)

    def __str__(self):
        if not self.params:
            return self.family
        inner = " ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.family} {inner}"


class Sequence:
    """An immutable infinite symbolic stream.

    ``extend`` receives the internal cache (a list of symbol codes) and a
    target length and must append codes until the cache reaches at least
    that length.  It is called under the sequence lock, so implementations
    may keep private incremental state.  Repeated evaluation of the same
    index always yields the same symbol.
    """

    def __init__(self, alphabet: Alphabet, extend, *, bound: Optional[Bound] = None,
                 provenance: Optional[Provenance] = None,
                 horizon_cap: int = DEFAULT_HORIZON_CAP):
        self.alphabet = alphabet
        self._extend = extend
        self.certified_bound = bound
        self.provenance = provenance or Provenance("anonymous")
        self.horizon_cap = horizon_cap
        self._cache: list = []
        self._lock = threading.RLock()
        self._np_cache = np.empty(0, dtype=np.int64)

    @staticmethod
    def from_index_fn(alphabet, fn, **kw) -> "Sequence":
        """Sequence from a total random-access oracle index -> symbol code."""

        def extend(cache, target):
            for i in range(len(cache), target):
                cache.append(fn(i))

        return Sequence(alphabet, extend, **kw)

    @staticmethod
    def from_iterable(alphabet, iterable: Iterable, **kw) -> "Sequence":
        """Sequence fed from a (deterministic) infinite symbol-code iterator."""
        it = iter(iterable)

        def extend(cache, target):
            while len(cache) < target:
                cache.append(next(it))

        return Sequence(alphabet, extend, **kw)

    # -- evaluation ---------------------------------------------------

    def _fill(self, n: int):
        if n <= len(self._cache):
            return
        if n > self.horizon_cap:
            raise HorizonExhausted(
                f"requested {n} symbols of {self.provenance}, cap is {self.horizon_cap}",
                needed=n, cap=self.horizon_cap)
        with self._lock:
            if n <= len(self._cache):
                return
            target = min(-(-n // _CHUNK) * _CHUNK, self.horizon_cap)
            self._extend(self._cache, target)
            if len(self._cache) < n:
                raise HorizonExhausted(
                    f"{self.provenance} produced only {len(self._cache)} symbols",
                    needed=n, cap=self.horizon_cap)

    def code_at(self, i: int) -> int:
        self._fill(i + 1)
        return self._cache[i]

    def __getitem__(self, i: int) -> str:
        return self.alphabet.symbols[self.code_at(i)]

    def codes(self, n: int) -> list:
        """Fill to at least n symbols and return the internal code list.

        The list may be longer than n and must be treated as read-only;
        this avoids a copy on the hot evaluation paths.
        """
        self._fill(n)
        return self._cache

    def prefix_array(self, n: int) -> np.ndarray:
        """The first n symbol codes as an int64 array (cached, grow-only)."""
        self._fill(n)
        with self._lock:
            if self._np_cache.size < n:
                self._np_cache = np.array(self._cache, dtype=np.int64)
            return self._np_cache[:n]

    # -- word views ---------------------------------------------------

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise SpecError("prefix length must be >= 0")
        self._fill(n)
        return Word(self.alphabet, tuple(self._cache[:n]))

    def segment(self, seg: Segment) -> Word:
        self._fill(seg.j + 1)
        return Word(self.alphabet, tuple(self._cache[seg.i:seg.j + 1]))

    def with_bound(self, bound: Bound) -> "Sequence":
        """Same stream with a (caller-asserted) certified bound attached."""
        out = shift(self, 0)
        out.certified_bound = bound
        out.provenance = self.provenance
        return out

    def __repr__(self):
        return f"<Sequence {self.provenance}>"


# -- operations ----------------------------------------------------------


def prefix(x: Sequence, n: int) -> Word:
    """x[0, n-1]; the empty word for n = 0."""
    return x.prefix(n)


def segment(x: Sequence, seg: Segment) -> Word:
    """The inclusive slice x(i)x(i+1)...x(j)."""
    return x.segment(seg)


def factors(source, n: int, horizon: Optional[int] = None) -> set:
    """Length-n factor set of a word, or of a sequence prefix.

    For a sequence the result is the factor set of ``prefix(x, horizon)``:
    a subset of the true factor set, equal to it whenever
    ``horizon >= certified_bound(n) + n``.
    """
    if isinstance(source, Word):
        return source.factors(n)
    if horizon is None:
        raise SpecError("factors over a sequence needs an explicit horizon")
    if horizon < n:
        raise SpecError("horizon must be at least the factor length")
    return source.prefix(horizon).factors(n)


def occurrences(haystack: Word, needle: Word) -> list:
    """Ascending start indices of all (possibly overlapping) occurrences."""
    if len(needle) == 0:
        raise SpecError("needle must be nonempty")
    if needle.alphabet != haystack.alphabet:
        warnings.warn("occurrences: needle alphabet differs from haystack alphabet")
        return []
    h, nd = haystack.codes, needle.codes
    m = len(nd)
    return [i for i in range(len(h) - m + 1) if h[i:i + m] == nd]


def agreement_length(x: Sequence, y: Sequence, horizon: int):
    """First index where x and y disagree, or None when they agree on the
    whole horizon (i.e. the Cantor distance is at most 2**-horizon)."""
    if x.alphabet != y.alphabet:
        raise SpecError("agreement_length requires a common alphabet")
    if x is y:
        return None
    a = x.prefix_array(horizon)
    b = y.prefix_array(horizon)
    diff = np.nonzero(a != b)[0]
    return int(diff[0]) if diff.size else None


def shift(x: Sequence, n: int) -> Sequence:
    """The n-fold left shift: index i maps to x(i + n).

    Any certified bound of x is dropped; a shifted bound is not asserted.
    """
    if n < 0:
        raise SpecError("shift offset must be >= 0")

    def extend(cache, target):
        xs = x.codes(target + n)
        cache.extend(xs[n + len(cache):n + target])

    return Sequence(x.alphabet, extend,
                    provenance=Provenance("shift", {"of": str(x.provenance), "by": n}),
                    horizon_cap=x.horizon_cap)

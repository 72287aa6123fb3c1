"""Constructors for every sequence family shipped by the toolkit.

Families that come with a proof-backed window argument attach a certified
regulator bound; all other families are empirical-only.  Bounds ship for:

* periodic / eventually periodic words (exact formulas),
* the doubling construction behind :func:`thue_morse`,
* block products whose blocks all contain both letters,
* pair-scheme generation (:func:`scheme_generate` over a :class:`GapScheme`),
* :func:`progression_rewrite` over phase-aligned eventually periodic bases.
"""

from __future__ import annotations

import itertools
import random as _random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, ceil

from .core import Alphabet, Bound, Provenance, Sequence, Word
from .errors import GenerationStuck, HorizonExhausted, PrecisionExhausted, SpecError

BINARY = Alphabet.binary()

# Window factor for the doubling construction: every prefix block of size
# 2**m recurs within every window of 2**(m + _DOUBLING_SHIFT) symbols.
# The value is fixed by measurement against the empirical regulator
# (see tests); 2 is too tight for factors straddling block boundaries.
_DOUBLING_SHIFT = 3


def word_from_text(text: str, alphabet: Alphabet | None = None) -> Word:
    """Build a word from a string of single-character symbol names."""
    if alphabet is None:
        alphabet = Alphabet(tuple(sorted(set(text))))
    return alphabet.word(text)


def _as_word(w, alphabet=None) -> Word:
    return w if isinstance(w, Word) else word_from_text(w, alphabet)


# -- periodic families ----------------------------------------------------


def periodic(period) -> Sequence:
    """The purely periodic sequence with the given period word.

    Certified bound: n + |period| - 1; a window of that length covers a
    full residue cycle, so it contains every length-n factor.
    """
    w = _as_word(period)
    p = len(w)
    if p < 1:
        raise SpecError("period must be nonempty")
    codes = w.codes

    def extend(cache, target):
        while len(cache) < target:
            cache.append(codes[len(cache) % p])

    bound = Bound(lambda n: n + p - 1, f"periodic window, period {p}")
    return Sequence(w.alphabet, extend, bound=bound,
                    provenance=Provenance("periodic", {"period": w.text, "period_len": p}))


def eventually_periodic(pre, period) -> Sequence:
    """Preperiod word followed by a periodic tail.

    Certified bound: |pre| + n + |period| - 1.  The naive
    max(|pre| + n, n + |period| - 1) is not sound: a window that straddles
    the preperiod boundary needs the full preperiod plus one residue cycle
    before it is guaranteed to contain every recurring factor.
    """
    alphabet = Alphabet(tuple(sorted(set(str(pre)) | set(str(period))))) \
        if isinstance(pre, str) and isinstance(period, str) else None
    u = _as_word(pre, alphabet)
    w = _as_word(period, alphabet if alphabet is not None else u.alphabet)
    if u.alphabet != w.alphabet:
        raise SpecError("preperiod and period must share an alphabet")
    p = len(w)
    if p < 1:
        raise SpecError("period must be nonempty")
    k, ucodes, wcodes = len(u), u.codes, w.codes

    def extend(cache, target):
        while len(cache) < target:
            i = len(cache)
            cache.append(ucodes[i] if i < k else wcodes[(i - k) % p])

    bound = Bound(lambda n: k + n + p - 1, f"eventually periodic window, pre {k}, period {p}")
    return Sequence(u.alphabet, extend, bound=bound,
                    provenance=Provenance("eventually_periodic",
                                          {"pre": u.text, "period": w.text,
                                           "pre_len": k, "period_len": p}))


def constant(symbol: str) -> Sequence:
    return periodic(word_from_text(symbol))


def with_prefix(prefix_word, x: Sequence) -> Sequence:
    """The concatenation (finite word) + (sequence); no bound is asserted."""
    u = _as_word(prefix_word, x.alphabet)
    if u.alphabet != x.alphabet:
        raise SpecError("prefix word must be over the sequence alphabet")
    k, ucodes = len(u), u.codes

    def extend(cache, target):
        while len(cache) < target and len(cache) < k:
            cache.append(ucodes[len(cache)])
        if len(cache) >= target:
            return
        xs = x.codes(target - k)
        cache.extend(xs[len(cache) - k:target - k])

    return Sequence(x.alphabet, extend,
                    provenance=Provenance("with_prefix", {"prefix": u.text, "of": str(x.provenance)}),
                    horizon_cap=x.horizon_cap)


# -- doubling construction (invert-and-append) ----------------------------


def thue_morse(definition: str = "recurrence") -> Sequence:
    """The binary invert-and-append sequence, by one of three equivalent
    constructions: index recurrence, binary digit-sum parity, or the fixed
    point of 0 -> 01, 1 -> 10.

    Certified bound: 2**(ceil(log2 n) + 3).  The sequence splits into
    aligned blocks b/~b of size 2**m whose block code is the sequence
    itself; cube-freeness puts both block kinds in any four consecutive
    blocks, and one extra doubling level absorbs factors that straddle a
    block boundary.
    """
    if definition == "recurrence":
        def extend(cache, target):
            if not cache:
                cache.append(0)
            while len(cache) < target:
                i = len(cache)
                half = cache[i >> 1]
                cache.append(half if i % 2 == 0 else 1 - half)

        seq = Sequence(BINARY, extend,
                       provenance=Provenance("thue_morse", {"definition": definition}))
    elif definition == "digit_sum":
        seq = Sequence.from_index_fn(
            BINARY, lambda i: bin(i).count("1") & 1,
            provenance=Provenance("thue_morse", {"definition": definition}))
    elif definition == "morphic":
        phi = Morphism.from_rules(BINARY, BINARY, {"0": "01", "1": "10"})
        seq = morphic(phi, "0")
        seq.provenance = Provenance("thue_morse", {"definition": definition})
    else:
        raise SpecError(f"unknown definition {definition!r}")

    def fn(n):
        return 1 << ((n - 1).bit_length() + _DOUBLING_SHIFT)

    seq.certified_bound = Bound(fn, "doubling-block window argument")
    return seq


# -- mechanical sequences --------------------------------------------------


class RealParam:
    """A real parameter given either exactly (rational) or as a refinable
    enclosure oracle eps -> rational interval of width <= eps."""

    def __init__(self, exact: Fraction | None = None, oracle=None, name: str | None = None):
        if (exact is None) == (oracle is None):
            raise SpecError("give exactly one of an exact rational or an enclosure oracle")
        self.exact = exact
        self._oracle = oracle
        self.name = name if name is not None else (str(exact) if exact is not None else "oracle")
        self._best = None  # narrowest enclosure seen so far

    @staticmethod
    def of(value) -> "RealParam":
        if isinstance(value, RealParam):
            return value
        if isinstance(value, str):
            if "/" in value:
                num, den = value.split("/")
                return RealParam(exact=Fraction(int(num), int(den)))
            return RealParam(exact=Fraction(int(value)))
        return RealParam(exact=Fraction(value))

    def enclosure(self, eps: Fraction):
        if self.exact is not None:
            return self.exact, self.exact
        if self._best is not None and self._best[1] - self._best[0] <= eps:
            return self._best
        lo, hi = self._oracle(eps)
        lo, hi = Fraction(lo), Fraction(hi)
        if hi - lo > eps:
            raise SpecError(f"enclosure oracle {self.name} returned width {hi - lo} > {eps}")
        if self._best is not None:
            blo, bhi = self._best
            lo, hi = max(lo, blo), min(hi, bhi)
        self._best = (lo, hi)
        return lo, hi

    def current(self):
        """The narrowest enclosure seen so far (a first cheap attempt)."""
        if self.exact is not None:
            return self.exact, self.exact
        if self._best is None:
            return self.enclosure(Fraction(1, 4))
        return self._best

    def __str__(self):
        return self.name


def inv_golden_sq() -> RealParam:
    """2 - (1+sqrt(5))/2, i.e. the inverse square of the golden ratio, as an
    enclosure oracle built from ratios of consecutive terms of the
    1,1,2,3,5,... recurrence (consecutive ratios bracket the limit)."""

    def oracle(eps):
        a, b, c = 1, 1, 2  # F_n, F_{n+1}, F_{n+2}
        prev = Fraction(a, c)
        while True:
            a, b, c = b, c, b + c
            cur = Fraction(a, c)
            if abs(cur - prev) <= eps:
                return (min(prev, cur), max(prev, cur))
            prev = cur

    return RealParam(oracle=oracle, name="invphi2")


_REFINE_BUDGET = 256


def _floor_affine(alpha: RealParam, rho: RealParam, n: int, upper: bool) -> int:
    """floor (or ceil when upper) of alpha*n + rho, refining enclosures
    until the value is unambiguous."""
    if alpha.exact is not None and rho.exact is not None:
        v = alpha.exact * n + rho.exact
        return ceil(v) if upper else floor(v)
    scale = max(n, 1)
    alo, ahi = alpha.current()
    rlo, rhi = rho.current()
    eps = None
    for _ in range(_REFINE_BUDGET):
        if eps is not None:
            alo, ahi = alpha.enclosure(eps / (2 * scale))
            rlo, rhi = rho.enclosure(eps / 2)
        lo = alo * n + rlo
        hi = ahi * n + rhi
        f_lo, f_hi = (ceil(lo), ceil(hi)) if upper else (floor(lo), floor(hi))
        if f_lo == f_hi:
            return f_lo
        eps = (hi - lo) / 4 if eps is None else eps / 2
    raise PrecisionExhausted(
        f"could not separate {'ceil' if upper else 'floor'}({alpha}*{n} + {rho}) "
        f"after {_REFINE_BUDGET} refinements")


def mechanical(alpha, rho, variant: str = "lower") -> Sequence:
    """The mechanical sequence with slope alpha and intercept rho:
    difference of consecutive floors (lower) or ceilings (upper) of
    alpha*n + rho.  Parameters are exact rationals or enclosure oracles;
    exact integer hits are only detectable for rationals, where the plain
    floor/ceiling already implements the integer branch.
    """
    alpha, rho = RealParam.of(alpha), RealParam.of(rho)
    if variant not in ("lower", "upper"):
        raise SpecError("variant must be 'lower' or 'upper'")
    if alpha.exact is not None and not (0 <= alpha.exact <= 1):
        raise SpecError("slope must lie in [0, 1]")
    if rho.exact is not None and not (0 <= rho.exact < 1):
        raise SpecError("intercept must lie in [0, 1)")
    upper = variant == "upper"

    state = {"last": None}

    def extend(cache, target):
        if state["last"] is None:
            state["last"] = _floor_affine(alpha, rho, 0, upper)
        while len(cache) < target:
            n = len(cache)
            nxt = _floor_affine(alpha, rho, n + 1, upper)
            cache.append(nxt - state["last"])
            state["last"] = nxt

    return Sequence(BINARY, extend,
                    provenance=Provenance("mechanical",
                                          {"alpha": str(alpha), "rho": str(rho),
                                           "variant": variant}))


# -- morphisms and their fixed points --------------------------------------


@dataclass(frozen=True)
class Morphism:
    """A monoid morphism between free monoids, given by letter images.

    Nonerasing by default; erasing images are allowed only behind the
    explicit flag, in which case mortality (letters whose iterated image
    vanishes) is analysed where it matters.
    """

    source: Alphabet
    target: Alphabet
    images: dict  # symbol name -> Word over target
    erasing_ok: bool = False

    def __post_init__(self):
        for a in self.source:
            if a not in self.images:
                raise SpecError(f"morphism missing image for {a!r}")
            img = self.images[a]
            if img.alphabet != self.target:
                raise SpecError(f"image of {a!r} is not over the target alphabet")
            if len(img) == 0 and not self.erasing_ok:
                raise SpecError(f"erasing image for {a!r} (pass erasing_ok=True to allow)")

    @staticmethod
    def from_rules(source: Alphabet, target: Alphabet, rules: dict, erasing_ok=False) -> "Morphism":
        images = {a: _as_word(w, target) for a, w in rules.items()}
        return Morphism(source, target, images, erasing_ok)

    @staticmethod
    def identity(alphabet: Alphabet) -> "Morphism":
        return Morphism(alphabet, alphabet,
                        {a: alphabet.word([a]) for a in alphabet})

    @property
    def uniform_length(self) -> int | None:
        lengths = {len(self.images[a]) for a in self.source}
        return lengths.pop() if len(lengths) == 1 else None

    @property
    def is_coding(self) -> bool:
        return self.uniform_length == 1

    def image_codes(self) -> list:
        """Image of each source code as a tuple of target codes."""
        return [self.images[a].codes for a in self.source]

    def apply_word(self, w: Word) -> Word:
        if w.alphabet != self.source:
            raise SpecError("word is not over the morphism source alphabet")
        table = self.image_codes()
        out = []
        for c in w.codes:
            out.extend(table[c])
        return Word(self.target, tuple(out))

    def mortal_letters(self) -> set:
        """Letters whose iterated image eventually vanishes."""
        mortal = {a for a in self.source if len(self.images[a]) == 0}
        changed = True
        while changed:
            changed = False
            for a in self.source:
                if a in mortal:
                    continue
                if all(b in mortal for b in self.images[a]):
                    mortal.add(a)
                    changed = True
        return mortal


def morphic(phi: Morphism, seed: str, coding: Morphism | None = None) -> Sequence:
    """The fixed point of phi started from seed, optionally recoded by a
    1-uniform morphism.

    phi must be prolongable on seed: phi(seed) starts with seed and the
    remainder keeps growing forever.  The evaluator appends the image of
    one already-fixed letter at a time, so no symbol is ever re-derived.
    phi(seed) = seed is accepted as the degenerate constant stream.
    """
    if phi.source != phi.target:
        raise SpecError("fixed points need an endomorphism")
    if seed not in phi.source:
        raise SpecError(f"seed {seed!r} not in the alphabet")
    img = phi.images[seed]
    if len(img) == 0 or img[0] != seed:
        raise SpecError(f"phi is not prolongable on {seed!r}: phi({seed}) = {img.text!r}")
    mortal = phi.mortal_letters() if phi.erasing_ok else set()
    degenerate = len(img) == 1
    if not degenerate and all(b in mortal for b in list(img)[1:]):
        raise SpecError("image collapse: the fixed point of phi is a finite word")
    if coding is not None:
        if not coding.is_coding:
            raise SpecError("the recoding morphism must be 1-uniform")
        if coding.source != phi.source:
            raise SpecError("recoding source alphabet mismatch")
        out_alphabet = coding.target
        code_map = [coding.images[a].codes[0] for a in phi.source]
    else:
        out_alphabet = phi.source
        code_map = None

    table = phi.image_codes()
    seed_code = phi.source.index(seed)
    inner = {"codes": list(img.codes), "ptr": 1}

    def extend(cache, target):
        codes, ptr = inner["codes"], inner["ptr"]
        if degenerate:
            cache.extend([seed_code if code_map is None else code_map[seed_code]]
                         * (target - len(cache)))
            return
        while len(codes) < target:
            if ptr >= len(codes):
                raise SpecError("image collapse: the fixed point of phi is a finite word")
            codes.extend(table[codes[ptr]])
            ptr += 1
        inner["ptr"] = ptr
        if code_map is None:
            cache.extend(codes[len(cache):target])
        else:
            cache.extend(code_map[c] for c in codes[len(cache):target])

    return Sequence(out_alphabet, extend,
                    provenance=Provenance("morphic",
                                          {"rules": _rules_text(phi), "seed": seed,
                                           "coding": _rules_text(coding) if coding else "-"}))


def _rules_text(phi: Morphism | None) -> str:
    if phi is None:
        return "-"
    return ",".join(f"{a}:{phi.images[a].text}" for a in phi.source)


def fibonacci() -> Sequence:
    """Fixed point of 0 -> 01, 1 -> 0; equals the lower mechanical sequence
    with slope and intercept both invphi2 (checked in the test suite)."""
    phi = Morphism.from_rules(BINARY, BINARY, {"0": "01", "1": "0"})
    seq = morphic(phi, "0")
    seq.provenance = Provenance("fibonacci")
    return seq


# -- automatic sequences ----------------------------------------------------


@dataclass(frozen=True)
class DFAO:
    """Deterministic finite automaton with per-state output, run on the
    base-k digits of the index, most significant digit first."""

    base: int
    states: tuple
    initial: str
    transition: dict  # (state, digit) -> state
    output: dict      # state -> symbol name
    output_alphabet: Alphabet

    def __post_init__(self):
        if self.base < 2:
            raise SpecError("DFAO base must be >= 2")
        for q in self.states:
            for d in range(self.base):
                if (q, d) not in self.transition:
                    raise SpecError(f"transition missing for ({q!r}, {d})")
            if q not in self.output:
                raise SpecError(f"output missing for state {q!r}")

    def run(self, n: int) -> str:
        digits = [0]
        if n > 0:
            digits = []
            m = n
            while m:
                digits.append(m % self.base)
                m //= self.base
            digits.reverse()
        q = self.initial
        for d in digits:
            q = self.transition[(q, d)]
        return self.output[q]


def automatic(dfao: DFAO) -> Sequence:
    """x(n) = output of the DFAO run on the base-k digits of n (n = 0 reads
    the single digit 0)."""
    return Sequence.from_index_fn(
        dfao.output_alphabet,
        lambda i: dfao.output_alphabet.index(dfao.run(i)),
        provenance=Provenance("automatic", {"base": dfao.base, "states": len(dfao.states)}))


# -- block products ---------------------------------------------------------


def block_product_word(u: Word, v: Word) -> Word:
    """Recursive product: empty for empty v, else the product over v less
    its last letter, followed by u (letter 0) or the complement of u
    (letter 1)."""
    if len(u.alphabet) != 2 or len(v.alphabet) != 2:
        raise SpecError("block products are defined over the binary alphabet")
    out = []
    uc = u.codes
    ubar = tuple(1 - c for c in uc)
    for bit in v.codes:
        out.extend(uc if bit == 0 else ubar)
    return Word(u.alphabet, tuple(out))


def block_product_seq(blocks, *, assert_both_letters: bool = False,
                      family: str = "block_product", params: dict | None = None) -> Sequence:
    """Limit of the iterated block product of a stream of binary words.

    ``blocks`` is a callable k -> Word, or a list whose last entry repeats
    forever.  Every block past the first must be nonempty and start with 0.
    With ``assert_both_letters`` the caller asserts that every block past
    the first contains both letters; under that assertion the sequence
    carries the certified bound 4 * l_{m+1} + 2 * l_m + n with l_m the
    m-th partial product length and m minimal with l_m >= n: any factor
    sits inside a pair of adjacent level-m blocks, pairs recur within four
    level-(m+1) blocks, and the extra terms absorb alignment slack.  The
    plain 4 * l_{m+1} window is too tight for streams such as 001, 0111,
    0111, ... (measured regulator 4 * l_{m+1} + 2 * l_m + n - 1).
    """
    if callable(blocks):
        block_at = blocks
    else:
        words = [(_as_word(b, BINARY) if not isinstance(b, Word) else b) for b in blocks]
        if not words:
            raise SpecError("need at least one block")
        block_at = lambda k: words[min(k, len(words) - 1)]

    @lru_cache(maxsize=None)
    def checked_block(k: int) -> Word:
        w = block_at(k)
        w = w if isinstance(w, Word) else _as_word(w, BINARY)
        if len(w.alphabet) != 2:
            raise SpecError("blocks must be binary")
        if len(w) == 0:
            raise SpecError(f"block {k} is empty")
        if k >= 1 and w.codes[0] != 0:
            raise SpecError(f"block {k} does not start with 0")
        if assert_both_letters and k >= 1 and len(set(w.codes)) != 2:
            raise SpecError(f"block {k} lacks both letters but the bound asserts them")
        return w

    @lru_cache(maxsize=None)
    def level_len(m: int) -> int:
        n = 1
        for k in range(m + 1):
            n *= len(checked_block(k))
        return n

    state = {"word": None, "level": 0}

    def extend(cache, target):
        if state["word"] is None:
            state["word"] = list(checked_block(0).codes)
        w = state["word"]
        stagnant = 0
        while len(w) < target:
            state["level"] += 1
            blk = checked_block(state["level"])
            if len(blk) == 1:
                stagnant += 1
                if stagnant > 10_000:
                    raise HorizonExhausted("block stream stalled on length-1 blocks")
                continue
            stagnant = 0
            new = []
            comp = [1 - c for c in w]
            for bit in blk.codes:
                new.extend(w if bit == 0 else comp)
            w = new
        state["word"] = w
        cache.extend(w[len(cache):target])

    bound = None
    if assert_both_letters:
        def fn(n):
            m = 0
            while level_len(m) < n:
                m += 1
            return 4 * level_len(m + 1) + 2 * level_len(m) + n

        bound = Bound(fn, "block product window (4*l_{m+1} + 2*l_m + n)")

    return Sequence(BINARY, extend, bound=bound,
                    provenance=Provenance(family, params or {}))


def keane() -> Sequence:
    """The ternary-pattern block product: every block equals 001."""
    return block_product_seq(["001"], assert_both_letters=True,
                             family="keane")


def alternating_prefix_example() -> Sequence:
    """001 followed by the repeated block 0111: a uniformly recurrent
    sequence whose prefix imbalances alternate sign with value 2**m.
    Ships as a named fixture for the stack-machine counterexample."""
    return block_product_seq(["001", "0111"], assert_both_letters=True,
                             family="alternating_prefix_example")


# -- schemes ----------------------------------------------------------------


@dataclass(frozen=True)
class GapScheme:
    """Level-indexed block system (l_n, B_n, C_n).

    ``level`` maps n to (l_n, tuple of B_n words, tuple of C_n words).
    Conditions (checkable to any depth via :func:`scheme_validate`):

    1. every B_n word has length l_n;
    2. every C_n word is v1 v2 with halves in B_n, and every B_n word is
       used in the first position of some C_n word and in the second
       position of some C_n word;
    3. every B_{n+1} word splits into B_n blocks with consecutive pairs in
       C_n and realizes every C_n word at some junction;
    4. the middle junction of every C_{n+1} word lies in C_n.
    """

    alphabet: Alphabet
    level: "callable"
    name: str = "gap-scheme"
    level_length: "callable | None" = None  # n -> l_n without building words

    def length(self, n: int) -> int:
        return self.level_length(n) if self.level_length else self.level(n)[0]


@dataclass(frozen=True)
class ApScheme:
    """Level-indexed block system (l_n, B_n): every B_{n+1} word is a
    concatenation of B_n words containing every B_n word at least once."""

    alphabet: Alphabet
    level: "callable"
    name: str = "ap-scheme"
    level_length: "callable | None" = None

    def length(self, n: int) -> int:
        return self.level_length(n) if self.level_length else self.level(n)[0]


def substitution_scheme(kind: str, alphabet: Alphabet, base: dict, expand: dict,
                        pairs: list | None = None, name: str = "scheme"):
    """Scheme whose level-n words are indexed by letters: w_0(a) = base[a]
    and w_{n+1}(a) is the concatenation of w_n(b) over the letters b of
    expand[a].  For a pair scheme, ``pairs`` lists two-letter strings ab
    meaning w_n(a) w_n(b) belongs to C_n."""
    letters = list(expand.keys())
    for a in letters:
        if a not in base:
            raise SpecError(f"no base word for scheme letter {a!r}")

    @lru_cache(maxsize=None)
    def words(n: int) -> dict:
        if n == 0:
            return {a: _as_word(base[a], alphabet) for a in letters}
        prev = words(n - 1)
        out = {}
        for a in letters:
            w = Word(alphabet, ())
            for b in expand[a]:
                w = w + prev[b]
            out[a] = w
        return out

    base_lens = {len(_as_word(base[a], alphabet)) for a in letters}
    expand_lens = {len(expand[a]) for a in letters}
    length_fn = None
    if len(base_lens) == 1 and len(expand_lens) == 1:
        l0, k = base_lens.pop(), expand_lens.pop()
        length_fn = lambda n: l0 * k**n

    if kind == "ap":
        def level(n):
            ws = words(n)
            ln = len(next(iter(ws.values())))
            return ln, tuple(ws[a] for a in letters)

        return ApScheme(alphabet, level, name, length_fn)
    if kind == "gap":
        if not pairs:
            raise SpecError("a pair scheme needs its junction pairs")

        def level(n):
            ws = words(n)
            ln = len(next(iter(ws.values())))
            return (ln, tuple(ws[a] for a in letters),
                    tuple(ws[a] + ws[b] for a, b in pairs))

        return GapScheme(alphabet, level, name, length_fn)
    raise SpecError("scheme kind must be 'ap' or 'gap'")


def doubling_scheme() -> ApScheme:
    """B_n = {b_n, ~b_n} with b_{n+1} = b_n ~b_n: the scheme behind the
    invert-and-append sequence."""
    return substitution_scheme("ap", BINARY, {"0": "0", "1": "1"},
                               {"0": "01", "1": "10"}, name="doubling")


def pair_alternation_scheme() -> GapScheme:
    """Ratio-3 pair scheme over {01, 10}: every level alternates a word
    with its complement.  Generates the period-4 word 0110 repeated; its
    interest is the scheme-derived certified bound."""
    return substitution_scheme(
        "gap", BINARY, {"0": "01", "1": "10"}, {"0": "010", "1": "101"},
        pairs=["01", "10"], name="pair-alternation")


def aperiodic_scheme() -> GapScheme:
    """Ratio-4 pair scheme whose unique output is aperiodic: level words
    U, V expand to UUVU and UVUU with junction pairs UU, UV, VU.  Both
    expansions start with U, so the prefix chain is forced and the
    generated sequence is the fixed point of the expansion."""
    return substitution_scheme(
        "gap", BINARY, {"0": "0", "1": "1"}, {"0": "0010", "1": "0100"},
        pairs=["00", "01", "10"], name="aperiodic")


def choice_scheme() -> GapScheme:
    """Ratio-5 pair scheme with all four junction pairs: both letters
    expand to words starting with themselves (UUVVU and VVUUV), so every
    level offers a genuine continuation choice and the scheme generates a
    continuum of sequences."""
    return substitution_scheme(
        "gap", BINARY, {"0": "0", "1": "1"}, {"0": "00110", "1": "11001"},
        pairs=["00", "01", "10", "11"], name="choice")


@dataclass
class SchemeViolation:
    level: int
    condition: int
    message: str

    def __str__(self):
        return f"level {self.level}, condition ({self.condition}): {self.message}"


def _aligned_blocks(w: Word, size: int):
    if len(w) % size:
        return None
    return [Word(w.alphabet, w.codes[i:i + size]) for i in range(0, len(w), size)]


def scheme_validate(scheme, depth: int) -> list:
    """Check the scheme conditions through the given level; returns the
    list of violations (empty means ok)."""
    if depth < 1:
        raise SpecError("depth must be >= 1")
    out = []
    is_gap = isinstance(scheme, GapScheme)
    for n in range(depth + 1):
        data = scheme.level(n)
        ln, bn = data[0], set(data[1])
        cn = set(data[2]) if is_gap else None
        if not bn:
            out.append(SchemeViolation(n, 1, "empty block set"))
            continue
        for w in bn:
            if len(w) != ln:
                out.append(SchemeViolation(n, 1, f"word {w.text!r} has length {len(w)} != {ln}"))
        if is_gap:
            firsts, seconds = set(), set()
            for c in cn:
                if len(c) != 2 * ln:
                    out.append(SchemeViolation(n, 2, f"pair word {c.text!r} is not two blocks long"))
                    continue
                v1, v2 = c[:ln], c[ln:]
                if v1 not in bn or v2 not in bn:
                    out.append(SchemeViolation(n, 2, f"pair word {c.text!r} has a half outside the block set"))
                firsts.add(v1)
                seconds.add(v2)
            for w in bn - firsts:
                out.append(SchemeViolation(n, 2, f"block {w.text!r} unused in first position"))
            for w in bn - seconds:
                out.append(SchemeViolation(n, 2, f"block {w.text!r} unused in second position"))
        if n == depth:
            break
        nxt = scheme.level(n + 1)
        ln1, bn1 = nxt[0], set(nxt[1])
        for w in bn1:
            blocks = _aligned_blocks(w, ln)
            if blocks is None:
                out.append(SchemeViolation(n + 1, 3, f"length {len(w)} not a multiple of {ln}"))
                continue
            if any(b not in bn for b in blocks):
                out.append(SchemeViolation(n + 1, 3, f"word {w.text!r} uses a block outside level {n}"))
                continue
            if is_gap:
                junctions = {blocks[i] + blocks[i + 1] for i in range(len(blocks) - 1)}
                if not junctions <= cn:
                    out.append(SchemeViolation(n + 1, 3, f"word {w.text!r} has a junction outside the pair set"))
                if not cn <= junctions:
                    out.append(SchemeViolation(n + 1, 3, f"word {w.text!r} misses some pair word"))
            else:
                if not bn <= set(blocks):
                    out.append(SchemeViolation(n + 1, 3, f"word {w.text!r} misses some level-{n} block"))
        if is_gap:
            cn1 = set(nxt[2])
            k = ln1 // ln if ln1 % ln == 0 else None
            for c in cn1:
                blocks = _aligned_blocks(c, ln)
                if blocks is None or k is None:
                    continue
                middle = blocks[k - 1] + blocks[k]
                if middle not in cn:
                    out.append(SchemeViolation(n + 1, 4, f"straddling pair of {c.text!r} not in level {n} pairs"))
    return out


_LOOKAHEAD = 1


def scheme_generate(scheme, mode: str = "AP", policy="lex", seed=None,
                    junk=None) -> Sequence:
    """Generate a sequence satisfying the scheme's window constraints.

    The generator maintains a chain of nested level words, each a prefix
    of the next, and extends it lazily; the policy resolves the choice
    among candidate extensions (default: lexicographically least; also a
    seeded random policy or a caller callback level, candidates -> word).
    A dead end within the lookahead raises :class:`GenerationStuck` naming
    the level.

    AP mode emits the chain limit.  GAP mode (pair schemes only) prepends
    a junk word: the result satisfies the offset window constraints with
    every offset equal to the junk length, and carries the certified bound
    |junk| + 2 * l_{m+1} (a window that long contains a whole aligned
    level-(m+1) block, and every pair word sits inside every such block).
    AP-scheme outputs carry no bound: no window argument is available
    without the pair sets.
    """
    is_gap = isinstance(scheme, GapScheme)
    if mode not in ("AP", "GAP"):
        raise SpecError("mode must be 'AP' or 'GAP'")
    if mode == "GAP" and not is_gap:
        raise SpecError("GAP generation needs a pair scheme")
    junk_word = _as_word(junk, scheme.alphabet) if junk is not None else Word(scheme.alphabet, ())
    if mode == "AP" and len(junk_word):
        raise SpecError("junk prefix only makes sense in GAP mode")

    rng = _random.Random(seed)

    def candidates(level_n: int, prev: Word | None):
        data = scheme.level(level_n)
        words = sorted(data[1], key=lambda w: w.codes)
        if prev is not None:
            words = [w for w in words if w.codes[:len(prev)] == prev.codes]
        return words

    def viable(level_n: int, w: Word, depth: int) -> bool:
        if depth == 0:
            return True
        return any(viable(level_n + 1, w2, depth - 1)
                   for w2 in candidates(level_n + 1, w))

    def choose(level_n: int, prev: Word | None) -> Word:
        cands = [w for w in candidates(level_n, prev) if viable(level_n, w, _LOOKAHEAD)]
        if not cands:
            raise GenerationStuck(f"no viable continuation at level {level_n}", level=level_n)
        if policy == "lex":
            return cands[0]
        if policy == "random":
            return rng.choice(cands)
        return policy(level_n, cands)

    chain = {"level": None, "word": None}
    jcodes, jlen = junk_word.codes, len(junk_word)

    def extend(cache, target):
        while len(cache) < target and len(cache) < jlen:
            cache.append(jcodes[len(cache)])
        if len(cache) >= target:
            return
        while chain["word"] is None or jlen + len(chain["word"]) < target:
            nxt = 0 if chain["level"] is None else chain["level"] + 1
            chain["word"] = choose(nxt, chain["word"])
            chain["level"] = nxt
        w = chain["word"].codes
        cache.extend(w[len(cache) - jlen:target - jlen])

    bound = None
    if is_gap:
        def fn(n):
            m = 0
            while scheme.length(m) < n:
                m += 1
            return jlen + 2 * scheme.length(m + 1)

        bound = Bound(fn, "pair-scheme window (junk + 2 * next level length)")

    return Sequence(scheme.alphabet, extend, bound=bound,
                    provenance=Provenance("scheme",
                                          {"name": getattr(scheme, "name", "?"),
                                           "mode": mode, "policy": str(policy),
                                           "junk": junk_word.text}))


# -- hole-filling words ------------------------------------------------------


HOLE_CHARS = ("_", "□")


@dataclass(frozen=True)
class ToeplitzPattern:
    """A word over alphabet + hole.  ``slots`` holds symbol codes with None
    at holes.  The first slot must be a symbol: the construction never
    assigns a value to position 0 otherwise."""

    alphabet: Alphabet
    slots: tuple

    def __post_init__(self):
        p = len(self.slots)
        q = sum(1 for s in self.slots if s is None)
        if not (1 <= q < p):
            raise SpecError("pattern needs 1 <= holes < length")
        if self.slots[0] is None:
            raise SpecError("pattern must start with a symbol, not a hole")

    @staticmethod
    def from_text(text: str, alphabet: Alphabet | None = None) -> "ToeplitzPattern":
        syms = [c for c in text if c not in HOLE_CHARS]
        if alphabet is None:
            alphabet = Alphabet(tuple(sorted(set(syms))))
        slots = tuple(None if c in HOLE_CHARS else alphabet.index(c) for c in text)
        return ToeplitzPattern(alphabet, slots)

    @property
    def text(self) -> str:
        return "".join("_" if s is None else self.alphabet.symbols[s] for s in self.slots)


def toeplitz(pattern: ToeplitzPattern) -> Sequence:
    """Iterated hole filling: repeat the pattern forever, then feed the
    stream itself back into the holes, in order.  Position i resolves in
    O(log) steps through the hole-index recursion."""
    slots = pattern.slots
    p = len(slots)
    q = sum(1 for s in slots if s is None)
    holes_before = []
    seen = 0
    for s in slots:
        holes_before.append(seen)
        if s is None:
            seen += 1

    def value(i: int) -> int:
        while True:
            r = i % p
            s = slots[r]
            if s is not None:
                return s
            i = (i // p) * q + holes_before[r]

    return Sequence.from_index_fn(pattern.alphabet, value,
                                  provenance=Provenance("toeplitz", {"pattern": pattern.text}))


def paperfolding() -> Sequence:
    """The crease sequence of repeated same-direction folds; equals the
    hole-filling construction for the pattern 1_0_."""
    seq = toeplitz(ToeplitzPattern.from_text("1_0_"))
    seq.provenance = Provenance("paperfolding")
    return seq


# -- self-describing run lengths --------------------------------------------


def kolakoski() -> Sequence:
    """The run-length self-describing sequence over {1, 2} starting 2, 2:
    the lengths of its own runs spell out the sequence again.  Generated
    feed-forward: run j has length x(j), with symbols alternating 2, 1."""
    alphabet = Alphabet.of("1", "2")
    state = {"vals": [2, 2], "run": 1, "sym": 2}

    def extend(cache, target):
        vals = state["vals"]
        while len(vals) < target:
            state["sym"] = 3 - state["sym"]
            vals.extend([state["sym"]] * vals[state["run"]])
            state["run"] += 1
        cache.extend(v - 1 for v in vals[len(cache):target])

    return Sequence(alphabet, extend, provenance=Provenance("kolakoski"))


# -- position-alternating morphisms -----------------------------------------


@dataclass(frozen=True)
class AlternatingMorphismSystem:
    """p nonerasing morphisms over one alphabet; the rewriting map applies
    morphism i mod p to the letter at absolute position i."""

    morphisms: tuple
    seed: str

    def __post_init__(self):
        if not self.morphisms:
            raise SpecError("need at least one morphism")
        alphabet = self.morphisms[0].source
        for h in self.morphisms:
            if h.source != alphabet or h.target != alphabet:
                raise SpecError("all morphisms must be endomorphisms of one alphabet")
            if h.erasing_ok or any(len(h.images[a]) == 0 for a in alphabet):
                raise SpecError("alternating systems require nonerasing morphisms")
        if self.seed not in alphabet:
            raise SpecError("seed not in the alphabet")
        first = self.morphisms[0].images[self.seed]
        if first[0] != self.seed:
            raise SpecError(f"system is not prolongable on {self.seed!r}")

    @property
    def alphabet(self) -> Alphabet:
        return self.morphisms[0].source


def alternating_apply(system: AlternatingMorphismSystem, w: Word) -> Word:
    """One rewriting step: letter at position i maps through morphism
    i mod p."""
    p = len(system.morphisms)
    tables = [h.image_codes() for h in system.morphisms]
    out = []
    for i, c in enumerate(w.codes):
        out.extend(tables[i % p][c])
    return Word(system.alphabet, tuple(out))


def alternating_morphic(system: AlternatingMorphismSystem) -> Sequence:
    """Iterated limit of the position-alternating rewriting map from the
    seed letter.  Each iterate is a prefix of the next, so the limit is
    well defined."""
    alphabet = system.alphabet
    p = len(system.morphisms)
    tables = [h.image_codes() for h in system.morphisms]
    seed_code = alphabet.index(system.seed)
    state = {"word": [seed_code]}

    def extend(cache, target):
        w = state["word"]
        while len(w) < target:
            new = []
            for i, c in enumerate(w):
                new.extend(tables[i % p][c])
            if len(new) == len(w) and new == w:
                # fixed finite word: degenerate constant-style continuation
                raise HorizonExhausted("alternating system reached a finite fixed word")
            w = new
        state["word"] = w
        cache.extend(w[len(cache):target])

    rules = ";".join(_rules_text(h) for h in system.morphisms)
    return Sequence(alphabet, extend,
                    provenance=Provenance("alternating_morphic",
                                          {"rules": rules, "seed": system.seed}))


def kolakoski_system() -> AlternatingMorphismSystem:
    """The two-morphism system whose iterated limit is the run-length
    self-describing sequence."""
    alphabet = Alphabet.of("1", "2")
    h0 = Morphism.from_rules(alphabet, alphabet, {"1": "2", "2": "22"})
    h1 = Morphism.from_rules(alphabet, alphabet, {"1": "1", "2": "11"})
    return AlternatingMorphismSystem((h0, h1), "2")


# -- arithmetic-progression rewriting ----------------------------------------


def geometric_levels(n0: int, ratio: int):
    """Divisor chain n0, n0*ratio, n0*ratio**2, ..."""
    if n0 < 1 or ratio < 2:
        raise SpecError("need n0 >= 1 and ratio >= 2")
    return lambda k: n0 * ratio**k


def progression_rewrite(base: Sequence, levels) -> Sequence:
    """Overwrite, at every step k, the segments of length n_k starting at
    the positive multiples of n_{k+1} with the (current) length-n_k prefix.
    The divisor chain makes all rewrites agree, and every prefix of the
    result recurs along an arithmetic progression, so the result is
    precisely almost periodic.

    A symbol is resolved lazily through the first level that pins its
    index.  A certified bound (2 * n_{k+1} for n <= n_k) is attached only
    when the base is (eventually) periodic, phase-aligned with the chain:
    period length dividing n_0 and preperiod at most n_0.  For general
    bases the junction factors between copies and base content recur on a
    slower schedule and no bound is asserted.
    """
    level = levels if callable(levels) else (lambda k, _ls=list(levels): _ls[k])

    @lru_cache(maxsize=None)
    def lv(k: int) -> int:
        v = int(level(k))
        if k > 0:
            prev = lv(k - 1)
            if v <= prev or v % prev:
                raise SpecError(f"levels must form a strictly increasing divisor chain, "
                                f"got n_{k-1}={prev}, n_{k}={v}")
        return v

    def resolve(i: int) -> int:
        while True:
            k = 0
            pinned = None
            while lv(k + 1) <= i:
                if i % lv(k + 1) < lv(k):
                    pinned = i % lv(k + 1)
                    break
                k += 1
            if pinned is None:
                return base.code_at(i)
            i = pinned

    bound = None
    fam = base.provenance.family
    if fam in ("periodic", "eventually_periodic"):
        plen = base.provenance.params.get("period_len", 0)
        prelen = base.provenance.params.get("pre_len", 0)
        if plen >= 1 and lv(0) % plen == 0 and prelen <= lv(0):
            def fn(n):
                k = 0
                while lv(k) < n:
                    k += 1
                return 2 * lv(k + 1)

            bound = Bound(fn, "progression rewrite window (phase-aligned base)")

    def extend(cache, target):
        for i in range(len(cache), target):
            cache.append(resolve(i))

    return Sequence(base.alphabet, extend, bound=bound,
                    provenance=Provenance("progression_rewrite",
                                          {"base": str(base.provenance),
                                           "n0": lv(0), "n1": lv(1)}),
                    horizon_cap=base.horizon_cap)


# -- triangular-sum witness ---------------------------------------------------


def aperiodicity_witness(k: int) -> Sequence:
    """Fixed point of the triangular-sum substitution over k >= 3 letters:
    letter i maps to the word whose j-th letter is i + 1 + 2 + ... + j
    mod k.  For prime k the sequence sits at Besicovitch distance
    1 - 2/k from all of its shifts."""
    if k < 3:
        raise SpecError("the witness construction needs k >= 3")
    alphabet = Alphabet(tuple(str(i) for i in range(k)))
    rules = {}
    for i in range(k):
        word = []
        total = 0
        for j in range(k):
            total += j
            word.append(str((i + total) % k))
        rules[str(i)] = "".join(word)
    phi = Morphism.from_rules(alphabet, alphabet, rules)
    seq = morphic(phi, "0")
    seq.provenance = Provenance("aperiodicity_witness", {"k": k})
    return seq


def triangular_images(k: int) -> dict:
    """The image table of the witness substitution, letter -> word text."""
    out = {}
    for i in range(k):
        word = []
        total = 0
        for j in range(k):
            total += j
            word.append(str((i + total) % k))
        out[str(i)] = "".join(word)
    return out


# -- misc plumbing -------------------------------------------------------------


def random_sequence(alphabet: Alphabet, seed: int) -> Sequence:
    """Seeded uniform random stream (deterministic per seed); used by the
    test suite and demos as a full-shift reference point."""
    rng = _random.Random(seed)
    k = len(alphabet)
    return Sequence.from_iterable(alphabet, (rng.randrange(k) for _ in itertools.count()),
                                  provenance=Provenance("random", {"seed": seed, "k": k}))

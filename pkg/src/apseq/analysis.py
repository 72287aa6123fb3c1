"""Measurements and certificates over sequences and words.

Window semantics: every regulator-style value counts only windows that lie
fully inside the examined horizon, and reports the minimal window length
that works.  Factors whose last occurrence dies before the half-horizon
are treated as finitely occurring: they move from the coverage condition
to the cutoff condition, mirroring the two-part regulator of generalized
almost periodicity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import Segment, Sequence, Word
from .errors import HorizonExhausted, SpecError

# -- report types ----------------------------------------------------------


@dataclass
class RegulatorReport:
    n: int
    value: int
    kind: str                      # empirical-lower | certified-exact | certified-upper
    horizon: int | None = None
    finitely_occurring: list = field(default_factory=list)

    def __post_init__(self):
        if self.value < self.n:
            raise SpecError("a regulator value cannot be smaller than the factor length")


@dataclass
class FrequencyReport:
    block: Word
    interval: tuple
    count: int
    density: Fraction

    def __post_init__(self):
        if not (0 <= self.density <= 1):
            raise SpecError("occurrence density must lie in [0, 1]")


@dataclass
class BalanceReport:
    balanced: bool
    n: int | None = None           # first violating length
    low: Word | None = None
    high: Word | None = None
    spread: int | None = None


@dataclass
class AmReport:
    per_shift: dict                # shift -> density (Fraction)
    minimum: Fraction
    argmin: int
    shift_max: int
    horizon: int


@dataclass
class ScreenReport:
    complexities: dict             # n -> p(n)
    triggered_at: int | None      # first n with p(n) <= n
    preperiod: int | None = None
    period: int | None = None
    confirmed: bool = False


@dataclass
class QuasiperiodReport:
    word: Word
    quasiperiods: list             # all covers, shortest first
    minimal: Word

    @property
    def proper(self) -> list:
        return [q for q in self.quasiperiods if len(q) < len(self.word)]


@dataclass
class ProuhetReport:
    n: int
    zeros: list
    ones: list
    zero_power_sums: list
    one_power_sums: list

    @property
    def balanced(self) -> bool:
        return self.zero_power_sums == self.one_power_sums


# -- factor statistics -------------------------------------------------------


def _window_codes(arr: np.ndarray, n: int, k: int) -> np.ndarray:
    m = arr.size - n + 1
    codes = np.zeros(m, dtype=np.int64)
    for j in range(n):
        codes *= k
        codes += arr[j:j + m]
    return codes


def _factor_groups(x: Sequence, n: int, horizon: int):
    """Yield (first, last, maxgap, positions) per distinct length-n factor
    of the horizon prefix, with positions ascending."""
    arr = x.prefix_array(horizon)
    k = len(x.alphabet)
    if n * max(1, k - 1).bit_length() > 62 or k**n > 2**62:
        return _factor_groups_slow(arr, n)
    codes = _window_codes(arr, n, k)
    order = np.argsort(codes, kind="stable")
    sc = codes[order]
    cuts = np.flatnonzero(np.diff(sc)) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [sc.size]))
    out = []
    for a, b in zip(starts, ends):
        pos = order[a:b]
        gap = int(np.diff(pos).max()) if b - a > 1 else 0
        out.append((int(pos[0]), int(pos[-1]), gap, pos))
    return out


def _factor_groups_slow(arr: np.ndarray, n: int):
    seen = {}
    lst = arr.tolist()
    for i in range(len(lst) - n + 1):
        seen.setdefault(tuple(lst[i:i + n]), []).append(i)
    out = []
    for pos in seen.values():
        gap = max((b - a for a, b in zip(pos, pos[1:])), default=0)
        out.append((pos[0], pos[-1], gap, np.array(pos)))
    return out


def _factor_word(x: Sequence, start: int, n: int) -> Word:
    return x.segment(Segment(start, start + n - 1))


def subword_complexity(x: Sequence, n: int, horizon: int) -> int:
    """Number of distinct length-n factors of the horizon prefix.

    This is exact (equal to the complexity of the whole sequence) whenever
    horizon >= certified_bound(n) + n; otherwise it is a lower bound.
    """
    if horizon < n:
        raise SpecError("horizon must be at least n")
    return len(_factor_groups(x, n, horizon))


def empirical_regulator(x: Sequence, n: int, horizon: int) -> RegulatorReport:
    """Minimal l such that every recurring length-n factor of the prefix
    occurs in every length-l window inside the horizon, and no finitely
    occurring factor starts at or past l."""
    if horizon < 4 * n:
        raise SpecError("horizon must be at least 4*n for a meaningful estimate")
    best = n
    finite = []
    for first, last, gap, _pos in _factor_groups(x, n, horizon):
        if last < horizon // 2:
            finite.append((last, first))
            continue
        best = max(best, first + n, gap + n - 1, horizon - last)
    finite_words = []
    for last, first in finite:
        best = max(best, last + 1)
        finite_words.append(_factor_word(x, first, n))
    return RegulatorReport(n, best, "empirical-lower", horizon, finite_words)


def _coverage_in_word(wcodes, ucodes) -> int | None:
    """Minimal l such that u occurs in every length-l window of the finite
    word w (None when u does not occur at all)."""
    n, m = len(ucodes), len(wcodes)
    pos = [i for i in range(m - n + 1) if tuple(wcodes[i:i + n]) == tuple(ucodes)]
    if not pos:
        return None
    gap = max((b - a for a, b in zip(pos, pos[1:])), default=0)
    return max(pos[0] + n, gap + n - 1, m - pos[-1])


def certified_regulator(x: Sequence, n: int) -> RegulatorReport:
    """Exact regulator value, computed from the certified bound f:

    * factors of x[f(n), 2 f(n)] are exactly the infinitely occurring
      length-n factors; every other length-n factor of x[0, f(n) + n]
      occurs finitely often;
    * l1 cuts off the finitely occurring factors;
    * l2 is the window length after which every infinitely occurring
      factor appears inside every window of every length-f(n) factor
      (the set of those is obtained from a certified prefix as well);
    * the regulator is max(l1, l2).
    """
    if x.certified_bound is None:
        raise SpecError("certified_regulator needs a sequence with a certified bound")
    f = x.certified_bound
    fn = f(n)
    inf_factors = {w.codes for w in x.segment(Segment(fn, 2 * fn)).factors(n)}
    all_early = {w.codes for w in x.prefix(fn + n + 1).factors(n)}
    finite_factors = all_early - inf_factors

    l1 = 0
    finite_words = []
    if finite_factors:
        pref = x.codes(fn + n)
        for uc in finite_factors:
            last = max(i for i in range(fn) if tuple(pref[i:i + n]) == uc)
            l1 = max(l1, last + 1)
            finite_words.append(Word(x.alphabet, uc))

    ffn = f(fn)
    k_horizon = max(2 * ffn, ffn + fn) + 1
    K = x.prefix(k_horizon).factors(fn)

    l2 = n
    for w in K:
        for uc in inf_factors:
            cov = _coverage_in_word(w.codes, uc)
            if cov is None:
                raise SpecError(
                    f"certified bound violated: factor missing from a length-{fn} factor")
            l2 = max(l2, cov)
    return RegulatorReport(n, max(l1, l2), "certified-exact",
                           finitely_occurring=finite_words)


def certified_bound_report(x: Sequence, n: int) -> RegulatorReport:
    if x.certified_bound is None:
        raise SpecError("sequence carries no certified bound")
    return RegulatorReport(n, x.certified_bound(n), "certified-upper")


def check_certified_bound(x: Sequence, n: int, horizon: int) -> bool:
    """Empirical soundness check of the attached bound: every length-n
    factor occurring at or past f(n) must occur in every f(n)-window of
    the horizon prefix, and no other factor may start at or past f(n)."""
    f = x.certified_bound
    if f is None:
        raise SpecError("sequence carries no certified bound")
    fn = f(n)
    if horizon < 2 * fn + 2 * n:
        raise SpecError("horizon too small to exercise the bound")
    for first, last, gap, _pos in _factor_groups(x, n, horizon):
        if last < fn:
            continue  # finitely occurring within view; cutoff satisfied
        if max(first + n, gap + n - 1, horizon - last) > fn:
            return False
    return True


def prefix_regulator(x: Sequence, n: int, horizon: int) -> int:
    """Minimal l such that the length-n prefix occurs in every length-l
    window inside the horizon."""
    if horizon < 4 * n:
        raise SpecError("horizon must be at least 4*n")
    arr = x.prefix_array(horizon)
    target = arr[:n]
    m = horizon - n + 1
    hits = np.ones(m, dtype=bool)
    for j in range(n):
        hits &= arr[j:j + m] == target[j]
    pos = np.flatnonzero(hits)
    if pos.size < 2:
        raise HorizonExhausted(f"prefix of length {n} does not recur within {horizon}")
    gap = int(np.diff(pos).max()) if pos.size > 1 else 0
    return max(n, int(pos[0]) + n, gap + n - 1, horizon - int(pos[-1]))


@dataclass
class ApCoefficientReport:
    rd: dict                      # n -> rd(n) = r(n) - n + 1 (max start spacing)
    max_ratio: Fraction           # max over n of r(n)/n (lower estimate)
    argmax: int
    horizon: int


def ap_coefficient(x: Sequence, n_max: int, horizon: int) -> ApCoefficientReport:
    """Recurrence-spacing profile rd(n) = r(n) - n + 1 together with the
    running maximum of the window quotient r(n)/n.

    The quotient is taken over r rather than rd: for the golden-slope
    word the peaks of r(n)/n climb to (5 + sqrt 5)/2 = 3.618..., the
    known limit value of the recurrence quotient, whereas rd(n)/n peaks
    a full unit lower (its limsup is the square of the golden ratio).
    The reported maximum is a lower estimate of the limsup.
    """
    rd = {}
    best, arg = Fraction(0), 1
    for n in range(1, n_max + 1):
        rep = empirical_regulator(x, n, horizon)
        rd[n] = rep.value - n + 1
        ratio = Fraction(rep.value, n)
        if ratio > best:
            best, arg = ratio, n
    return ApCoefficientReport(rd, best, arg, horizon)


# -- balance and powers ------------------------------------------------------


def is_balanced(x: Sequence, n_max: int, horizon: int) -> BalanceReport:
    """Check |count_1(u) - count_1(v)| <= 1 over all factor pairs of each
    length up to n_max (binary alphabets only)."""
    if len(x.alphabet) != 2:
        raise SpecError("balance is defined for binary alphabets")
    arr = x.prefix_array(horizon)
    ones = np.concatenate(([0], np.cumsum(arr == 1)))
    for n in range(1, n_max + 1):
        counts = ones[n:] - ones[:-n]
        lo, hi = int(counts.min()), int(counts.max())
        if hi - lo > 1:
            i_lo = int(np.argmin(counts))
            i_hi = int(np.argmax(counts))
            return BalanceReport(False, n, _factor_word(x, i_lo, n),
                                 _factor_word(x, i_hi, n), hi - lo)
    return BalanceReport(True)


def _letter_masks(arr: np.ndarray, k: int):
    masks = []
    for a in range(k):
        bits = np.packbits((arr == a).astype(np.uint8), bitorder="little")
        masks.append(int.from_bytes(bits.tobytes(), "little"))
    return masks


def _run_starts(mask: int, run_len: int) -> int:
    """Bit i set in the result iff bits i .. i+run_len-1 are all set."""
    built = 1
    t = mask
    while built < run_len:
        s = min(built, run_len - built)
        t &= t >> s
        built += s
    return t


def _bit_positions(mask: int, size: int) -> np.ndarray:
    raw = mask.to_bytes((size + 7) // 8, "little")
    bits = np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:size]
    return np.flatnonzero(bits)


def detect_powers(x: Sequence, horizon: int, kind: str,
                  max_period: int | None = None, limit: int | None = None) -> list:
    """All occurrences (position, |u|) of uu (square), uuu (cube), or
    auaua (overlap) shapes inside the horizon prefix, smallest |u| first.

    |u| ranges up to horizon/2 (squares, overlaps) or horizon/3 (cubes)
    unless capped by max_period.
    """
    if kind not in ("square", "cube", "overlap"):
        raise SpecError("kind must be square, cube, or overlap")
    if horizon < 4:
        raise SpecError("horizon must be at least 4")
    arr = x.prefix_array(horizon)
    k = len(x.alphabet)
    masks = _letter_masks(arr, k)
    reps = {"square": 2, "cube": 3, "overlap": 2}[kind]
    p_cap = horizon // reps
    if max_period is not None:
        p_cap = min(p_cap, max_period)
    out = []
    for p in range(1, p_cap + 1):
        width = horizon - p
        eq = 0
        for m in masks:
            eq |= m & (m >> p)
        eq &= (1 << width) - 1
        if kind == "square":
            need, ulen = p, p
        elif kind == "cube":
            need, ulen = 2 * p, p
        else:  # auaua with |u| = p - 1, i.e. period p repeated for p+1 symbols
            need, ulen = p + 1, p - 1
            if need > width:
                continue
        if need > width:
            continue
        starts = _run_starts(eq, need)
        if not starts:
            continue
        for i in _bit_positions(starts, width):
            out.append((int(i), ulen))
            if limit is not None and len(out) >= limit:
                return out
    return out


# -- shift-mismatch measures --------------------------------------------------


def besicovitch_density(x: Sequence, y: Sequence, horizon: int) -> Fraction:
    """Fraction of indices below the horizon where the sequences differ."""
    if x.alphabet != y.alphabet:
        raise SpecError("densities need a common alphabet")
    if horizon < 1:
        raise SpecError("horizon must be positive")
    a = x.prefix_array(horizon)
    b = y.prefix_array(horizon)
    return Fraction(int(np.count_nonzero(a != b)), horizon)


def am_estimate(x: Sequence, shift_max: int, horizon: int) -> AmReport:
    """Minimum over shifts 1..shift_max of the mismatch density between
    the sequence and its shift, over the first ``horizon`` positions.

    This estimates the infimum-over-shifts of the liminf mismatch density;
    the per-shift table is reported so convergence can be inspected."""
    if shift_max < 1:
        raise SpecError("need at least one shift")
    arr = x.prefix_array(horizon + shift_max)
    base = arr[:horizon]
    per = {}
    best, arg = None, None
    for s in range(1, shift_max + 1):
        d = Fraction(int(np.count_nonzero(base != arr[s:s + horizon])), horizon)
        per[s] = d
        if best is None or d < best:
            best, arg = d, s
    return AmReport(per, best, arg, shift_max, horizon)


# -- frequencies and entropy ---------------------------------------------------


def _occurrence_hits(x: Sequence, u: Word, upto: int) -> np.ndarray:
    """Boolean array over start positions [0, upto) marking occurrences
    of u in the sequence (evaluating just past the right edge)."""
    n = len(u)
    arr = x.prefix_array(upto + n - 1) if n > 1 else x.prefix_array(upto)
    hits = np.ones(upto, dtype=bool)
    for j, c in enumerate(u.codes):
        hits &= arr[j:j + upto] == c
    return hits


def frequency(x: Sequence, u: Word, i: int, j: int) -> FrequencyReport:
    """Occurrences of the block whose start lies in [i, j], divided by the
    interval length."""
    if len(u) < 1:
        raise SpecError("block must be nonempty")
    if not (0 <= i <= j):
        raise SpecError("need 0 <= i <= j")
    hits = _occurrence_hits(x, u, j + 1)
    count = int(np.count_nonzero(hits[i:j + 1]))
    return FrequencyReport(u, (i, j), count, Fraction(count, j - i + 1))


def cesaro_estimate(x: Sequence, u: Word, horizon: int, points: int = 20) -> list:
    """Sampled starting-average densities on a geometric grid t <= horizon;
    returns a list of (t, density) pairs."""
    if horizon < 2:
        raise SpecError("horizon too small")
    hits = _occurrence_hits(x, u, horizon)
    cum = np.cumsum(hits)
    ts = sorted({int(round(horizon ** (i / (points - 1)))) for i in range(points)} | {horizon})
    return [(t, Fraction(int(cum[t - 1]), t)) for t in ts if t >= 1]


def entropy_estimate(x: Sequence, n: int, horizon: int) -> float:
    """(1/n) * log2 of the length-n factor count (base-2 convention, so a
    full binary shift reads 1.0)."""
    return math.log2(subword_complexity(x, n, horizon)) / n


# -- word-level periodicities ---------------------------------------------------


def quasiperiods(w: Word) -> QuasiperiodReport:
    """All quasiperiods of the word (factors whose occurrences cover every
    position) and the minimal one.  Candidates are the borders of w, plus
    w itself; coverage is checked from the occurrence list."""
    if len(w) == 0:
        raise SpecError("the empty word has no quasiperiods")
    m = len(w)
    found = []
    for q in range(1, m + 1):
        if w.codes[:q] != w.codes[m - q:]:
            continue  # a cover must match both ends
        pos = [i for i in range(m - q + 1) if w.codes[i:i + q] == w.codes[:q]]
        ok = pos[0] == 0 and pos[-1] == m - q and \
            all(b - a <= q for a, b in zip(pos, pos[1:]))
        if ok:
            found.append(w[:q])
    return QuasiperiodReport(w, found, found[0])


def _pattern_slots(pattern, alphabet) -> tuple:
    """Normalize a cover pattern to a tuple of symbol codes with None at
    holes, trimmed of leading/trailing holes (they carry no footprint)."""
    from .generators import HOLE_CHARS
    if isinstance(pattern, str):
        slots = [None if c in HOLE_CHARS else alphabet.index(c) for c in pattern]
    else:
        slots = list(pattern)
    while slots and slots[0] is None:
        slots.pop(0)
    while slots and slots[-1] is None:
        slots.pop()
    if not slots:
        raise SpecError("pattern has no symbols")
    return tuple(slots)


def is_tiling_period(u: Word, pattern) -> bool:
    """Exact cover test: translated copies of the pattern (holes cover
    nothing) must cover every position of u exactly once.  The leftmost
    uncovered position forces each placement, so the check is greedy."""
    slots = _pattern_slots(pattern, u.alphabet)
    offs = [o for o, s in enumerate(slots) if s is not None]
    m = len(u)
    covered = bytearray(m)
    remaining = m
    while remaining:
        p = covered.index(0)
        for o in offs:
            q = p + o
            if q >= m or covered[q] or u.codes[q] != slots[o]:
                return False
            covered[q] = 1
            remaining -= 1
    return True


def tiling_periods(u: Word, max_len: int = 32) -> list:
    """All patterns whose translated copies tile the word exactly
    (exhaustive search; |u| <= max_len).  Patterns are returned as slot
    tuples, shortest footprint first, the word itself included last."""
    m = len(u)
    if m > max_len:
        raise SpecError(f"exhaustive tiling search is capped at length {max_len}")
    results = []

    def search(offsets, shifts, covered, remaining):
        if not remaining:
            width = max(offsets) + 1
            slots = tuple(u.codes[o] if o in offsets else None for o in range(width))
            results.append(slots)
            return
        p = min(remaining)
        # choice A: p starts a new copy
        if all(p + o < m and p + o in remaining and u.codes[p + o] == u.codes[o]
               for o in offsets):
            newly = {p + o for o in offsets}
            search(offsets, shifts | {p}, covered | newly, remaining - newly)
        # choice B: p is a new offset of the pattern (covered via shift 0)
        o = p
        if all(s + o < m and s + o in remaining and u.codes[s + o] == u.codes[o]
               for s in shifts):
            newly = {s + o for s in shifts}
            search(offsets | {o}, shifts, covered | newly, remaining - newly)

    first = {0}
    search({0}, {0}, first, set(range(m)) - first)
    uniq = sorted(set(results), key=lambda t: (sum(1 for s in t if s is not None), len(t), t.__repr__()))
    return uniq


def pattern_text(slots: tuple, alphabet) -> str:
    return "".join("_" if s is None else alphabet.symbols[s] for s in slots)


# -- multigrade partition --------------------------------------------------------


def prouhet_partition(n: int) -> ProuhetReport:
    """Split {0, ..., 2**n - 1} by the doubling sequence value and return
    both power-sum vectors for exponents 0 .. n-1."""
    if n < 1:
        raise SpecError("need n >= 1")
    from .generators import thue_morse
    tm = thue_morse("digit_sum")
    codes = tm.codes(2 ** n)
    zeros = [i for i in range(2 ** n) if codes[i] == 0]
    ones = [i for i in range(2 ** n) if codes[i] == 1]
    zsums = [sum(i ** e for i in zeros) for e in range(n)]
    osums = [sum(i ** e for i in ones) for e in range(n)]
    return ProuhetReport(n, zeros, ones, zsums, osums)


# -- eventual-periodicity screen ---------------------------------------------------


def periodicity_screen(x: Sequence, horizon: int, n_max: int = 30) -> ScreenReport:
    """Complexity screen: if p(n) <= n for some n <= n_max the sequence is
    eventually periodic; in that case an explicit (preperiod, period) pair
    is searched for and reported when confirmed inside the horizon."""
    comps = {}
    trigger = None
    for n in range(1, n_max + 1):
        comps[n] = subword_complexity(x, n, horizon)
        if comps[n] <= n:
            trigger = n
            break
    if trigger is None:
        return ScreenReport(comps, None)
    arr = x.prefix_array(horizon)
    for period in range(1, horizon // 4 + 1):
        mism = np.flatnonzero(arr[period:] != arr[:-period])
        pre = int(mism[-1]) + 1 if mism.size else 0
        if pre <= horizon // 4:
            return ScreenReport(comps, trigger, pre, period, True)
    return ScreenReport(comps, trigger, None, None, False)


# -- arithmetic-progression witnesses ------------------------------------------------


def progression_witness(x: Sequence, u: Word, horizon: int,
                        extra_diffs=()) -> tuple | None:
    """Find (a, d) such that u occurs at a + i*d for every i with
    a + i*d + |u| <= horizon (at least three terms).  Candidate start
    points are the first few occurrences; candidate differences come from
    occurrence spacing plus any provided values."""
    n = len(u)
    hits = _occurrence_hits(x, u, horizon - n + 1)
    occ = np.flatnonzero(hits)
    if occ.size == 0:
        return None
    occ_set = set(int(v) for v in occ)
    cands = set(int(d) for d in np.diff(occ[:200])) | set(extra_diffs)
    cands |= {int(o - occ[0]) for o in occ[1:50]}
    limit = horizon - n
    for a in (int(v) for v in occ[:8]):
        for d in sorted(c for c in cands if c > 0):
            terms = range(a, limit + 1, d)
            if len(terms) < 3:
                continue
            if all(t in occ_set for t in terms):
                return a, d
    return None


def stabilization_prefix(x: Sequence, max_len: int, horizon: int) -> int:
    """Largest end position of a finitely-occurring factor of length up to
    max_len (0 when every such factor recurs): an empirical stand-in for
    the prefix after which the sequence looks uniformly recurrent."""
    worst = 0
    for n in range(1, max_len + 1):
        for first, last, _gap, _pos in _factor_groups(x, n, horizon):
            if last < horizon // 2:
                worst = max(worst, last + n)
    return worst

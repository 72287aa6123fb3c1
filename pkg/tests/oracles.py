"""Naive reference implementations used to cross-check the library.

Everything here works by direct definition scans over concrete symbol
lists; nothing reuses library internals beyond reading symbols out of a
sequence.
"""


def occurrences(hay, needle):
    """All (overlapping) start positions by direct window comparison."""
    n = len(needle)
    return [i for i in range(len(hay) - n + 1) if hay[i:i + n] == needle]


def min_window(codes, n, horizon):
    """Minimal l such that every length-n factor of the prefix occurs in
    every window [i, i+l-1] with i+l <= horizon; direct scan over l."""
    codes = codes[:horizon]
    facs = {tuple(codes[i:i + n]) for i in range(horizon - n + 1)}
    for l in range(n, horizon + 1):
        ok = True
        for i in range(0, horizon - l + 1):
            win = codes[i:i + l]
            wf = {tuple(win[j:j + n]) for j in range(l - n + 1)}
            if not facs <= wf:
                ok = False
                break
        if ok:
            return l
    return None


def factor_count(codes, n):
    return len({tuple(codes[i:i + n]) for i in range(len(codes) - n + 1)})


def quasiperiods(text):
    """All covers of the word by cell marking: for each candidate prefix,
    mark every position lying under some occurrence and keep the
    candidate iff every cell got marked."""
    m = len(text)
    out = []
    for q in range(1, m + 1):
        piece = text[:q]
        covered = [False] * m
        start = 0
        while True:
            j = text.find(piece, start)
            if j == -1:
                break
            for t in range(j, j + q):
                covered[t] = True
            start = j + 1
        if all(covered):
            out.append(piece)
    return out


def eventual_period(codes):
    """Smallest (preperiod, period) confirmed on the whole list."""
    m = len(codes)
    for t in range(1, m // 2 + 1):
        pre = 0
        for i in range(m - t - 1, -1, -1):
            if codes[i] != codes[i + t]:
                pre = i + 1
                break
        if pre <= m // 4:
            return pre, t
    return None


def longest_constant_run(codes):
    best = cur = 1
    for i in range(1, len(codes)):
        cur = cur + 1 if codes[i] == codes[i - 1] else 1
        best = max(best, cur)
    return best


def run_length_encode(values):
    out = []
    i = 0
    while i < len(values):
        j = i
        while j < len(values) and values[j] == values[i]:
            j += 1
        out.append(j - i)
        i = j
    return out


def squares(codes, max_period):
    """All (position, |u|) with codes[i:i+2u] = u-periodic, direct check."""
    out = []
    m = len(codes)
    for p in range(1, max_period + 1):
        for i in range(m - 2 * p + 1):
            if codes[i:i + p] == codes[i + p:i + 2 * p]:
                out.append((i, p))
    return out


def toeplitz_fill(pattern_slots, length, rounds=64):
    """Materialize the hole-filling iteration on a finite window: repeat
    the pattern forever, then round after round pour the pattern stream
    itself (holes included) into the current holes, in order."""
    p = len(pattern_slots)
    work = (length + p) * 4
    t0 = [pattern_slots[i % p] for i in range(work)]
    cur = list(t0)
    for _ in range(rounds):
        holes = [i for i, v in enumerate(cur) if v is None]
        if not holes or all(v is None for v in t0):
            break
        nxt = list(cur)
        for j, pos in enumerate(holes):
            if j < len(t0):
                nxt[pos] = t0[j]
        if nxt == cur:
            break
        cur = nxt
    return cur[:length]

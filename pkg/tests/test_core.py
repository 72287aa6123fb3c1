import random

import pytest

import oracles
from apseq import generators as G
from apseq.core import (Alphabet, Segment, Word, agreement_length, factors,
                        occurrences, prefix, segment, shift)
from apseq.errors import HorizonExhausted, SpecError


def test_alphabet_invariants():
    with pytest.raises(SpecError):
        Alphabet(())
    with pytest.raises(SpecError):
        Alphabet(("a", "a"))
    b = Alphabet.binary()
    assert list(b) == ["0", "1"]
    assert b.index("1") == 1
    with pytest.raises(SpecError):
        b.index("2")


def test_word_basics():
    b = Alphabet.binary()
    w = b.word("0110")
    assert len(w) == 4 and w[1] == "1" and w.text == "0110"
    assert w.count("1") == 2 and w.count("0") == 2
    assert (w + b.word("1")).text == "01101"
    assert w.complement().text == "1001"
    assert w[1:3].text == "11"
    multi = Alphabet.of("10", "20")
    assert multi.word(["10", "20"]).text == "10,20"


def test_prefix_and_segment(tm, fib, p01):
    assert prefix(tm, 16).text == "0110100110010110"
    assert prefix(tm, 0).text == ""
    assert prefix(p01, 5).text == "01010"
    assert segment(tm, Segment(0, 3)).text == "0110"
    assert segment(fib, Segment(0, 20)).text == "010010100100101001010"
    k = 7
    assert segment(tm, Segment(k, k)).text == tm[k]


def test_segment_prefix_coherence(tm, fib, kolak):
    for x in (tm, fib, kolak):
        for n in (1, 17, 256, 10**4):
            assert segment(x, Segment(0, n - 1)).codes == prefix(x, n).codes


def test_factors():
    b = Alphabet.binary()
    w = b.word("0110")
    assert {f.text for f in factors(w, 2)} == {"01", "11", "10"}
    assert factors(w, 5) == set()
    with pytest.raises(SpecError):
        factors(w, 0)


def test_factors_of_sequence(tm, fib):
    assert len(factors(fib, 4, horizon=200)) == 5
    assert len(factors(tm, 3, horizon=1000)) == 6
    with pytest.raises(SpecError):
        factors(tm, 3)  # horizon required


def test_occurrences():
    b = Alphabet.binary()
    u4 = b.word("0110100110010110")
    # recomputed by brute force: the doubling word of size 16 contains its
    # 4-prefix at 0, 6 and 12
    hits = occurrences(u4, b.word("0110"))
    assert hits == [0, 6, 12]
    assert hits == oracles.occurrences(list(u4.codes), [0, 1, 1, 0])
    a = Alphabet.of("a")
    assert occurrences(a.word("aaaa"), a.word("aa")) == [0, 1, 2]
    with pytest.warns(UserWarning):
        assert occurrences(b.word("01"), Alphabet.of("2").word("2")) == []


def test_occurrences_complete_against_brute_force():
    rng = random.Random(7)
    b = Alphabet.binary()
    for _ in range(20):
        m = rng.randrange(10, 2000)
        hay = [rng.randrange(2) for _ in range(m)]
        nl = rng.randrange(1, 6)
        start = rng.randrange(0, m - nl)
        needle = hay[start:start + nl]  # guaranteed to occur
        got = occurrences(Word(b, tuple(hay)), Word(b, tuple(needle)))
        assert got == oracles.occurrences(hay, needle)


def test_agreement_length(tm, fib, p01):
    assert agreement_length(tm, tm, 100) is None
    assert agreement_length(tm, p01, 100) == 2
    # brute-force recomputation: fib = 01001..., doubling word = 01101...
    assert agreement_length(fib, tm, 100) == 2


def test_shift(tm, p01):
    assert prefix(shift(p01, 1), 4).text == "1010"
    assert prefix(shift(tm, 1), 5).text == "11010"
    s0 = shift(tm, 0)
    assert all(s0[i] == tm[i] for i in range(50))
    assert s0.certified_bound is None  # dropped on shift


def test_shift_composition(tm):
    rng = random.Random(11)
    for _ in range(5):
        a, b_ = rng.randrange(0, 100), rng.randrange(0, 100)
        n = rng.randrange(1, 1000)
        lhs = prefix(shift(shift(tm, a), b_), n)
        rhs = prefix(shift(tm, a + b_), n)
        assert lhs.codes == rhs.codes


def test_determinism_fresh_oracle(tm):
    # same family constructed twice: cache vs fresh evaluation agree
    fresh = G.thue_morse()
    idx = [0, 1, 5, 100, 999, 12345]
    assert [tm[i] for i in idx] == [fresh[i] for i in idx]
    # repeated reads of one instance agree with themselves
    assert [tm[i] for i in idx] == [tm[i] for i in idx]


def test_horizon_cap():
    x = G.periodic("01")
    x.horizon_cap = 100
    with pytest.raises(HorizonExhausted):
        x.prefix(101)
    assert x.prefix(100).text.startswith("0101")


def test_segment_invariant():
    with pytest.raises(SpecError):
        Segment(3, 2)
    with pytest.raises(SpecError):
        Segment(-1, 2)
    assert len(Segment(2, 5)) == 4


def test_concurrent_readers():
    import threading

    x = G.thue_morse()
    want = G.thue_morse().prefix(20000).codes
    results = [None] * 8
    def reader(slot):
        results[slot] = tuple(x.codes(20000)[:20000])
    threads = [threading.Thread(target=reader, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == want for r in results)

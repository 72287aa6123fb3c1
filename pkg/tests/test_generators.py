import random

import pytest

import oracles
from apseq import analysis as A
from apseq import generators as G
from apseq.core import Alphabet, Word, agreement_length
from apseq.errors import GenerationStuck, PrecisionExhausted, SpecError

B = Alphabet.binary()


# -- periodic families -------------------------------------------------------


def test_periodic(p01):
    assert p01.prefix(6).text == "010101"
    assert p01.certified_bound(2) == 3
    with pytest.raises(SpecError):
        G.periodic("")


def test_certified_regulator_value_matches_brute_force(p01):
    # the periodic bound is tight enough for the exact algorithm
    assert A.certified_regulator(p01, 2).value == oracles.min_window(p01.codes(400)[:400], 2, 400)


def test_eventually_periodic():
    ep = G.eventually_periodic("1", "0")
    assert ep.prefix(5).text == "10000"
    # sound window: straddling the preperiod needs pre + n + period - 1
    assert ep.certified_bound(1) == 2
    assert A.check_certified_bound(ep, 1, 4000)
    tricky = G.eventually_periodic("2", "01")
    assert tricky.certified_bound(1) == 3  # max-form would give 2 and be violated
    assert A.check_certified_bound(tricky, 1, 4000)


# -- doubling construction ---------------------------------------------------


def test_thue_morse_printed_prefix(tm):
    assert tm.prefix(32).text == "01101001100101101001011001101001"


def test_thue_morse_digit_sum_value():
    t = G.thue_morse("digit_sum")
    assert t[5] == "0"  # binary digit sum of 5 is 2


def test_thue_morse_definitions_agree(tm):
    for d in ("digit_sum", "morphic"):
        assert agreement_length(tm, G.thue_morse(d), 10**5) is None


def test_thue_morse_bound_margin(tm):
    # measured regulator reaches 9 at n=2 and 43 at n=8: one doubling level
    # above the 4*2^m window is required and suffices
    for n in range(1, 13):
        rep = A.empirical_regulator(tm, n, 10**5)
        assert rep.value <= tm.certified_bound(n)
    assert tm.certified_bound(2) == 16
    assert A.empirical_regulator(tm, 2, 10**5).value == 9


# -- mechanical ---------------------------------------------------------------


def test_mechanical_golden(fib):
    mech = G.mechanical(G.inv_golden_sq(), G.inv_golden_sq(), "lower")
    assert mech.prefix(21).text == "010010100100101001010"
    assert agreement_length(fib, mech, 10**4) is None


def test_mechanical_rational():
    assert G.mechanical("0", "0").prefix(5).text == "00000"
    assert G.mechanical("1/2", "0").prefix(6).text == "010101"
    assert G.mechanical("1/2", "0", "upper").prefix(6).text == "101010"
    with pytest.raises(SpecError):
        G.mechanical("3/2", "0")
    with pytest.raises(SpecError):
        G.mechanical("1/2", "1")


def test_mechanical_precision_budget():
    # adversarial oracle straddling the integer 1 never lets a floor settle
    from fractions import Fraction
    stuck = G.RealParam(oracle=lambda eps: (1 - Fraction(eps) / 2, 1 + Fraction(eps) / 2),
                        name="straddles-one")
    x = G.mechanical(stuck, G.RealParam.of(0), "lower")
    with pytest.raises(PrecisionExhausted):
        x.prefix(1)


# -- morphic engine ------------------------------------------------------------


def test_morphic_fixed_points(fib):
    phi = G.Morphism.from_rules(B, B, {"0": "01", "1": "10"})
    assert G.morphic(phi, "0").prefix(16).text == "0110100110010110"
    psi = G.Morphism.from_rules(B, B, {"0": "01", "1": "0"})
    assert G.morphic(psi, "0").prefix(8).text == "01001010"
    a = Alphabet.of("a")
    ident = G.Morphism.identity(a)
    assert G.morphic(ident, "a").prefix(6).text == "aaaaaa"


def test_morphic_with_coding():
    # doubling construction seen through a relabeling
    phi = G.Morphism.from_rules(B, B, {"0": "01", "1": "10"})
    ab = Alphabet.of("a", "b")
    coding = G.Morphism.from_rules(B, ab, {"0": "a", "1": "b"})
    x = G.morphic(phi, "0", coding)
    assert x.prefix(8).text == "abbabaab"
    with pytest.raises(SpecError):
        G.morphic(phi, "0", G.Morphism.from_rules(B, B, {"0": "01", "1": "1"}))


def test_morphic_errors():
    phi = G.Morphism.from_rules(B, B, {"0": "10", "1": "01"})
    with pytest.raises(SpecError):
        G.morphic(phi, "0")  # not prolongable
    erasing = G.Morphism.from_rules(B, B, {"0": "01", "1": ""}, erasing_ok=True)
    with pytest.raises(SpecError):
        G.morphic(erasing, "0")  # remainder letters all mortal
    abc = Alphabet.of("0", "1", "2")
    ok = G.Morphism.from_rules(abc, abc, {"0": "012", "1": "", "2": "2"}, erasing_ok=True)
    assert G.morphic(ok, "0").prefix(6).text == "012222"
    with pytest.raises(SpecError):
        G.Morphism.from_rules(B, B, {"0": "01", "1": ""})  # erasing needs the flag


def test_mortality():
    abc = Alphabet.of("a", "b", "c")
    phi = G.Morphism.from_rules(abc, abc, {"a": "b", "b": "", "c": "ca"},
                                erasing_ok=True)
    assert phi.mortal_letters() == {"a", "b"}


# -- automatic -----------------------------------------------------------------


def _parity_dfao():
    return G.DFAO(2, ("e", "o"), "e",
                  {("e", 0): "e", ("e", 1): "o", ("o", 0): "o", ("o", 1): "e"},
                  {"e": "0", "o": "1"}, B)


def _powers_of_two_dfao():
    return G.DFAO(2, ("z", "zero", "one", "dead"), "z",
                  {("z", 0): "zero", ("z", 1): "one",
                   ("zero", 0): "dead", ("zero", 1): "dead",
                   ("one", 0): "one", ("one", 1): "dead",
                   ("dead", 0): "dead", ("dead", 1): "dead"},
                  {"z": "0", "zero": "0", "one": "1", "dead": "0"}, B)


def test_automatic_doubling(tm):
    x = G.automatic(_parity_dfao())
    assert x.prefix(32).text == tm.prefix(32).text


def test_automatic_powers_of_two():
    x = G.automatic(_powers_of_two_dfao())
    # 1 exactly at the binary weights 1, 2, 4, 8, ...
    expect = "".join("1" if i > 0 and (i & (i - 1)) == 0 else "0" for i in range(16))
    assert x.prefix(16).text == expect == "0110100010000000"


def test_automatic_constant():
    d = G.DFAO(2, ("q",), "q", {("q", 0): "q", ("q", 1): "q"}, {"q": "7"},
               Alphabet.of("7"))
    assert G.automatic(d).prefix(5).text == "77777"


# -- block products --------------------------------------------------------------


def test_block_product_word():
    u, v = B.word("01"), B.word("01")
    assert G.block_product_word(u, v).text == "0110"
    assert G.block_product_word(u, Word(B, ())).text == ""


def test_block_product_algebra():
    rng = random.Random(3)
    for _ in range(25):
        u = Word(B, (0,) + tuple(rng.randrange(2) for _ in range(rng.randrange(7))))
        v = Word(B, tuple(rng.randrange(2) for _ in range(rng.randrange(8))))
        w = Word(B, tuple(rng.randrange(2) for _ in range(rng.randrange(8))))
        lhs = G.block_product_word(u, v + w)
        rhs = G.block_product_word(u, v) + G.block_product_word(u, w)
        assert lhs.codes == rhs.codes  # right distributivity
        lhs = G.block_product_word(u, G.block_product_word(v, w))
        rhs = G.block_product_word(G.block_product_word(u, v), w)
        assert lhs.codes == rhs.codes  # associativity


def test_keane_printed_prefix():
    assert G.keane().prefix(25).text == "0010011100010011101101100"


def test_block_product_seq_validation():
    with pytest.raises(SpecError):
        G.block_product_seq(["01", "10"]).prefix(8)  # later block starts with 1
    with pytest.raises(SpecError):
        G.block_product_seq(["01", "00"], assert_both_letters=True).prefix(8)


def test_alternating_prefix_imbalance():
    # |u_m|_0 - |u_m|_1 alternates sign with magnitude 2^m
    u = B.word("001")
    block = B.word("0111")
    for m in range(0, 7):
        w = u
        for _ in range(m):
            w = G.block_product_word(w, block)
        assert w.count("0") - w.count("1") == (-1) ** m * 2 ** m
    ape = G.alternating_prefix_example()
    stream = G.block_product_seq(["001", "0111"])
    assert agreement_length(ape, stream, 10**4) is None


# -- schemes -----------------------------------------------------------------------


def test_scheme_validate_ok():
    assert G.scheme_validate(G.doubling_scheme(), 5) == []
    assert G.scheme_validate(G.pair_alternation_scheme(), 4) == []
    assert G.scheme_validate(G.aperiodic_scheme(), 4) == []


def test_scheme_validate_violations():
    # wrong length at level 2
    def bad_level(n):
        l = 2 ** n
        words = (Word(B, (0,) * l), Word(B, (1,) * (l + (1 if n == 2 else 0))))
        return l, words
    bad = G.ApScheme(B, bad_level)
    viols = G.scheme_validate(bad, 3)
    assert any(v.level == 2 and v.condition == 1 for v in viols)

    # pair set missing a block in second position
    def bad_gap(n):
        l = 2 * 3 ** n
        a = Word(B, (0, 1) * (l // 2))
        b = a.complement()
        pairs = (a + b,)  # b never appears as the second half
        return l, (a, b), pairs
    viols = G.scheme_validate(G.GapScheme(B, bad_gap), 1)
    assert any(v.condition == 2 and "second" in v.message for v in viols)

    # straddling pair of a level-1 pair word escapes the level-0 pair set
    good = G.pair_alternation_scheme()

    def bad_straddle(n):
        ln, bn, cn = good.level(n)
        if n == 1:
            a, b = bn
            return ln, bn, (a + a, b + b)  # middles (01,01),(10,10) not in C_0
        return ln, bn, cn
    viols = G.scheme_validate(G.GapScheme(B, bad_straddle), 1)
    assert any(v.condition == 4 for v in viols)


def test_scheme_generate_doubling_matches_doubling_word(tm):
    x = G.scheme_generate(G.doubling_scheme())
    assert agreement_length(x, tm, 10**4) is None
    for n in range(1, 9):
        xf = {w.codes for w in x.prefix(4000).factors(n)}
        tf = {w.codes for w in tm.prefix(4000).factors(n)}
        assert xf == tf


def test_scheme_generate_constant():
    zeros = G.substitution_scheme("ap", B, {"0": "0"}, {"0": "00"}, name="zeros")
    x = G.scheme_generate(zeros)
    assert x.prefix(64).text == "0" * 64


def test_scheme_generate_policies():
    sch = G.choice_scheme()
    lex = G.scheme_generate(sch, policy="lex")
    rnd = G.scheme_generate(sch, policy="random", seed=42)
    rnd2 = G.scheme_generate(sch, policy="random", seed=42)
    assert rnd.prefix(500).codes == rnd2.prefix(500).codes  # seeded determinism
    assert lex.prefix(5).text == "00110"
    # every level of the choice scheme offers both continuations
    cb = G.scheme_generate(sch, policy=lambda level, cands: cands[-1])
    assert cb.prefix(5).text == "11001"
    assert G.scheme_validate(sch, 3) == []


def test_scheme_generate_stuck():
    # every chain dies at level 2: the only level-2 word extends no
    # level-1 word
    def level(n):
        if n == 0:
            return 1, (Word(B, (0,)),)
        if n == 1:
            return 2, (Word(B, (0, 1)),)
        return 2 ** n, (Word(B, (1,) * 2 ** n),)
    with pytest.raises(GenerationStuck):
        G.scheme_generate(G.ApScheme(B, level)).prefix(4)


def test_gap_generation_window_constraints(branching_seq, scheme_seq):
    # a-posteriori check of the pair-window constraints through level 4
    for sch, x in ((G.aperiodic_scheme(), branching_seq),
                   (G.pair_alternation_scheme(), scheme_seq)):
        for n in range(0, 5):
            ln, _bn, cn = sch.level(n)
            cset = {w.codes for w in cn}
            limit = min(10**4, 20 * ln)
            pref = x.codes(limit)
            i = 0
            while (i + 2) * ln <= limit:
                assert tuple(pref[i * ln:(i + 2) * ln]) in cset
                i += 1


def test_gap_mode_junk_prefix():
    sch = G.pair_alternation_scheme()
    x = G.scheme_generate(sch, mode="GAP", junk="111")
    assert x.prefix(7).text == "1110110"
    # bound accounts for the junk: still empirically sound
    for n in (1, 2, 3):
        assert A.check_certified_bound(x, n, 10**4)
    rep = A.empirical_regulator(x, 3, 10**4)
    assert "111" in [w.text for w in rep.finitely_occurring]


def test_scheme_bounds_empirically_sound(scheme_seq, branching_seq):
    for x in (scheme_seq, branching_seq):
        for n in (1, 2, 4, 8):
            assert A.check_certified_bound(x, n, 10**5)


# -- hole filling -------------------------------------------------------------------


def test_toeplitz_paperfolding():
    pf = G.paperfolding()
    assert pf.prefix(32).text == "11011001110010011101100011001001"


def test_toeplitz_iterative_oracle_agreement():
    rng = random.Random(99)
    pats = ["1_", "1_0_", "10__1_"]
    while len(pats) < 8:
        p = rng.randrange(2, 7)
        slots = ["1"] + [rng.choice("01_") for _ in range(p - 1)]
        t = "".join(slots)
        if "_" in t:
            pats.append(t)
    for text in pats:
        pat = G.ToeplitzPattern.from_text(text)
        x = G.toeplitz(pat)
        want = oracles.toeplitz_fill(pat.slots, 10**4, rounds=256)
        got = list(x.prefix(10**4).codes)
        assert got == want, text


def test_toeplitz_validation():
    with pytest.raises(SpecError):
        G.ToeplitzPattern.from_text("10")  # no holes: use periodic()
    with pytest.raises(SpecError):
        G.ToeplitzPattern.from_text("__")
    with pytest.raises(SpecError):
        G.ToeplitzPattern.from_text("_1")  # position 0 would never resolve


# -- self-describing run lengths ------------------------------------------------------


def test_kolakoski_prefix(kolak):
    assert kolak.prefix(23).text == "22112122122112112212112"


def test_kolakoski_rle_self_similar(kolak):
    for h in (10**3, 10**4, 10**5):
        vals = [c + 1 for c in kolak.codes(h)[:h]]
        rle = oracles.run_length_encode(vals)[:-1]
        assert rle == vals[:len(rle)]


def test_kolakoski_alternating_system(kolak):
    sys = G.kolakoski_system()
    w = sys.alphabet.word("2211")
    assert G.alternating_apply(sys, w).text == "221121"
    w2 = sys.alphabet.word("221121221")
    assert G.alternating_apply(sys, w2).text == "22112122122112"
    assert agreement_length(kolak, G.alternating_morphic(sys), 10**4) is None


def test_alternating_single_morphism_degenerates(tm):
    phi = G.Morphism.from_rules(B, B, {"0": "01", "1": "10"})
    x = G.alternating_morphic(G.AlternatingMorphismSystem((phi,), "0"))
    assert agreement_length(x, tm, 10**4) is None


# -- progression rewriting -------------------------------------------------------------


def test_progression_rewrite_constant():
    x = G.progression_rewrite(G.constant("0"), G.geometric_levels(4, 4))
    assert x.prefix(300).text == "0" * 300


def test_progression_rewrite_prefix_recurs_along_progressions():
    base = G.eventually_periodic("0", "011")
    levels = G.geometric_levels(8, 8)
    x = G.progression_rewrite(base, levels)
    pref = x.codes(10**5)
    for k in range(0, 4):
        nk, nk1 = levels(k), levels(k + 1)
        target = pref[:nk]
        i = 0
        while i * nk1 + nk <= 10**5:
            assert pref[i * nk1:i * nk1 + nk] == target, (k, i)
            i += 1


def test_progression_rewrite_untouched_positions_keep_base():
    base = G.eventually_periodic("0", "011")
    levels = G.geometric_levels(8, 8)
    x = G.progression_rewrite(base, levels)
    for i in (1, 2, 3, 9, 11, 70, 71):
        # classified never-rewritten: i mod n_{k+1} >= n_k at every level
        k = 0
        pinned = False
        while levels(k + 1) <= i:
            if i % levels(k + 1) < levels(k):
                pinned = True
                break
            k += 1
        if not pinned:
            assert x[i] == base[i]


def test_progression_rewrite_bound_only_when_aligned():
    aligned = G.progression_rewrite(G.periodic("01"), G.geometric_levels(4, 4))
    assert aligned.certified_bound is not None
    assert A.check_certified_bound(aligned, 2, 10**4)
    misaligned = G.progression_rewrite(G.eventually_periodic("0", "011"),
                                       G.geometric_levels(8, 8))
    assert misaligned.certified_bound is None
    with pytest.raises(SpecError):
        G.progression_rewrite(G.constant("0"), lambda k: 3 * 2 ** k + (k == 1))


# -- triangular-sum witness --------------------------------------------------------------


def test_witness_image_table():
    assert G.triangular_images(5) == {
        "0": "01310", "1": "12421", "2": "23032", "3": "34143", "4": "40204"}
    # evaluating the sum formula directly for k=3, letter 0: 0,1,0
    assert G.triangular_images(3)["0"] == "010"


def test_witness_prefix(x5):
    assert x5.prefix(30).text == "013101242134143124210131012421"
    with pytest.raises(SpecError):
        G.aperiodicity_witness(2)

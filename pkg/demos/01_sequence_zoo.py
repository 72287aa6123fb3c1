#!/usr/bin/env python3
"""A tour of the sequence families: construct each generator and print a
prefix together with one identifying fact."""

from apseq import generators as G
from apseq import analysis as A
from apseq.core import agreement_length


def show(name, x, n=40, note=""):
    print(f"{name:28s} {x.prefix(n).text}  {note}")


def main():
    print("== periodic and nearly periodic ==")
    show("periodic 01", G.periodic("01"), 24)
    show("eventually periodic 1+0*", G.eventually_periodic("1", "0"), 24)

    print("\n== doubling construction (invert and append) ==")
    tm = G.thue_morse()
    show("recurrence", tm, 32)
    show("digit-sum parity", G.thue_morse("digit_sum"), 32)
    show("fixed point 0>01 1>10", G.thue_morse("morphic"), 32)
    print(f"{'':28s} certified window for n=4: {tm.certified_bound(4)} symbols")

    print("\n== golden-slope word, three ways ==")
    fib = G.fibonacci()
    show("fixed point 0>01 1>0", fib, 34)
    mech = G.mechanical(G.inv_golden_sq(), G.inv_golden_sq(), "lower")
    show("mechanical (floor diffs)", mech, 34)
    print(f"{'':28s} agree to 10^4: {agreement_length(fib, mech, 10**4) is None}")

    print("\n== block products ==")
    show("keane 001 x 001 x ...", G.keane(), 36)
    ape = G.alternating_prefix_example()
    show("001 x 0111 x 0111 ...", ape, 36,
         "(prefix imbalances alternate sign, magnitude 2^m)")

    print("\n== schemes (level-indexed block systems) ==")
    sch = G.pair_alternation_scheme()
    print(f"violations through level 4: {G.scheme_validate(sch, 4)}")
    show("pair-alternation output", G.scheme_generate(sch), 24)
    show("forced-chain aperiodic", G.scheme_generate(G.aperiodic_scheme()), 36)
    show("choice scheme (lex)", G.scheme_generate(G.choice_scheme()), 25)
    show("choice scheme (seed 7)", G.scheme_generate(G.choice_scheme(),
                                                     policy="random", seed=7), 25)

    print("\n== hole filling ==")
    show("paperfolding 1_0_", G.paperfolding(), 32)
    show("pattern 1__0", G.toeplitz(G.ToeplitzPattern.from_text("1__0")), 32)

    print("\n== self-describing run lengths ==")
    kol = G.kolakoski()
    show("kolakoski", kol, 36)
    alt = G.alternating_morphic(G.kolakoski_system())
    print(f"{'':28s} equals its alternating-morphism form to 10^4: "
          f"{agreement_length(kol, alt, 10**4) is None}")

    print("\n== rewriting and witnesses ==")
    z = G.progression_rewrite(G.eventually_periodic("0", "011"),
                              G.geometric_levels(8, 8))
    show("progression rewrite", z, 40, "(every prefix recurs on a progression)")
    show("triangular witness k=5", G.aperiodicity_witness(5), 30)
    print(f"{'':28s} substitution table: {G.triangular_images(5)}")

    print("\n== automatic (digit automaton) ==")
    d = G.DFAO(2, ("e", "o"), "e",
               {("e", 0): "e", ("e", 1): "o", ("o", 0): "o", ("o", 1): "e"},
               {"e": "0", "o": "1"}, G.BINARY)
    show("2-state parity automaton", G.automatic(d), 32)


if __name__ == "__main__":
    main()

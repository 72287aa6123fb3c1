#!/usr/bin/env python3
"""The acceptance decision engine: certified limit sets for deterministic
omega-acceptors, the refusal boundary, and the window economics."""

from apseq import generators as G
from apseq import omega as O
from apseq.core import Alphabet
from apseq.errors import CostRefusal, NoCertifiedBound

B = Alphabet.binary()


def main():
    tracker = O.both_letters_tracker()
    print("acceptor: both letters infinitely often "
          f"(states {tracker.states}, limit family {sorted(map(sorted, tracker.accepting))})")

    sequences = {
        "doubling word": G.thue_morse(),
        "periodic 01": G.periodic("01"),
        "eventually 01+0*": G.eventually_periodic("01", "0"),
        "scheme output": G.scheme_generate(G.pair_alternation_scheme()),
    }
    print()
    for name, x in sequences.items():
        v = O.decide_muller(tracker, x)
        oracle = O.limit_set_oracle(tracker, x, 10**5)
        print(f"{name:18s} {'ACCEPT' if v.accept else 'REJECT'} "
              f"limit={sorted(v.limit_macrostate)} window=[{v.window.i},{v.window.j}] "
              f"oracle-agrees={frozenset(oracle) == v.limit_macrostate}")

    print("\n== the refusal boundary ==")
    try:
        O.decide_muller(tracker, G.kolakoski())
    except NoCertifiedBound as e:
        print(f"kolakoski: refused ({str(e).split(';')[0]})")
    try:
        O.decide_muller(tracker, G.fibonacci())
    except NoCertifiedBound:
        print("golden word: refused (no certified bound ships for it); the")
        print("empirical oracle still reports "
              f"{sorted(O.limit_set_oracle(tracker, G.fibonacci(), 10**5))}")

    print("\n== window economics ==")
    for m in (1, 2, 3):
        aut = O.cycle_counter_automaton(B, m)
        v = O.decide_muller(aut, G.thue_morse())
        print(f"{m}-state acceptor on the doubling word: inspected "
              f"[{v.window.i}, {v.window.j}]")
    capped = G.thue_morse()
    capped.horizon_cap = 10**5
    try:
        O.decide_muller(O.cycle_counter_automaton(B, 3), capped)
    except CostRefusal as e:
        print(f"with the cap at 1e5 the 3-state window is refused: needs {e.needed}")

    print("\n== recurring-state acceptors ==")
    sees1 = O.sees_letter_buchi(B, "1")
    for name, x in (("periodic 01", G.periodic("01")),
                    ("all zeros", G.periodic(B.word("00")))):
        v = O.decide_buchi_det(sees1, x)
        print(f"sees 1 infinitely often on {name}: "
              f"{'ACCEPT' if v.accept else 'REJECT'}")


if __name__ == "__main__":
    main()

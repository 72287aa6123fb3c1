#!/usr/bin/env python3
"""Recurrence analysis: window statistics, certified values, complexity,
balance, mismatch measures, and the recurrence quotient."""

from apseq import analysis as A
from apseq import generators as G


def main():
    tm = G.thue_morse()
    fib = G.fibonacci()
    p01 = G.periodic("01")

    print("== three kinds of regulator value ==")
    print("n  empirical(1e5)  exact  asserted-bound   (doubling word)")
    for n in range(1, 9):
        emp = A.empirical_regulator(tm, n, 10**5).value
        exact = A.certified_regulator(tm, n).value
        upper = tm.certified_bound(n)
        print(f"{n}  {emp:14d}  {exact:5d}  {upper:14d}")

    print("\n== two-part semantics on an eventually periodic word ==")
    ep = G.eventually_periodic("1", "0")
    rep = A.empirical_regulator(ep, 1, 10**4)
    print(f"value {rep.value}; finitely occurring factors: "
          f"{[w.text for w in rep.finitely_occurring]}")

    print("\n== recurrence quotient of the golden word ==")
    rep = A.ap_coefficient(fib, 40, 10**5)
    peaks = {n: rep.rd[n] for n in (1, 3, 8, 21, 34) if n in rep.rd}
    print(f"rd at golden lengths: {peaks}")
    print(f"max window quotient r(n)/n for n <= 40: {float(rep.max_ratio):.4f} "
          f"(limit value for the golden word: 3.6180...)")

    print("\n== complexity and entropy ==")
    for name, x in (("periodic", p01), ("golden", fib), ("doubling", tm),
                    ("random", G.random_sequence(G.BINARY, 1))):
        comps = [A.subword_complexity(x, n, 10**4) for n in range(1, 9)]
        ent = A.entropy_estimate(x, 8, 10**4)
        print(f"{name:9s} p(1..8) = {comps}  entropy(8) = {ent:.3f}")

    print("\n== balance ==")
    print(f"golden word balanced to 20: {A.is_balanced(fib, 20, 10**4).balanced}")
    rep = A.is_balanced(tm, 8, 10**4)
    print(f"doubling word violation at n={rep.n}: "
          f"{rep.low.text} vs {rep.high.text}")

    print("\n== power avoidance ==")
    print(f"doubling cubes in 1e4:    {A.detect_powers(tm, 10**4, 'cube')}")
    print(f"doubling overlaps in 1e4: {A.detect_powers(tm, 10**4, 'overlap')}")
    kol = G.kolakoski()
    sq = A.detect_powers(kol, 10**4, "square")
    print(f"kolakoski square lengths in 1e4: {sorted({2 * u for _, u in sq})}")

    print("\n== shift-mismatch (aperiodicity) measure ==")
    for name, x, shifts in (("doubling", tm, 64), ("golden", fib, 100),
                            ("witness k=5", G.aperiodicity_witness(5), 125)):
        rep = A.am_estimate(x, shifts, 2**16)
        print(f"{name:12s} min over {shifts} shifts: {float(rep.minimum):.4f} "
              f"(at shift {rep.argmin})")

    print("\n== covers and tilings of finite words ==")
    w = G.word_from_text("abaaba")
    rep = A.quasiperiods(w)
    print(f"covers of {w.text}: {[q.text for q in rep.quasiperiods]} "
          f"(minimal {rep.minimal.text})")
    u = G.word_from_text("0011")
    pats = [A.pattern_text(t, u.alphabet) for t in A.tiling_periods(u)]
    print(f"tiling periods of {u.text}: {pats}")

    print("\n== multigrade partition from the doubling word ==")
    rep = A.prouhet_partition(4)
    print(f"zeros {rep.zeros}")
    print(f"ones  {rep.ones}")
    print(f"power sums agree for e < 4: {rep.zero_power_sums} == {rep.one_power_sums}")


if __name__ == "__main__":
    main()

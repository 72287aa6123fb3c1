"""Omega-automata and the certified acceptance decision.

A deterministic automaton accepts a sequence according to the set of
states it visits infinitely often.  For a sequence carrying a certified
regulator bound that limit set is computable exactly: feed the sequence
through the state-emitting machine of the automaton, propagate the bound
through the uniform-image window formula to get g, and read the states
occurring in the segment [g(1), 2 g(1) - 1] of the state stream — by the
bound, those are precisely the states that never stop occurring.

Sequences without a certified bound are refused: acceptance for a
deterministic automaton is decidable exactly on the sequences whose
regulator admits a computable bound, and the engine's refusal mirrors
that boundary rather than guessing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Alphabet, Bound, Segment, Sequence
from .errors import CostRefusal, MachineParseError, NoCertifiedBound, SpecError, UnsupportedFeature
from .transforms import bound_formulas

# -- automata ----------------------------------------------------------------


@dataclass(frozen=True)
class MullerAutomaton:
    """Deterministic acceptor with a family of accepting limit sets."""

    alphabet: Alphabet
    states: tuple
    initial: str
    delta: dict                 # (state, symbol) -> state
    accepting: frozenset        # frozenset of frozensets of states

    def __post_init__(self):
        if self.initial not in self.states:
            raise SpecError("initial state missing")
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise SpecError(f"transition missing at ({q!r}, {a!r})")
                if self.delta[(q, a)] not in self.states:
                    raise SpecError("transition to unknown state")
        for mset in self.accepting:
            if not frozenset(mset) <= set(self.states):
                raise SpecError("accepting macrostate outside the state set")


@dataclass(frozen=True)
class BuchiAutomaton:
    """Acceptor with a set of accepting states: a run is accepting when
    some accepting state recurs forever.  Nondeterministic transition
    relations are stored for parsing and printing only; the decision
    procedures require the deterministic form."""

    alphabet: Alphabet
    states: tuple
    initial: str
    transitions: frozenset      # frozenset of (state, symbol, state)
    accepting: frozenset        # frozenset of states

    def __post_init__(self):
        if self.initial not in self.states:
            raise SpecError("initial state missing")
        if not self.accepting <= set(self.states):
            raise SpecError("accepting states outside the state set")

    @property
    def deterministic(self) -> bool:
        seen = {}
        for q, a, q2 in self.transitions:
            if (q, a) in seen and seen[(q, a)] != q2:
                return False
            seen[(q, a)] = q2
        return all((q, a) in seen for q in self.states for a in self.alphabet)

    def delta(self) -> dict:
        if not self.deterministic:
            raise UnsupportedFeature(
                "nondeterministic acceptor: determinization is out of scope; "
                "supply the deterministic form")
        return {(q, a): q2 for q, a, q2 in self.transitions}


@dataclass(frozen=True)
class Verdict:
    accept: bool
    limit_macrostate: frozenset
    window: Segment
    bound_provenance: str


# -- runs ----------------------------------------------------------------------


def run(automaton, x: Sequence, steps: int) -> list:
    """The first ``steps`` states of the run: state 0 is the initial
    state, state i+1 follows by reading x(i)."""
    delta = automaton.delta() if isinstance(automaton, BuchiAutomaton) else automaton.delta
    syms = x.alphabet.symbols
    xs = x.codes(max(steps - 1, 0))
    states = [automaton.initial]
    q = automaton.initial
    for i in range(steps - 1):
        q = delta[(q, syms[xs[i]])]
        states.append(q)
    return states


def limit_set_oracle(automaton, x: Sequence, horizon: int) -> frozenset:
    """States visited in the second half of a long finite run: an
    empirical stand-in for the limit set, used to cross-check the
    certified decision."""
    if horizon < 2:
        raise SpecError("horizon must be at least 2")
    states = run(automaton, x, horizon)
    return frozenset(states[horizon // 2:])


# -- certified decision -----------------------------------------------------------


def _certified_limit_set(automaton, x: Sequence):
    if x.certified_bound is None:
        raise NoCertifiedBound(
            f"{x.provenance} carries no certified regulator bound; acceptance is "
            "decided only for sequences with one (the decidability boundary)")
    delta = automaton.delta() if isinstance(automaton, BuchiAutomaton) else automaton.delta
    m = len(automaton.states)
    g = bound_formulas(x.certified_bound, m)["image"]
    w = g(1)
    if 2 * w > x.horizon_cap:
        raise CostRefusal(
            f"certified window [{w}, {2*w - 1}] exceeds the horizon cap "
            f"{x.horizon_cap}; raise the cap to decide this pair",
            needed=2 * w, cap=x.horizon_cap)
    syms = x.alphabet.symbols
    xs = x.codes(2 * w)
    q = automaton.initial
    seen = set()
    for i in range(2 * w):
        if i >= w:
            seen.add(q)
        q = delta[(q, syms[xs[i]])]
    return frozenset(seen), Segment(w, 2 * w - 1), g.provenance


def decide_muller(automaton: MullerAutomaton, x: Sequence) -> Verdict:
    """Accept iff the certified limit set belongs to the accepting
    family.  Exact whenever the attached bound is sound."""
    limit, window, prov = _certified_limit_set(automaton, x)
    return Verdict(limit in automaton.accepting, limit, window, prov)


def decide_buchi_det(automaton: BuchiAutomaton, x: Sequence) -> Verdict:
    """Accept iff the certified limit set meets the accepting states.
    Nondeterministic input raises UnsupportedFeature."""
    limit, window, prov = _certified_limit_set(automaton, x)
    return Verdict(bool(limit & automaton.accepting), limit, window, prov)


# -- text format --------------------------------------------------------------------


def print_automaton(automaton) -> str:
    """Canonical text form shared by both acceptor kinds:

        states: q0 q1
        start: q0
        alphabet: 0 1
        q0 0 -> q1
        accept-sets: {q0,q1} {q1}     (limit-set acceptor)
        accept: q0 q1                 (recurring-state acceptor)
    """
    lines = ["states: " + " ".join(automaton.states),
             "start: " + automaton.initial,
             "alphabet: " + " ".join(automaton.alphabet)]
    if isinstance(automaton, MullerAutomaton):
        for q in automaton.states:
            for a in automaton.alphabet:
                lines.append(f"{q} {a} -> {automaton.delta[(q, a)]}")
        sets = sorted("{" + ",".join(sorted(s)) + "}" for s in automaton.accepting)
        lines.append("accept-sets: " + " ".join(sets))
    else:
        for q, a, q2 in sorted(automaton.transitions):
            lines.append(f"{q} {a} -> {q2}")
        lines.append("accept: " + " ".join(sorted(automaton.accepting)))
    return "\n".join(lines) + "\n"


def parse_automaton(text: str):
    """Parse the text format; returns a MullerAutomaton when an
    ``accept-sets:`` line is present, else a BuchiAutomaton."""
    states = start = None
    alphabet = None
    arcs = []
    accept_sets = None
    accept = None
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("states:"):
            states = tuple(line.split(":", 1)[1].split())
        elif line.startswith("start:"):
            start = line.split(":", 1)[1].strip()
        elif line.startswith("alphabet:"):
            alphabet = Alphabet(tuple(line.split(":", 1)[1].split()))
        elif line.startswith("accept-sets:"):
            accept_sets = frozenset(
                frozenset(part.strip("{}").split(",")) if part.strip("{}") else frozenset()
                for part in line.split(":", 1)[1].split())
        elif line.startswith("accept:"):
            accept = frozenset(line.split(":", 1)[1].split())
        else:
            parts = line.split()
            if len(parts) != 4 or parts[2] != "->":
                raise MachineParseError(f"line {ln}: expected 'q a -> q2', got {raw!r}")
            arcs.append((parts[0], parts[1], parts[3]))
    if states is None or start is None or alphabet is None:
        raise MachineParseError("missing states:, start:, or alphabet: header")
    try:
        if accept_sets is not None:
            delta = {(q, a): q2 for q, a, q2 in arcs}
            return MullerAutomaton(alphabet, states, start, delta, accept_sets)
        if accept is None:
            raise MachineParseError("missing accept: or accept-sets: line")
        return BuchiAutomaton(alphabet, states, start, frozenset(arcs), accept)
    except SpecError as e:
        raise MachineParseError(str(e)) from None


# -- stock acceptors -----------------------------------------------------------------


def last_letter_tracker(alphabet: Alphabet) -> dict:
    """Transitions of the machine whose state is the last letter read
    (state q_a per letter, initial q_<first letter>)."""
    return {(f"q{b}", a): f"q{a}" for b in alphabet for a in alphabet}


def both_letters_tracker() -> MullerAutomaton:
    """Accepts the binary sequences in which both letters occur
    infinitely often."""
    b = Alphabet.binary()
    delta = {(q, a): f"q{a}" for q in ("q0", "q1") for a in b}
    return MullerAutomaton(b, ("q0", "q1"), "q0", delta,
                           frozenset({frozenset({"q0", "q1"})}))


def sees_letter_buchi(alphabet: Alphabet, letter: str) -> BuchiAutomaton:
    """Deterministic recurring-state acceptor for 'letter occurs
    infinitely often'."""
    arcs = frozenset((f"q{b}", a, f"q{a}") for b in alphabet for a in alphabet)
    first = alphabet.symbols[0]
    return BuchiAutomaton(alphabet, tuple(f"q{a}" for a in alphabet),
                          f"q{first}", arcs, frozenset({f"q{letter}"}))


def parity_of_ones_automaton() -> MullerAutomaton:
    """Two states tracking the running parity of 1s read so far; accepts
    when both parities recur (a stock fixture)."""
    b = Alphabet.binary()
    delta = {("even", "0"): "even", ("even", "1"): "odd",
             ("odd", "0"): "odd", ("odd", "1"): "even"}
    return MullerAutomaton(b, ("even", "odd"), "even", delta,
                           frozenset({frozenset({"even", "odd"})}))


def cycle_counter_automaton(alphabet: Alphabet, m: int,
                            accepting=None) -> MullerAutomaton:
    """m states cycling on every input symbol; accepting family defaults
    to the full cycle."""
    states = tuple(f"c{i}" for i in range(m))
    delta = {(states[i], a): states[(i + 1) % m] for i in range(m) for a in alphabet}
    acc = accepting if accepting is not None else frozenset({frozenset(states)})
    return MullerAutomaton(alphabet, states, states[0], delta, acc)


def sink_automaton(alphabet: Alphabet) -> MullerAutomaton:
    """Everything flows to a sink; accepts nothing (empty family)."""
    delta = {("live", a): "sink" for a in alphabet}
    delta.update({("sink", a): "sink" for a in alphabet})
    return MullerAutomaton(alphabet, ("live", "sink"), "live", delta, frozenset())

"""Sequence-to-sequence machinery: morphism application, finite-state
transduction with certified-bound propagation, products, splits, and a
stack machine that leaves the well-behaved classes.

Bound propagation is metadata arithmetic only: it never inspects the
sequence.  A uniform transducer with m states maps a sequence with bound
g to one with bound h(h(n)), h = (g+1) composed m times minus 1; general
transducers drop the bound (they factor as uniform followed by a plain
morphism, and no window formula is asserted for morphism images).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import Alphabet, Bound, Provenance, Sequence, Word
from .errors import MachineFault, MachineParseError, SpecError
from .generators import Morphism, periodic

# -- machines -----------------------------------------------------------------


@dataclass(frozen=True)
class Transducer:
    """Deterministic sequential machine: per input symbol it emits an
    output word and moves to the next state.  Uniform means every emission
    has length exactly one."""

    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: tuple
    initial: str
    emit: dict        # (state, symbol) -> Word over output_alphabet
    step: dict        # (state, symbol) -> state

    def __post_init__(self):
        if self.initial not in self.states:
            raise SpecError("initial state missing from state list")
        for q in self.states:
            for a in self.input_alphabet:
                if (q, a) not in self.emit or (q, a) not in self.step:
                    raise SpecError(f"transducer not total at ({q!r}, {a!r})")
                if self.emit[(q, a)].alphabet != self.output_alphabet:
                    raise SpecError("emission over the wrong alphabet")
                if self.step[(q, a)] not in self.states:
                    raise SpecError("transition to unknown state")

    @property
    def uniform(self) -> bool:
        return all(len(w) == 1 for w in self.emit.values())

    @property
    def erasing(self) -> bool:
        return any(len(w) == 0 for w in self.emit.values())


def identity_transducer(alphabet: Alphabet) -> Transducer:
    emit = {("q0", a): alphabet.word([a]) for a in alphabet}
    step = {("q0", a): "q0" for a in alphabet}
    return Transducer(alphabet, alphabet, ("q0",), "q0", emit, step)


def cyclic_transducer(alphabet: Alphabet, m: int) -> Transducer:
    """m states cycling on every input; emits the (symbol, phase) pair."""
    if m < 1:
        raise SpecError("need at least one state")
    out = pair_alphabet(alphabet, Alphabet(tuple(str(i) for i in range(m))))
    states = tuple(f"q{i}" for i in range(m))
    emit, step = {}, {}
    for i, q in enumerate(states):
        for a in alphabet:
            emit[(q, a)] = out.word([pair_symbol(a, str(i))])
            step[(q, a)] = states[(i + 1) % m]
    return Transducer(alphabet, out, states, states[0], emit, step)


def pair_symbol(a: str, b: str) -> str:
    return f"({a},{b})"


def pair_alphabet(first: Alphabet, second: Alphabet) -> Alphabet:
    return Alphabet(tuple(pair_symbol(a, b) for a in first for b in second))


# -- morphism application -------------------------------------------------------


def apply_morphism(phi: Morphism, x: Sequence) -> Sequence:
    """Concatenation of the letter images along the sequence.  No
    certified bound propagates: class preservation holds, but no window
    formula is asserted for general morphism images."""
    if phi.source != x.alphabet:
        raise SpecError("morphism source does not match the sequence alphabet")
    table = phi.image_codes()
    if phi.erasing_ok and all(len(t) == 0 for t in table):
        raise SpecError("image collapse: every letter erased")
    state = {"consumed": 0}

    def extend(cache, target):
        consumed = state["consumed"]
        stall = 0
        while len(cache) < target:
            img = table[x.code_at(consumed)]
            cache.extend(img)
            consumed += 1
            stall = stall + 1 if not img else 0
            if stall > 100_000:
                raise SpecError("image collapse: no output over a long input stretch")
        state["consumed"] = consumed

    return Sequence(phi.target, extend,
                    provenance=Provenance("morphism_image", {"of": str(x.provenance)}),
                    horizon_cap=x.horizon_cap)


# -- transduction ----------------------------------------------------------------


def bound_formulas(g, m: int, linear_coefficient=None) -> dict:
    """The window formulas for an m-state machine applied to a sequence
    with regulator bound g:

    * ``image``: h(h(n)) with h = (g+1) composed m times, minus 1;
    * ``reversible``: h(n) alone (letters acting bijectively on states);
    * ``prefix``: g(1) + g(g(1)) + ... iterated m times and summed, a
      bound on the prefix after which the image is uniformly recurrent;
    * ``linear`` (when g(n) = C*n): C^(2m)*n + C^(2m-1) + ... + C + 1.
    """
    if m < 1:
        raise SpecError("need at least one state")
    fn = g.fn if isinstance(g, Bound) else g

    def g_checked(n):
        v = int(fn(n))
        if v < n:
            raise SpecError(f"bound violates g(n) >= n at n={n}")
        return v

    def h(n):
        t = n
        for _ in range(m):
            t = g_checked(t) + 1
        return t - 1

    out = {
        "image": Bound(lambda n: h(h(n)), f"uniform image window, m={m}"),
        "reversible": Bound(h, f"reversible image window, m={m}"),
    }
    total, t = 0, 1
    for _ in range(m):
        t = g_checked(t)
        total += t
    out["prefix"] = total
    if linear_coefficient is not None:
        c = linear_coefficient

        def lin(n):
            return c**(2 * m) * n + sum(c**j for j in range(2 * m))

        out["linear"] = Bound(lin, f"linear window, C={c}, m={m}")
    return out


def run_states(machine: Transducer, x: Sequence) -> Sequence:
    """The state stream of the machine along the sequence (the state each
    symbol is consumed in), as a lazy sequence over the state names."""
    alphabet = Alphabet(machine.states)
    insyms = x.alphabet.symbols
    state = {"q": machine.initial, "consumed": 0}

    qindex = {q: i for i, q in enumerate(machine.states)}

    def extend(cache, target):
        q, consumed = state["q"], state["consumed"]
        step = machine.step
        xs = x.codes(target)
        while len(cache) < target:
            cache.append(qindex[q])
            q = step[(q, insyms[xs[consumed]])]
            consumed += 1
        state["q"], state["consumed"] = q, consumed

    return Sequence(alphabet, extend,
                    provenance=Provenance("run_states", {"of": str(x.provenance)}))


def transduce(machine: Transducer, x: Sequence) -> Sequence:
    """The image of the sequence under the machine.  Uniform machines
    propagate a certified bound (m-fold window composition, applied
    twice); non-uniform machines yield an unbounded image, matching the
    factoring into a uniform machine followed by a morphism."""
    if machine.input_alphabet != x.alphabet:
        raise SpecError("machine input alphabet does not match the sequence")
    insyms = x.alphabet.symbols
    emit_codes = {k: w.codes for k, w in machine.emit.items()}
    state = {"q": machine.initial, "consumed": 0}

    def extend(cache, target):
        q, consumed = state["q"], state["consumed"]
        step, emit = machine.step, emit_codes
        while len(cache) < target:
            xs = x.codes(consumed + max(1024, target - len(cache)))
            end = min(len(xs), consumed + max(1024, target - len(cache)))
            while consumed < end and len(cache) < target:
                a = insyms[xs[consumed]]
                cache.extend(emit[(q, a)])
                q = step[(q, a)]
                consumed += 1
        state["q"], state["consumed"] = q, consumed

    bound = None
    if machine.uniform and x.certified_bound is not None:
        bound = bound_formulas(x.certified_bound, len(machine.states))["image"]
    return Sequence(machine.output_alphabet, extend, bound=bound,
                    provenance=Provenance("transduce",
                                          {"of": str(x.provenance),
                                           "states": len(machine.states)}),
                    horizon_cap=x.horizon_cap)


def state_emitting(machine: Transducer) -> Transducer:
    """The uniform machine with the same transitions that emits the
    (state, symbol) pair it consumes in."""
    out = pair_alphabet(Alphabet(machine.states), machine.input_alphabet)
    emit = {(q, a): out.word([pair_symbol(q, a)])
            for q in machine.states for a in machine.input_alphabet}
    return Transducer(machine.input_alphabet, out, machine.states,
                      machine.initial, emit, machine.step)


def decompose(machine: Transducer):
    """Factor the machine as (uniform state-emitting machine, morphism):
    applying the morphism that maps each (state, symbol) pair to the
    original emission reproduces the machine's image exactly."""
    uniform = state_emitting(machine)
    images = {pair_symbol(q, a): machine.emit[(q, a)]
              for q in machine.states for a in machine.input_alphabet}
    phi = Morphism(uniform.output_alphabet, machine.output_alphabet, images,
                   erasing_ok=machine.erasing)
    return uniform, phi


def is_reversible(machine: Transducer) -> bool:
    """Every input letter acts as a bijection on the state set."""
    return is_almost_reversible(machine, set(machine.input_alphabet))


def is_almost_reversible(machine: Transducer, recurrent_letters) -> bool:
    """Every letter in the given set acts as a bijection on the states
    (the letters occurring infinitely often in the intended input)."""
    letters = set(recurrent_letters)
    if not letters <= set(machine.input_alphabet):
        raise SpecError("recurrent letters must belong to the input alphabet")
    n = len(machine.states)
    for a in letters:
        image = {machine.step[(q, a)] for q in machine.states}
        if len(image) != n:
            return False
    return True


# -- products ---------------------------------------------------------------------


def product(x: Sequence, y: Sequence) -> Sequence:
    """The componentwise pair sequence over the product alphabet.  When
    the second factor is periodic with period p and the first carries a
    certified bound, the product is the image of the first under a
    p-state cyclic machine, so the uniform image window with m = p states
    is attached."""
    out = pair_alphabet(x.alphabet, y.alphabet)
    ky = len(y.alphabet)

    def extend(cache, target):
        xs = x.codes(target)
        ys = y.codes(target)
        for i in range(len(cache), target):
            cache.append(xs[i] * ky + ys[i])

    bound = None
    p = y.provenance.params.get("period_len") if y.provenance.family == "periodic" else None
    if p and x.certified_bound is not None:
        bound = bound_formulas(x.certified_bound, p)["image"]
    return Sequence(out, extend, bound=bound,
                    provenance=Provenance("product",
                                          {"left": str(x.provenance),
                                           "right": str(y.provenance)}),
                    horizon_cap=min(x.horizon_cap, y.horizon_cap))


def cyclic(x: Sequence, m: int) -> Sequence:
    """Product with the cyclic counter 01...(m-1)01...; the standard way
    of interleaving a phase into a sequence."""
    counter = periodic(Word(Alphabet(tuple(str(i) for i in range(m))),
                            tuple(range(m))))
    return product(x, counter)


# -- splits -----------------------------------------------------------------------


def split(x: Sequence, marker: str, horizon: int) -> Sequence:
    """Cut after every occurrence of the marker, encode each block (a
    marker-free word followed by the marker) as a fresh symbol, and drop
    the first block.  The block alphabet is discovered on the horizon
    prefix; a later block outside it is a hard error."""
    mcode = x.alphabet.index(marker)
    xs = x.codes(horizon)
    blocks = []
    start = 0
    for i in range(horizon):
        if xs[i] == mcode:
            blocks.append(tuple(xs[start:i + 1]))
            start = i + 1
    if len(blocks) < 2:
        raise SpecError(f"marker {marker!r} does not cut twice within the horizon")
    symbols = []
    seen = {}
    insyms = x.alphabet.symbols
    for b in sorted(set(blocks)):
        name = "".join(insyms[c] for c in b) if x.alphabet.single_char \
            else ",".join(insyms[c] for c in b)
        seen[b] = name
        symbols.append(name)
    out = Alphabet(tuple(symbols))
    first_len = len(blocks[0])

    state = {"pos": first_len, "run": []}

    def extend(cache, target):
        pos, run = state["pos"], state["run"]
        while len(cache) < target:
            c = x.code_at(pos)
            run.append(c)
            pos += 1
            if c == mcode:
                key = tuple(run)
                if key not in seen:
                    raise SpecError(
                        f"block {key} not discovered within the split horizon {horizon}")
                cache.append(out.index(seen[key]))
                run.clear()
        state["pos"], state["run"] = pos, run

    return Sequence(out, extend,
                    provenance=Provenance("split", {"of": str(x.provenance),
                                                    "marker": marker, "horizon": horizon}),
                    horizon_cap=x.horizon_cap)


def unsplit(blocks: Sequence, n_blocks: int, source_alphabet: Alphabet) -> Word:
    """Concatenate the first n decoded blocks back into a word over the
    source alphabet (restores the source from the end of its dropped
    first block onward)."""
    letters = []
    for i in range(n_blocks):
        name = blocks[i]
        letters.extend(list(name) if source_alphabet.single_char else name.split(","))
    return source_alphabet.word(letters)


# -- stack machines ------------------------------------------------------------------


@dataclass(frozen=True)
class PushdownTransducer:
    """Finite transducer with a stack.  Rules map (state, input symbol,
    stack top or None) to (output word text, next state, action); actions
    are ("push", s), ("pop",), ("noop",).  Rules must cover every
    reachable configuration; a pop on the empty stack means the rule
    table itself asked for the impossible and faults."""

    input_alphabet: Alphabet
    output_alphabet: Alphabet
    states: tuple
    initial: str
    stack_symbols: tuple
    rules: dict

    def rule(self, q, a, top):
        try:
            return self.rules[(q, a, top)]
        except KeyError:
            raise MachineFault(f"no rule for state {q!r}, input {a!r}, top {top!r}") from None


def pushdown_transduce(machine: PushdownTransducer, x: Sequence) -> Sequence:
    """Straightforward configuration stepping.  No class is preserved and
    no bound is ever attached; stack machines can leave the well-behaved
    classes entirely."""
    if machine.input_alphabet != x.alphabet:
        raise SpecError("machine input alphabet does not match the sequence")
    insyms = x.alphabet.symbols
    out = machine.output_alphabet
    state = {"q": machine.initial, "stack": [], "consumed": 0}

    def extend(cache, target):
        q, stack, consumed = state["q"], state["stack"], state["consumed"]
        while len(cache) < target:
            a = insyms[x.code_at(consumed)]
            top = stack[-1] if stack else None
            emit, q2, action = machine.rule(q, a, top)
            cache.extend(out.index(s) for s in emit)
            if action[0] == "push":
                stack.append(action[1])
            elif action[0] == "pop":
                if not stack:
                    raise MachineFault("pop on empty stack")
                stack.pop()
            q = q2
            consumed += 1
        state["q"], state["stack"], state["consumed"] = q, stack, consumed

    return Sequence(out, extend,
                    provenance=Provenance("pushdown", {"of": str(x.provenance)}),
                    horizon_cap=x.horizon_cap)


def counterexample_machine() -> PushdownTransducer:
    """The two-mode balance tracker: mode a pushes on 0 and pops on 1,
    mode b does the opposite, and each step reports its mode.  An empty
    stack hands control to whichever mode the next symbol feeds (this is
    the toggle: the stack empties, the machine flips).  On an input whose
    prefix imbalances swing both ways without bound, the output contains
    arbitrarily long constant runs, so it is not generalized almost periodic."""
    binary = Alphabet.binary()
    out = Alphabet.of("a", "b")
    rules = {}
    for q in ("a", "b"):
        # empty stack: the incoming symbol dictates the mode
        rules[(q, "0", None)] = ("a", "a", ("push", "0"))
        rules[(q, "1", None)] = ("b", "b", ("push", "1"))
    rules[("a", "0", "0")] = ("a", "a", ("push", "0"))
    rules[("a", "1", "0")] = ("a", "a", ("pop",))
    rules[("b", "1", "1")] = ("b", "b", ("push", "1"))
    rules[("b", "0", "1")] = ("b", "b", ("pop",))
    return PushdownTransducer(binary, out, ("a", "b"), "a", ("0", "1"), rules)


# -- text format -----------------------------------------------------------------------


def print_transducer(machine: Transducer) -> str:
    """Canonical text form:

        states: q0 q1
        start: q0
        q0 a -> w q1

    with "-" for an empty emission.  parse(print(parse(t))) is the
    identity on the printed form."""
    lines = ["states: " + " ".join(machine.states), "start: " + machine.initial]
    for q in machine.states:
        for a in machine.input_alphabet:
            w = machine.emit[(q, a)]
            wtext = w.text if len(w) else "-"
            lines.append(f"{q} {a} -> {wtext} {machine.step[(q, a)]}")
    return "\n".join(lines) + "\n"


def parse_transducer(text: str, input_alphabet: Alphabet | None = None,
                     output_alphabet: Alphabet | None = None) -> Transducer:
    """Parse the text format; alphabets default to the symbols seen."""
    states = None
    start = None
    arcs = []
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("states:"):
            states = tuple(line.split(":", 1)[1].split())
        elif line.startswith("start:"):
            start = line.split(":", 1)[1].strip()
        else:
            parts = line.split()
            if len(parts) != 5 or parts[2] != "->":
                raise MachineParseError(f"line {ln}: expected 'q a -> w q2', got {raw!r}")
            arcs.append((parts[0], parts[1], parts[3], parts[4]))
    if states is None or start is None:
        raise MachineParseError("missing states: or start: header")
    in_syms = sorted({a for (_q, a, _w, _q2) in arcs})
    if input_alphabet is None:
        input_alphabet = Alphabet(tuple(in_syms))
    out_syms = sorted({c for (_q, _a, w, _q2) in arcs if w != "-" for c in w})
    if output_alphabet is None:
        output_alphabet = Alphabet(tuple(out_syms)) if out_syms else input_alphabet
    emit, step = {}, {}
    for q, a, w, q2 in arcs:
        emit[(q, a)] = output_alphabet.word("" if w == "-" else w)
        step[(q, a)] = q2
    try:
        return Transducer(input_alphabet, output_alphabet, states, start, emit, step)
    except SpecError as e:
        raise MachineParseError(str(e)) from None

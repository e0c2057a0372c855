"""Transducers and the diagonal advice that separates advice-alphabet sizes.

A letter-to-letter transducer over input ``{0..k-1}`` and output ``{0..k}``
cannot produce every word: :func:`evade_word` builds a word absent from all
of its outputs by repeatedly choosing the rarest output letter among the
still-feasible states.  Concatenating these words over an enumeration of
transducers gives an advice string ``A`` whose prefix language needs the
larger advice alphabet.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from advicer.advice import Alphabet, AdviceStream, BlockStream, PeriodicStream, register_generator
from advicer.automata import TermAutomaton
from advicer.errors import ContractError, DegenerateMachineError
from advicer.nerode import LanguageOracle


@dataclass(frozen=True, eq=False)
class Transducer:
    """Deterministic letter-to-letter transducer.

    ``output[q, b]`` is the letter written and ``next[q, b]`` the new state
    when reading ``b`` in state ``q``.
    """

    states: tuple
    input_alphabet: Alphabet
    output_alphabet: Alphabet
    output: dict
    next: dict
    initial: str

    def __post_init__(self):
        states = tuple(self.states)
        if not states or len(set(states)) != len(states):
            raise ContractError(f"states must be nonempty and distinct: {states}")
        if self.initial not in states:
            raise ContractError(f"initial state {self.initial!r} not among states")
        for q in states:
            for b in self.input_alphabet:
                if self.output.get((q, b)) not in self.output_alphabet:
                    raise ContractError(f"output for ({q}, {b}) missing or outside the output alphabet")
                if self.next.get((q, b)) not in states:
                    raise ContractError(f"next state for ({q}, {b}) missing or unknown")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "output", dict(self.output))
        object.__setattr__(self, "next", dict(self.next))

    def arrays(self):
        """``(output, next)`` as integer arrays indexed ``[state index, input index]``."""
        qi = {q: i for i, q in enumerate(self.states)}
        shape = (len(self.states), len(self.input_alphabet))
        out = np.empty(shape, dtype=np.int64)
        nxt = np.empty(shape, dtype=np.int64)
        for q in self.states:
            for b in self.input_alphabet:
                out[qi[q], self.input_alphabet.index(b)] = self.output_alphabet.index(self.output[q, b])
                nxt[qi[q], self.input_alphabet.index(b)] = qi[self.next[q, b]]
        return out, nxt


def run_transducer(t: Transducer, inputs: AdviceStream | Sequence[str], n: int) -> tuple:
    """First ``n`` output letters of ``t`` on an input stream (or a word of length >= n)."""
    if isinstance(inputs, AdviceStream):
        if inputs.alphabet != t.input_alphabet:
            raise ContractError(f"input stream alphabet {inputs.alphabet.symbols} does not match "
                                f"transducer input alphabet {t.input_alphabet.symbols}")
        word = inputs.prefix(n)
    else:
        word = t.input_alphabet.word(inputs)
        if len(word) < n:
            raise ContractError(f"need at least {n} input letters, got {len(word)}")
    q = t.initial
    out = []
    for b in word[:n]:
        out.append(t.output[q, b])
        q = t.next[q, b]
    return tuple(out)


def run_transducer_batch(t: Transducer, inputs: np.ndarray) -> np.ndarray:
    """Vectorised runs: ``inputs[i, j]`` is the index of the j-th input letter of run i."""
    out_tab, next_tab = t.arrays()
    inputs = np.asarray(inputs, dtype=np.int64)
    if inputs.size and (inputs.min() < 0 or inputs.max() >= len(t.input_alphabet)):
        raise ContractError("input letter index out of range")
    q = np.full(inputs.shape[0], t.states.index(t.initial), dtype=np.int64)
    result = np.empty_like(inputs)
    for j in range(inputs.shape[1]):
        b = inputs[:, j]
        result[:, j] = out_tab[q, b]
        q = next_tab[q, b]
    return result


# ---------------------------------------------------------------------------
# Evading words


@dataclass(frozen=True)
class EvadeCertificate:
    """``state_sets[j]`` is the feasible set before letter j; the last set is empty.

    ``counts[j]`` is how often ``word[j]`` occurs among the outputs of
    ``state_sets[j]``.
    """

    word: tuple
    state_sets: tuple
    counts: tuple

    @property
    def chain_ok(self) -> bool:
        sets = self.state_sets
        return (len(sets) == len(self.word) + 1 and not sets[-1]
                and all(b < a for a, b in zip(map(len, sets), map(len, sets[1:]))))


def evade_word(t: Transducer) -> EvadeCertificate:
    k = len(t.input_alphabet)
    if len(t.output_alphabet) != k + 1:
        raise ContractError(f"need |output alphabet| = |input alphabet| + 1, got "
                            f"{len(t.output_alphabet)} and {k}")
    current = frozenset(t.states)
    word, sets, counts = [], [current], []
    while current:
        tally = {a: 0 for a in t.output_alphabet}
        for q in current:
            for b in t.input_alphabet:
                tally[t.output[q, b]] += 1
        # min() keeps the first minimum, i.e. the least letter
        a = min(t.output_alphabet, key=tally.__getitem__)
        current = frozenset(t.next[q, b] for q in current for b in t.input_alphabet
                            if t.output[q, b] == a)
        word.append(a)
        counts.append(tally[a])
        sets.append(current)
    return EvadeCertificate(tuple(word), tuple(sets), tuple(counts))


def feasible_after(t: Transducer, word: Sequence[str]) -> frozenset:
    """States ``t`` can be in after emitting ``word`` from any state on some input."""
    current = frozenset(t.states)
    for a in word:
        current = frozenset(t.next[q, b] for q in current for b in t.input_alphabet
                            if t.output[q, b] == a)
    return current


def enumerate_transducers(k: int, n_states: int) -> Iterator[Transducer]:
    """All transducers with exactly ``n_states`` states, input {0..k-1}, output {0..k}.

    Order: output table lexicographically, then next-state table; both tables
    are read row by row over ``(state, input letter)``.  State 0 is initial.
    """
    gamma, sigma = Alphabet.range(k), Alphabet.range(k + 1)
    states = tuple(str(i) for i in range(n_states))
    cells = [(q, b) for q in states for b in gamma]
    for outs in itertools.product(sigma.symbols, repeat=len(cells)):
        output = dict(zip(cells, outs))
        for nexts in itertools.product(states, repeat=len(cells)):
            yield Transducer(states, gamma, sigma, output, dict(zip(cells, nexts)), states[0])


def enumerate_up_to(k: int, budget: int) -> Iterator[Transducer]:
    for m in range(1, budget + 1):
        yield from enumerate_transducers(k, m)


class DiagonalStream(BlockStream):
    """Concatenated evading words of all transducers, by state count.

    The first ``certified_length`` symbols cover every machine with at most
    ``budget`` states; the stream continues with larger machines, so raising
    the budget only extends the certified prefix.
    """

    def __init__(self, k: int, budget: int):
        if k < 1 or budget < 1:
            raise ContractError("need k >= 1 and budget >= 1")
        self.k = k
        self.budget = budget
        words = (evade_word(t).word for m in itertools.count(1) for t in enumerate_transducers(k, m))
        super().__init__(Alphabet.range(k + 1), f"diagonal({k},{budget})", lambda: words)
        self.certificates = tuple((t, evade_word(t)) for t in enumerate_up_to(k, budget))
        self.certified_length = sum(len(c.word) for _, c in self.certificates)


@register_generator("diagonal")
def diagonal_advice(k: int, budget: int) -> DiagonalStream:
    return DiagonalStream(k, budget)


def pref_oracle(a: AdviceStream) -> LanguageOracle:
    """Membership in the set of finite prefixes of ``a``."""
    return LanguageOracle(a.alphabet, lambda w: tuple(w) == a.prefix(len(w)), f"Pref({a.descriptor()})")


def pref_template(a: AdviceStream) -> TermAutomaton:
    """Two-state machine recognising Pref(a) with advice ``a``: accept while input copies advice."""
    delta = {}
    for g in a.alphabet:
        for s in a.alphabet:
            delta["ok", g, s] = "ok" if s == g else "dead"
            delta["dead", g, s] = "dead"
    return TermAutomaton(("ok", "dead"), a.alphabet, a, delta, "ok", frozenset({"ok"}))


# ---------------------------------------------------------------------------
# From prefix recognisers to transducers


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def repair_prefix_rows(m: TermAutomaton) -> TermAutomaton:
    """Adjust ``m`` so every (accepting state, advice letter) has exactly one accepting input.

    Extra accepting inputs are redirected to a rejecting state (a fresh sink
    if there is none); if no input is accepting, the least input letter is
    redirected to the least accepting state.
    """
    if not m.accepting:
        raise DegenerateMachineError("a prefix recogniser needs at least one accepting state")
    states = list(m.states)
    rejecting = [q for q in states if q not in m.accepting]
    delta = dict(m.delta)
    least_accepting = next(q for q in states if q in m.accepting)
    sink = rejecting[0] if rejecting else None
    for q in states:
        if q not in m.accepting:
            continue
        for b in m.advice_alphabet:
            good = [a for a in m.input_alphabet if delta[q, b, a] in m.accepting]
            if len(good) == 1:
                continue
            if not good:
                delta[q, b, m.input_alphabet.symbols[0]] = least_accepting
                continue
            if sink is None:
                sink = _fresh("sink", states)
                states.append(sink)
                for g in m.advice_alphabet:
                    for a in m.input_alphabet:
                        delta[sink, g, a] = sink
            for a in good[1:]:
                delta[q, b, a] = sink
    return TermAutomaton(tuple(states), m.input_alphabet, m.advice, delta, m.initial, m.accepting)


def to_transducer(m: TermAutomaton) -> Transducer:
    """The transducer reading advice letters and writing the unique acceptable input letter.

    On rejecting states, which a recogniser of Pref(A) never enters along A,
    the least input letter is written.
    """
    r = repair_prefix_rows(m)
    output, nxt = {}, {}
    for q in r.states:
        for b in r.advice_alphabet:
            if q in r.accepting:
                a = next(a for a in r.input_alphabet if r.delta[q, b, a] in r.accepting)
            else:
                a = r.input_alphabet.symbols[0]
            output[q, b] = a
            nxt[q, b] = r.delta[q, b, a]
    return Transducer(r.states, r.advice_alphabet, r.input_alphabet, output, nxt, r.initial)


def restrict_reachable(t: Transducer) -> Transducer:
    """Sub-transducer on the states reachable from the initial state, renamed ``0, 1, ...``."""
    order = [t.initial]
    seen = {t.initial}
    for q in order:
        for b in t.input_alphabet:
            p = t.next[q, b]
            if p not in seen:
                seen.add(p)
                order.append(p)
    name = {q: str(i) for i, q in enumerate(order)}
    output = {(name[q], b): t.output[q, b] for q in order for b in t.input_alphabet}
    nxt = {(name[q], b): name[t.next[q, b]] for q in order for b in t.input_alphabet}
    return Transducer(tuple(name[q] for q in order), t.input_alphabet, t.output_alphabet,
                      output, nxt, "0")


def contains_word_batch(outputs: np.ndarray, word: Sequence[int]) -> np.ndarray:
    """Per row of ``outputs`` (letter indices), whether ``word`` occurs as a factor."""
    outputs = np.asarray(outputs)
    n, width = len(word), outputs.shape[1]
    if n == 0:
        return np.ones(outputs.shape[0], dtype=bool)
    if n > width:
        return np.zeros(outputs.shape[0], dtype=bool)
    hits = np.ones((outputs.shape[0], width - n + 1), dtype=bool)
    for j, c in enumerate(word):
        hits &= outputs[:, j:width - n + 1 + j] == c
    return hits.any(axis=1)


def find_word(text: Sequence[str], word: Sequence[str]) -> int:
    """Offset of the first occurrence of ``word`` in ``text``, or -1."""
    text, word = tuple(text), tuple(word)
    n = len(word)
    for i in range(len(text) - n + 1):
        if text[i:i + n] == word:
            return i
    return -1


def enumerate_recognisers(k: int, n_states: int) -> Iterator[TermAutomaton]:
    """Candidate recognisers over input {0..k}, advice {0..k-1}, initial state 0, every F."""
    gamma, sigma = Alphabet.range(k), Alphabet.range(k + 1)
    placeholder = PeriodicStream(gamma, (), (gamma.symbols[0],))
    states = tuple(str(i) for i in range(n_states))
    cells = [(q, g, a) for q in states for g in gamma for a in sigma]
    subsets = [frozenset(c) for r in range(n_states + 1) for c in itertools.combinations(states, r)]
    for targets in itertools.product(states, repeat=len(cells)):
        delta = dict(zip(cells, targets))
        for f in subsets:
            yield TermAutomaton(states, sigma, placeholder, delta, states[0], f)


@dataclass(frozen=True)
class Refutation:
    """Why a candidate cannot recognise Pref(A): it rejects the empty word,
    or its transducer's evading word occurs in A's certified prefix."""

    machine: TermAutomaton
    reason: str
    witness: tuple = ()
    offset: int = -1


def refute_recognisers(k: int, budget: int) -> Iterator[Refutation]:
    """For every candidate with <= budget states, a reason it does not accept exactly Pref(A).

    ``A = diagonal_advice(k, budget)``.  Raises if some candidate escapes.
    """
    stream = diagonal_advice(k, budget)
    certified = stream.prefix(stream.certified_length)
    for m_states in range(1, budget + 1):
        for m in enumerate_recognisers(k, m_states):
            if m.initial not in m.accepting:
                yield Refutation(m, "rejects the empty prefix")
                continue
            t = restrict_reachable(to_transducer(m))
            cert = evade_word(t)
            offset = find_word(certified, cert.word)
            if offset < 0 or feasible_after(t, cert.word):
                raise AssertionError(f"candidate escaped refutation: {m}")
            yield Refutation(m, "evading word occurs in A", cert.word, offset)


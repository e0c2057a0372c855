"""Deterministic string automata that read an advice tape.

Two models are provided.  A :class:`TermAutomaton` halts when the input is
exhausted and accepts by final state.  A :class:`MullerAutomaton` keeps
running on blank input, consuming the rest of the advice, and accepts when
the set of states visited infinitely often is one of its accepting sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from advicer.advice import AdviceStream, Alphabet, Word
from advicer.errors import ContractError, UnsupportedAdviceError

BLANK = "_"


def _check_machine(states, input_alphabet, advice, delta, initial, extra_inputs=()):
    states = tuple(states)
    if len(set(states)) != len(states) or not states:
        raise ContractError(f"states must be nonempty and distinct: {states}")
    if initial not in states:
        raise ContractError(f"initial state {initial!r} not among states")
    state_set = set(states)
    delta = dict(delta)
    inputs = tuple(input_alphabet) + tuple(extra_inputs)
    for q in states:
        for g in advice.alphabet:
            for a in inputs:
                try:
                    target = delta[q, g, a]
                except KeyError:
                    raise ContractError(f"transition missing for ({q}, {g}, {a})") from None
                if target not in state_set:
                    raise ContractError(f"transition ({q}, {g}, {a}) -> {target!r} leaves the state set")
    expected = len(states) * len(advice.alphabet) * len(inputs)
    if len(delta) != expected:
        raise ContractError(f"transition table has {len(delta)} entries, expected {expected}")
    return states, delta


@dataclass(frozen=True, eq=False)
class TermAutomaton:
    """Terminating automaton with advice; ``delta`` maps ``(state, advice, input)``."""

    states: tuple
    input_alphabet: Alphabet
    advice: AdviceStream
    delta: Mapping
    initial: str
    accepting: frozenset

    def __post_init__(self):
        states, delta = _check_machine(self.states, self.input_alphabet, self.advice,
                                       self.delta, self.initial)
        accepting = frozenset(self.accepting)
        if not accepting <= set(states):
            raise ContractError(f"accepting states {set(accepting - set(states))} not among states")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "accepting", accepting)

    @property
    def advice_alphabet(self) -> Alphabet:
        return self.advice.alphabet

    def with_advice(self, advice: AdviceStream) -> TermAutomaton:
        return TermAutomaton(self.states, self.input_alphabet, advice, self.delta,
                             self.initial, self.accepting)

    def run(self, w: Sequence[str]) -> RunTrace:
        return run_terminating(self, w)

    def accepts(self, w: Sequence[str]) -> bool:
        return accepts_terminating(self, w)


@dataclass(frozen=True, eq=False)
class MullerAutomaton:
    """Nonterminating automaton; ``delta`` also covers the blank input ``_``.

    ``accepting`` is a family of state sets.
    """

    states: tuple
    input_alphabet: Alphabet
    advice: AdviceStream
    delta: Mapping
    initial: str
    accepting: frozenset

    def __post_init__(self):
        if BLANK in self.input_alphabet:
            raise ContractError(f"the blank symbol {BLANK!r} may not be an input symbol")
        states, delta = _check_machine(self.states, self.input_alphabet, self.advice,
                                       self.delta, self.initial, extra_inputs=(BLANK,))
        family = frozenset(frozenset(s) for s in self.accepting)
        for s in family:
            if not s <= set(states):
                raise ContractError(f"accepting set {set(s)} is not a subset of the states")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "accepting", family)

    @property
    def advice_alphabet(self) -> Alphabet:
        return self.advice.alphabet

    def run(self, w: Sequence[str]) -> RunTrace:
        return run_nonterminating(self, w)

    def accepts(self, w: Sequence[str]) -> bool:
        return run_nonterminating(self, w).accepted


@dataclass(frozen=True)
class Lasso:
    """A run that eventually cycles: ``stem`` states, then ``cycle`` forever.

    ``cycle`` lists ``(state, phase)`` pairs, where phase is the index into
    the advice period of the symbol read next from that state.
    """

    stem: int
    cycle: tuple


@dataclass(frozen=True)
class RunTrace:
    states: tuple
    accepted: bool | None
    lasso: Lasso | None = None
    infinity_set: frozenset | None = None

    @property
    def final(self):
        return self.states[-1]

    @property
    def conclusive(self) -> bool:
        return self.accepted is not None


def run_terminating(m: TermAutomaton, w: Sequence[str]) -> RunTrace:
    w = m.input_alphabet.word(w)
    delta, advice = m.delta, m.advice
    q = m.initial
    states = [q]
    for n, a in enumerate(w, 1):
        q = delta[q, advice.at(n), a]
        states.append(q)
    return RunTrace(tuple(states), q in m.accepting)


def accepts_terminating(m: TermAutomaton, w: Sequence[str]) -> bool:
    w = m.input_alphabet.word(w)
    delta, advice = m.delta, m.advice
    q = m.initial
    for n, a in enumerate(w, 1):
        q = delta[q, advice.at(n), a]
    return q in m.accepting


def require_lasso(stream: AdviceStream) -> tuple[Word, Word]:
    lasso = stream.lasso()
    if lasso is None:
        raise UnsupportedAdviceError(
            f"exact computation needs ultimately periodic advice; {stream.descriptor()} is not")
    return lasso


def _blank_run(m: MullerAutomaton, q, pos: int, lasso) -> tuple[list, int, tuple]:
    """Blank-only run from ``q`` about to read advice position ``pos``.

    Returns the visited states (the last one closes the cycle), the index in
    that list where the cycle starts, and the cycle's ``(state, phase)`` keys.
    """
    prefix, period = lasso
    p, per = len(prefix), len(period)
    delta = m.delta
    trail = [q]
    keys = [None]
    seen: dict = {}
    while True:
        if pos > p:
            key = (q, (pos - p - 1) % per)
            if key in seen:
                start = seen[key]
                return trail, start, tuple(keys[start:-1])
            seen[key] = len(trail) - 1
            keys[-1] = key
            g = period[key[1]]
        else:
            g = prefix[pos - 1]
        q = delta[q, g, BLANK]
        trail.append(q)
        keys.append(None)
        pos += 1


def run_nonterminating(m: MullerAutomaton, w: Sequence[str]) -> RunTrace:
    """Exact Muller run over ultimately periodic advice."""
    lasso = require_lasso(m.advice)
    w = m.input_alphabet.word(w)
    q = m.initial
    states = [q]
    for n, a in enumerate(w, 1):
        q = m.delta[q, m.advice.at(n), a]
        states.append(q)
    trail, start, keys = _blank_run(m, q, len(w) + 1, lasso)
    states.extend(trail[1:])
    stem = len(w) + start
    inf = frozenset(trail[start:-1])
    return RunTrace(tuple(states), inf in m.accepting, Lasso(stem, tuple(keys)), inf)


def run_bounded(m: MullerAutomaton | TermAutomaton, w: Sequence[str], steps: int) -> RunTrace:
    """Simulate ``steps`` transitions on any advice; acceptance is left undecided.

    For a Muller machine, steps beyond ``len(w)`` read blanks.
    """
    if steps < 0:
        raise ContractError("step bound must be nonnegative")
    w = m.input_alphabet.word(w)
    q = m.initial
    states = [q]
    for n in range(1, steps + 1):
        if n <= len(w):
            a = w[n - 1]
        elif isinstance(m, MullerAutomaton):
            a = BLANK
        else:
            break
        q = m.delta[q, m.advice.at(n), a]
        states.append(q)
    return RunTrace(tuple(states), None)


def empty_string_accept_set(m: MullerAutomaton, n: int) -> frozenset:
    """States whose blank-only run from advice position ``n+1`` is accepting."""
    if n < 0:
        raise ContractError("position must be nonnegative")
    lasso = require_lasso(m.advice)
    accepted = set()
    for q in m.states:
        trail, start, _ = _blank_run(m, q, n + 1, lasso)
        if frozenset(trail[start:-1]) in m.accepting:
            accepted.add(q)
    return frozenset(accepted)

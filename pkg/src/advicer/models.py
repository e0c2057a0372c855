"""Conversions between the terminating and nonterminating models."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from advicer.advice import AdviceStream, Alphabet, PeriodicStream
from advicer.automata import BLANK, MullerAutomaton, TermAutomaton, empty_string_accept_set, require_lasso
from advicer.errors import ContractError


def t_to_nt(m: TermAutomaton) -> MullerAutomaton:
    """Same machine, looping on its final state once the input ends; F' = {{q} : q in F}."""
    delta = dict(m.delta)
    for q in m.states:
        for g in m.advice_alphabet:
            delta[q, g, BLANK] = q
    family = frozenset(frozenset({q}) for q in m.accepting)
    return MullerAutomaton(m.states, m.input_alphabet, m.advice, delta, m.initial, family)


def _pair_name(g: str, accept_set: frozenset, order: Sequence[str]) -> str:
    return g + "/" + "+".join(q for q in order if q in accept_set)


class PairAdviceStream(PeriodicStream):
    """Advice whose n-th letter pairs ``A_n`` with ``f_n``.

    ``f_n`` is the set of states from which the Muller machine, continuing on
    blanks from advice position n+1, accepts.  Letters are named
    ``"<A_n>/<q>+<q'>..."``; :meth:`pair_at` returns the decoded pair.
    """

    def __init__(self, machine: MullerAutomaton):
        prefix, period = require_lasso(machine.advice)
        horizon = len(prefix) + len(period)
        # f_0 is needed for the empty input; f_n is periodic from n = |prefix| on
        accept_sets = tuple(empty_string_accept_set(machine, n) for n in range(horizon + 1))
        pairs = [(machine.advice.at(n), accept_sets[n]) for n in range(1, horizon + 1)]
        names = [_pair_name(g, f, machine.states) for g, f in pairs]
        object.__setattr__(self, "machine", machine)
        object.__setattr__(self, "base", machine.advice)
        object.__setattr__(self, "accept_sets", accept_sets)
        object.__setattr__(self, "_decode", dict(zip(names, pairs)))
        alphabet = Alphabet(tuple(dict.fromkeys(names)))
        super().__init__(alphabet, tuple(names[:len(prefix)]), tuple(names[len(prefix):]))

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    def accept_set(self, n: int) -> frozenset:
        if n < 0:
            raise ContractError("position must be nonnegative")
        if n < len(self.accept_sets):
            return self.accept_sets[n]
        return self._decode[self.at(n)][1]

    def pair_at(self, n: int) -> tuple[str, frozenset]:
        return self._decode[self.at(n)]

    def decode(self, name: str) -> tuple[str, frozenset]:
        return self._decode[name]


def _flag(q, bit: bool) -> str:
    return f"{q}/{int(bit)}"


def nt_to_t(m: MullerAutomaton) -> TermAutomaton:
    """Terminating machine over pair advice accepting the same words.

    States are ``"<q>/<bit>"``: the machine tracks m's state and whether
    that state lies in the set carried by the advice letter just read.
    """
    advice = PairAdviceStream(m)
    delta = {}
    for q in m.states:
        for g_name in advice.alphabet:
            g, f = advice.decode(g_name)
            for a in m.input_alphabet:
                target = m.delta[q, g, a]
                for bit in (0, 1):
                    delta[_flag(q, bit), g_name, a] = _flag(target, target in f)
    states = tuple(_flag(q, bit) for q in m.states for bit in (0, 1))
    f0 = advice.accept_set(0)
    accepting = frozenset(_flag(q, 1) for q in m.states)
    return TermAutomaton(states, m.input_alphabet, advice, delta, _flag(m.initial, m.initial in f0), accepting)


# ---------------------------------------------------------------------------
# Prefix recogniser without advice


@dataclass(frozen=True, eq=False)
class DFA:
    """Classical deterministic automaton; ``delta`` maps ``(state, symbol)``."""

    states: tuple
    alphabet: Alphabet
    delta: dict
    initial: str
    accepting: frozenset

    def __post_init__(self):
        for q in self.states:
            for a in self.alphabet:
                if self.delta.get((q, a)) not in self.states:
                    raise ContractError(f"DFA transition ({q}, {a}) missing or unknown")
        if self.initial not in self.states or not set(self.accepting) <= set(self.states):
            raise ContractError("initial/accepting states must be among the states")

    def accepts(self, w: Sequence[str]) -> bool:
        q = self.initial
        for a in self.alphabet.word(w):
            q = self.delta[q, a]
        return q in self.accepting

    def with_trivial_advice(self, symbol: str = "-") -> TermAutomaton:
        """The same machine as an automaton whose advice is constant."""
        advice = PeriodicStream(Alphabet((symbol,)), (), (symbol,))
        delta = {(q, symbol, a): t for (q, a), t in self.delta.items()}
        return TermAutomaton(self.states, self.alphabet, advice, delta, self.initial, self.accepting)


def pref_recognizer(m: TermAutomaton) -> DFA:
    """Advice-free machine reading advice letters: an accepting state expects a 1 next,
    a rejecting state a 0; anything else drops into an absorbing sink."""
    if tuple(m.input_alphabet) != ("0",):
        raise ContractError(f"expected unary input alphabet ('0',), got {m.input_alphabet.symbols}")
    if set(m.advice_alphabet) != {"0", "1"} or len(m.advice_alphabet) != 2:
        raise ContractError(f"expected binary advice alphabet, got {m.advice_alphabet.symbols}")
    sink = "r"
    while sink in m.states:
        sink += "'"
    delta = {(sink, "0"): sink, (sink, "1"): sink}
    for q in m.states:
        expects = "1" if q in m.accepting else "0"
        for a in ("0", "1"):
            delta[q, a] = m.delta[q, a, "0"] if a == expects else sink
    return DFA(m.states + (sink,), Alphabet(("0", "1")), delta, m.initial, frozenset(m.states))


def next_symbol_recognizer(a: AdviceStream, expected: str = "1") -> TermAutomaton:
    """Terminating machine over unary input accepting ``0^n`` iff ``A_{n+1} = expected``.

    Built from the advice lasso: the state after n letters is the lasso node of
    position n+1.  Only possible because the advice is ultimately periodic.
    """
    prefix, period = require_lasso(a)
    symbols = prefix + period
    p = len(prefix)
    states = tuple(f"n{i}" for i in range(len(symbols)))
    succ = [states[i + 1] for i in range(len(symbols) - 1)] + [states[p]]
    delta = {(states[i], g, "0"): succ[i] for i in range(len(symbols)) for g in a.alphabet}
    accepting = frozenset(states[i] for i, s in enumerate(symbols) if s == expected)
    return TermAutomaton(states, Alphabet(("0",)), a, delta, states[0], accepting)

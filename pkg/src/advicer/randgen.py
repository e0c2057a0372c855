"""Seeded random machines for property sweeps."""

from __future__ import annotations

import itertools
import random
from itertools import product

from advicer.advice import Alphabet, DepthPeriodicTree, PeriodicStream, TableTree
from advicer.automata import BLANK, MullerAutomaton, TermAutomaton
from advicer.separation import Transducer
from advicer.treeauto import TreeAutomaton

DEFAULT_SEED = 20240601


def rng_for(seed: int | None) -> random.Random:
    return random.Random(DEFAULT_SEED if seed is None else seed)


def random_periodic(rng: random.Random, alphabet: Alphabet, max_total: int = 6) -> PeriodicStream:
    """Ultimately periodic stream with ``|prefix| + |period| <= max_total``."""
    total = rng.randint(1, max_total)
    p = rng.randint(0, total - 1)
    symbols = [rng.choice(alphabet.symbols) for _ in range(total)]
    return PeriodicStream(alphabet, tuple(symbols[:p]), tuple(symbols[p:]))


def _states(n: int) -> tuple:
    return tuple(f"q{i}" for i in range(n))


def random_term_automaton(rng: random.Random, max_states: int = 5, sigma: Alphabet | None = None,
                          gamma: Alphabet | None = None, max_advice: int = 6) -> TermAutomaton:
    sigma = sigma or Alphabet(("0", "1"))
    gamma = gamma or Alphabet(("0", "1"))
    states = _states(rng.randint(1, max_states))
    advice = random_periodic(rng, gamma, max_advice)
    delta = {(q, g, a): rng.choice(states) for q, g, a in product(states, gamma, sigma)}
    accepting = frozenset(q for q in states if rng.random() < 0.5)
    return TermAutomaton(states, sigma, advice, delta, states[0], accepting)


def random_muller_automaton(rng: random.Random, max_states: int = 4, sigma: Alphabet | None = None,
                            gamma: Alphabet | None = None, max_advice: int = 6) -> MullerAutomaton:
    sigma = sigma or Alphabet(("0", "1"))
    gamma = gamma or Alphabet(("0", "1"))
    states = _states(rng.randint(1, max_states))
    advice = random_periodic(rng, gamma, max_advice)
    delta = {(q, g, a): rng.choice(states) for q, g, a in product(states, gamma, sigma.symbols + (BLANK,))}
    subsets = [frozenset(c) for r in range(1, len(states) + 1) for c in itertools.combinations(states, r)]
    family = frozenset(s for s in subsets if rng.random() < 0.4)
    return MullerAutomaton(states, sigma, advice, delta, states[0], family)


def random_tree_automaton(rng: random.Random, max_states: int = 3, sigma: Alphabet | None = None,
                          gamma: Alphabet | None = None, table_depth: int = 5) -> TreeAutomaton:
    sigma = sigma or Alphabet(("a", "b"))
    gamma = gamma or Alphabet(("x", "y"))
    states = _states(rng.randint(1, max_states))
    if rng.random() < 0.5:
        period = tuple(rng.choice(gamma.symbols) for _ in range(rng.randint(1, 3)))
        advice = DepthPeriodicTree(gamma, period)
    else:
        # arbitrary labels on the first few levels
        positions = ["".join(p) for n in range(table_depth + 1) for p in product("01", repeat=n)]
        advice = TableTree(gamma, tuple((p, rng.choice(gamma.symbols)) for p in positions),
                           rng.choice(gamma.symbols))
    delta = {key: rng.choice(states) for key in product(states, states, gamma, sigma)}
    accepting = frozenset(q for q in states if rng.random() < 0.5)
    return TreeAutomaton(states, sigma, advice, delta, states[0], accepting)


def random_transducer(rng: random.Random, k: int, max_states: int = 2) -> Transducer:
    gamma, sigma = Alphabet.range(k), Alphabet.range(k + 1)
    states = tuple(str(i) for i in range(rng.randint(1, max_states)))
    output = {(q, b): rng.choice(sigma.symbols) for q in states for b in gamma}
    nxt = {(q, b): rng.choice(states) for q in states for b in gamma}
    return Transducer(states, gamma, sigma, output, nxt, states[0])

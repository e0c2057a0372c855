"""Per-length Myhill-Nerode congruence and synthesis of advice automata.

For a language ``L`` and a length ``n``, two words ``x, y`` of length ``n``
are equivalent when no suffix ``z`` separates ``xz`` and ``yz``.  Black-box
oracles are only probed with suffixes up to a fixed depth, so class counts
computed here are lower bounds on the true width unless marked exact.

A language is regular with advice exactly when this width is bounded over
all lengths; :func:`synthesize` turns such a bound into a machine whose
advice symbols are per-position transition tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from advicer.advice import Alphabet, PeriodicStream, Word
from advicer.automata import TermAutomaton, require_lasso
from advicer.errors import (BoundViolationError, ContractError, DepthInsufficientError,
                            FormatError, SizeError)

ENUMERATION_GUARD = 2 ** 20


@dataclass(frozen=True, eq=False)
class LanguageOracle:
    """Membership predicate on words (tuples of symbols) over ``alphabet``."""

    alphabet: Alphabet
    membership: Callable[[Word], bool]
    name: str = "oracle"
    automaton: TermAutomaton | None = None

    def __call__(self, w: Sequence[str]) -> bool:
        return self.membership(tuple(w))


def _zero_n_one_n(w):
    n = len(w)
    if n % 2:
        return False
    h = n // 2
    return tuple(w) == ("0",) * h + ("1",) * h


def _contains_11(w):
    return any(w[i] == "1" and w[i + 1] == "1" for i in range(len(w) - 1))


_CATALOG = {
    "0n1n": _zero_n_one_n,
    "parity": lambda w: w.count("1") % 2 == 0,
    "contains-11": _contains_11,
    "mod-3": lambda w: w.count("1") % 3 == 0,
    "all": lambda w: True,
    "none": lambda w: False,
}


def catalog_oracle(name: str) -> LanguageOracle:
    """Binary-alphabet catalog languages.

    ``parity`` is an even number of 1s and ``mod-3`` a number of 1s divisible by 3.
    """
    try:
        fn = _CATALOG[name]
    except KeyError:
        raise FormatError(f"unknown catalog language {name!r}; known: {sorted(_CATALOG)}") from None
    return LanguageOracle(Alphabet(("0", "1")), fn, name)


def catalog_languages() -> list[str]:
    return sorted(_CATALOG)


def oracle_from_automaton(m: TermAutomaton, name: str = "automaton") -> LanguageOracle:
    return LanguageOracle(m.input_alphabet, m.accepts, name, m)


# ---------------------------------------------------------------------------
# Bounded-suffix analysis


def distinguish(oracle: LanguageOracle, x: Sequence[str], y: Sequence[str], depth: int) -> Word | None:
    """Shortest (then lexicographically least) suffix of length <= depth separating x and y."""
    x, y = oracle.alphabet.word(x), oracle.alphabet.word(y)
    if len(x) != len(y):
        raise ContractError(f"words must have equal length, got {len(x)} and {len(y)}")
    if x == y:
        return None
    member = oracle.membership
    for z in oracle.alphabet.words_upto(depth):
        if member(x + z) != member(y + z):
            return z
    return None


@dataclass(frozen=True)
class NerodeClass:
    representative: Word
    members: tuple
    accepting: bool


@dataclass(frozen=True, eq=False)
class NerodeTable:
    """The classes of the congruence restricted to words of one length."""

    alphabet: Alphabet
    length: int
    classes: tuple
    suffix_depth: int
    exact: bool

    def __post_init__(self):
        index = {}
        for i, c in enumerate(self.classes):
            for w in c.members:
                index[w] = i
        object.__setattr__(self, "_index", index)

    @property
    def width(self) -> int:
        return len(self.classes)

    def class_of(self, w: Sequence[str]) -> int:
        try:
            return self._index[tuple(w)]
        except KeyError:
            raise ContractError(f"{tuple(w)} is not a word of length {self.length} in this table") from None


def _guard(alphabet: Alphabet, n: int):
    if len(alphabet) ** n > ENUMERATION_GUARD:
        raise SizeError(f"|Sigma|^n = {len(alphabet)}^{n} exceeds the enumeration guard {ENUMERATION_GUARD}")


def classes_at(oracle: LanguageOracle, n: int, depth: int) -> NerodeTable:
    """Partition all words of length ``n`` by their membership signature over suffixes <= depth."""
    if n < 0 or depth < 0:
        raise ContractError("length and depth must be nonnegative")
    alphabet = oracle.alphabet
    _guard(alphabet, n)
    suffixes = list(alphabet.words_upto(depth))
    member = oracle.membership
    groups: dict[tuple, list] = {}
    for x in alphabet.words(n):
        sig = tuple(member(x + z) for z in suffixes)
        groups.setdefault(sig, []).append(x)
    # words are enumerated lexicographically, so members[0] is the least member
    classes = sorted(
        (NerodeClass(ms[0], tuple(ms), sig[0]) for sig, ms in groups.items()),
        key=lambda c: alphabet.sort_key(c.representative),
    )
    exact = False
    m = oracle.automaton
    if m is not None and m.advice.lasso() is not None:
        exact = depth >= equivalence_rounds(m)
    return NerodeTable(alphabet, n, tuple(classes), depth, exact)


def width(oracle: LanguageOracle, n: int, depth: int) -> int:
    """Class count at length n; a lower bound on the true width unless the table is exact."""
    return classes_at(oracle, n, depth).width


def class_assignment_stability(table_n: NerodeTable, table_n1: NerodeTable) -> dict:
    """The successor map ``(class index, symbol) -> class index`` from length n to n+1."""
    if table_n1.length != table_n.length + 1:
        raise ContractError("tables must be at consecutive lengths")
    if table_n1.suffix_depth != table_n.suffix_depth:
        raise ContractError("tables must share a suffix depth")
    succ = {}
    for i, c in enumerate(table_n.classes):
        for a in table_n.alphabet:
            targets = {table_n1.class_of(x + (a,)) for x in c.members}
            if len(targets) != 1:
                raise DepthInsufficientError(
                    f"class {i} (rep {''.join(c.representative) or 'ε'}) at length {table_n.length} "
                    f"splits under {a!r} into classes {sorted(targets)} at length {table_n1.length}; "
                    f"depth {table_n.suffix_depth} is too small")
            succ[i, a] = targets.pop()
    return succ


# ---------------------------------------------------------------------------
# Exact analysis of automata with ultimately periodic advice


def _advice_nodes(m: TermAutomaton):
    """The advice lasso as a finite graph: node i reads ``symbols[i]`` then moves to ``succ(i)``."""
    prefix, period = require_lasso(m.advice)
    symbols = prefix + period
    p = len(prefix)
    succ = [i + 1 for i in range(len(symbols))]
    succ[-1] = p
    return symbols, succ, p, len(period)


def _node_of(position: int, p: int, per: int) -> int:
    return position - 1 if position <= p else p + (position - p - 1) % per


def _refine(m: TermAutomaton):
    """Greatest-fixpoint state equivalence per advice node.

    Returns ``(labels, rounds)`` where ``labels[node][state]`` is a class id
    and ``rounds`` is the number of refinement steps that changed anything.
    Suffixes of length >= rounds therefore separate every inequivalent pair.
    """
    symbols, succ, _, _ = _advice_nodes(m)
    states, sigma, delta = m.states, tuple(m.input_alphabet), m.delta
    labels = [{q: int(q in m.accepting) for q in states} for _ in symbols]
    counts = [len(set(lab.values())) for lab in labels]
    rounds = 0
    while True:
        new = []
        for i, g in enumerate(symbols):
            nxt = labels[succ[i]]
            ids: dict = {}
            row = {}
            for q in states:
                key = (labels[i][q],) + tuple(nxt[delta[q, g, a]] for a in sigma)
                row[q] = ids.setdefault(key, len(ids))
            new.append(row)
        new_counts = [len(set(lab.values())) for lab in new]
        if new_counts == counts:
            return labels, rounds
        labels, counts = new, new_counts
        rounds += 1


def equivalence_rounds(m: TermAutomaton) -> int:
    return _refine(m)[1]


def state_equiv_at(m: TermAutomaton, n: int) -> list[frozenset]:
    """Partition of states that agree on every suffix read from advice position n+1."""
    if n < 0:
        raise ContractError("length must be nonnegative")
    labels, _ = _refine(m)
    _, _, p, per = _advice_nodes(m)
    row = labels[_node_of(n + 1, p, per)]
    blocks: dict[int, list] = {}
    for q in m.states:
        blocks.setdefault(row[q], []).append(q)
    return [frozenset(b) for b in blocks.values()]


def reachable_at(m: TermAutomaton, n: int) -> frozenset:
    """States reached by some input word of length n."""
    current = {m.initial}
    for pos in range(1, n + 1):
        g = m.advice.at(pos)
        current = {m.delta[q, g, a] for q in current for a in m.input_alphabet}
    return frozenset(current)


def exact_width(m: TermAutomaton, n: int) -> int:
    """Number of congruence classes of L(m) at length n, computed without enumeration."""
    reached = reachable_at(m, n)
    return sum(1 for block in state_equiv_at(m, n) if block & reached)


# ---------------------------------------------------------------------------
# Synthesis


@dataclass(frozen=True, eq=False)
class SynthesizedAutomaton:
    """States ``1..2k``, accepting ``1..k``; the advice at position n is a transition table.

    ``tables[n-1]`` is the table read at step n, a tuple indexed by
    ``(q-1) * |Sigma| + index(a)``.  Positions past the horizon read ``default``.
    """

    k: int
    input_alphabet: Alphabet
    initial: int
    tables: tuple
    default: tuple

    @property
    def horizon(self) -> int:
        return len(self.tables)

    @property
    def states(self) -> range:
        return range(1, 2 * self.k + 1)

    @property
    def accepting(self) -> range:
        return range(1, self.k + 1)

    def advice_at(self, n: int) -> tuple:
        if n < 1:
            raise ContractError(f"advice positions start at 1, got {n}")
        return self.tables[n - 1] if n <= len(self.tables) else self.default

    def step(self, q: int, n: int, a: str) -> int:
        return self.advice_at(n)[(q - 1) * len(self.input_alphabet) + self.input_alphabet.index(a)]

    def run(self, w: Sequence[str]) -> tuple:
        w = self.input_alphabet.word(w)
        q = self.initial
        states = [q]
        for n, a in enumerate(w, 1):
            q = self.step(q, n, a)
            states.append(q)
        return tuple(states)

    def accepts(self, w: Sequence[str]) -> bool:
        return self.run(w)[-1] <= self.k

    def as_automaton(self) -> TermAutomaton:
        """Materialise as a TermAutomaton whose advice alphabet is the tables actually used."""
        names: dict[tuple, str] = {}
        for t in self.tables + (self.default,):
            names.setdefault(t, f"f{len(names)}")
        gamma = Alphabet(tuple(names.values()))
        advice = PeriodicStream(gamma, tuple(names[t] for t in self.tables), (names[self.default],))
        sigma = self.input_alphabet
        delta = {}
        for t, g in names.items():
            for q in self.states:
                for i, a in enumerate(sigma):
                    delta[str(q), g, a] = str(t[(q - 1) * len(sigma) + i])
        return TermAutomaton(tuple(str(q) for q in self.states), sigma, advice, delta,
                             str(self.initial), frozenset(str(q) for q in self.accepting))


def synthesize(oracle: LanguageOracle, k: int, horizon: int, depth: int) -> SynthesizedAutomaton:
    """Build an automaton agreeing with ``oracle`` on every word of length <= horizon.

    Classes at each length are mapped to states: accepting classes to 1, 2, ...
    and rejecting ones to k+1, k+2, ..., both in representative order.  The
    table read at step n sends the state of each class C at length n-1 on
    input a to the state of C·a's class; unused entries are self-loops.
    """
    if k < 1 or horizon < 0:
        raise ContractError("need k >= 1 and horizon >= 0")
    sigma = oracle.alphabet
    tables_by_n = []
    for n in range(horizon + 1):
        table = classes_at(oracle, n, depth)
        if table.width > k:
            raise BoundViolationError(f"length {n}", table.width, k,
                                      ["".join(c.representative) for c in table.classes])
        tables_by_n.append(table)

    def assign(table):
        acc = [i for i, c in enumerate(table.classes) if c.accepting]
        rej = [i for i, c in enumerate(table.classes) if not c.accepting]
        state = {i: j + 1 for j, i in enumerate(acc)}
        state.update({i: k + j + 1 for j, i in enumerate(rej)})
        return state

    assignments = [assign(t) for t in tables_by_n]
    identity = tuple(q for q in range(1, 2 * k + 1) for _ in sigma)
    tables = []
    for n in range(horizon):
        succ = class_assignment_stability(tables_by_n[n], tables_by_n[n + 1])
        f = list(identity)
        for (c, a), target in succ.items():
            q = assignments[n][c]
            f[(q - 1) * len(sigma) + sigma.index(a)] = assignments[n + 1][target]
        tables.append(tuple(f))
    initial = 1 if oracle.membership(()) else k + 1
    return SynthesizedAutomaton(k, sigma, initial, tuple(tables), identity)

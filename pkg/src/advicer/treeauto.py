"""Finite labeled binary trees, bottom-up tree automata with advice trees,
the per-position congruence, and synthesis from a bounded-width tree oracle.

Trees are stored as nested ``(label, left, right)`` tuples with ``None``
for an absent subtree; positions are binary strings with ``""`` the root.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, Iterator, Mapping, Sequence

from advicer.advice import AdviceTree, Alphabet, TableTree, check_position
from advicer.errors import (AlphabetError, BoundViolationError, ContractError, DepthInsufficientError,
                            FormatError, SizeError)

TREE_GUARD = 2 ** 18
# class members per side used to cross-check the successor of a class pair
CHECK_MEMBERS = 4


@dataclass(frozen=True)
class LabeledTree:
    node: tuple | None = None

    @classmethod
    def from_labels(cls, labels: Mapping[str, str]) -> LabeledTree:
        """Build from a ``position -> label`` map, which must be prefix-closed."""
        for pos in labels:
            check_position(pos)
            if pos and pos[:-1] not in labels:
                raise ContractError(f"positions are not prefix-closed: {pos!r} lacks its parent")

        def build(pos):
            if pos not in labels:
                return None
            return (labels[pos], build(pos + "0"), build(pos + "1"))

        return cls(build(""))

    @classmethod
    def leaf(cls, label: str) -> LabeledTree:
        return cls((label, None, None))

    @cached_property
    def labels(self) -> dict[str, str]:
        out = {}
        stack = [(self.node, "")]
        while stack:
            node, pos = stack.pop()
            if node is not None:
                out[pos] = node[0]
                stack.append((node[1], pos + "0"))
                stack.append((node[2], pos + "1"))
        return out

    @property
    def positions(self) -> frozenset:
        return frozenset(self.labels)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def depth(self) -> int:
        """Length of the longest position; -1 for the empty tree."""
        return max((len(p) for p in self.labels), default=-1)

    def __contains__(self, position):
        return position in self.labels

    def __str__(self):
        return format_tree(self)


EMPTY = LabeledTree()


def is_graft_site(t: LabeledTree, u: str) -> bool:
    check_position(u)
    if u in t:
        return False
    if u == "":
        return t.node is None
    return u[:-1] in t


def graft(t: LabeledTree, u: str, x: LabeledTree) -> LabeledTree:
    """``t`` with ``x`` attached at the graft site ``u``."""
    if not is_graft_site(t, u):
        raise ContractError(f"{u or 'λ'} is not a graft site of {format_tree(t)}")
    return LabeledTree(_graft(t.node, u, x.node))


def _graft(node, u, sub):
    if not u:
        return sub
    label, left, right = node
    if u[0] == "0":
        return (label, _graft(left, u[1:], sub), right)
    return (label, left, _graft(right, u[1:], sub))


def subtree(t: LabeledTree, position: str) -> LabeledTree:
    node = t.node
    for c in check_position(position):
        if node is None:
            break
        node = node[1] if c == "0" else node[2]
    return LabeledTree(node)


def combine(left: LabeledTree, label: str, right: LabeledTree) -> LabeledTree:
    """The tree with root ``label`` and the given subtrees, built by two grafts."""
    return graft(graft(LabeledTree.leaf(label), "0", left), "1", right)


# ---------------------------------------------------------------------------
# Text format: a(l,r) with '.' for an absent child; a bare label is a leaf


def format_tree(t: LabeledTree | tuple | None) -> str:
    node = t.node if isinstance(t, LabeledTree) else t
    if node is None:
        return "."
    label, left, right = node
    if left is None and right is None:
        return f"{label}(.,.)"
    return f"{label}({format_tree(left)},{format_tree(right)})"


def parse_tree(text: str) -> LabeledTree:
    if re.search(r"[\w-]\s+[\w-]", text):
        raise FormatError(f"labels may not contain whitespace: {text!r}")
    s = "".join(text.split())
    pos = 0

    def parse():
        nonlocal pos
        if pos < len(s) and s[pos] == ".":
            pos += 1
            return None
        start = pos
        while pos < len(s) and (s[pos].isalnum() or s[pos] in "_-"):
            pos += 1
        if start == pos:
            raise FormatError(f"expected a label or '.' at offset {pos} in {text!r}")
        label = s[start:pos]
        if pos < len(s) and s[pos] == "(":
            pos += 1
            left = parse()
            expect(",")
            right = parse()
            expect(")")
            return (label, left, right)
        return (label, None, None)

    def expect(c):
        nonlocal pos
        if pos >= len(s) or s[pos] != c:
            raise FormatError(f"expected {c!r} at offset {pos} in {text!r}")
        pos += 1

    node = parse()
    if pos != len(s):
        raise FormatError(f"trailing input at offset {pos} in {text!r}")
    return LabeledTree(node)


# ---------------------------------------------------------------------------
# Enumeration


def _shapes(n: int) -> list:
    """All tree shapes with exactly n nodes, as nested tuples with label None."""
    if n == 0:
        return [None]
    out = []
    for i in range(n):
        for left in _shapes(i):
            for right in _shapes(n - 1 - i):
                out.append((None, left, right))
    return out


def _label_shape(shape, labels: Iterator[str]):
    if shape is None:
        return None
    label = next(labels)
    return (label, _label_shape(shape[1], labels), _label_shape(shape[2], labels))


def count_trees(alphabet: Alphabet, max_size: int) -> int:
    catalan = [1]
    for n in range(1, max_size + 1):
        catalan.append(sum(catalan[i] * catalan[n - 1 - i] for i in range(n)))
    return sum(catalan[n] * len(alphabet) ** n for n in range(max_size + 1))


def tree_sort_key(t: LabeledTree, alphabet: Alphabet):
    """Canonical order: size, then positions in shortlex order, then labels."""
    positions = sorted(t.labels, key=lambda p: (len(p), p))
    return (len(positions), [(len(p), p) for p in positions],
            [alphabet.index(t.labels[p]) for p in positions])


@lru_cache(maxsize=64)
def enumerate_trees(alphabet: Alphabet, max_size: int) -> tuple[LabeledTree, ...]:
    """All labeled trees with at most ``max_size`` nodes, in canonical order."""
    total = count_trees(alphabet, max_size)
    if total > TREE_GUARD:
        raise SizeError(f"{total} trees with <= {max_size} nodes exceeds the guard {TREE_GUARD}")
    trees = []
    for n in range(max_size + 1):
        for shape in _shapes(n):
            for labels in itertools.product(alphabet.symbols, repeat=n):
                trees.append(LabeledTree(_label_shape(shape, iter(labels))))
    trees.sort(key=lambda t: tree_sort_key(t, alphabet))
    return tuple(trees)


def trees_of_depth(alphabet: Alphabet, depth: int) -> Iterator[tuple | None]:
    """Every tree node (nested tuple) whose positions have length <= depth."""
    if depth < 0:
        yield None
        return
    subs = list(trees_of_depth(alphabet, depth - 1))
    yield None
    for a in alphabet:
        for left in subs:
            for right in subs:
                yield (a, left, right)


@lru_cache(maxsize=256)
def contexts(alphabet: Alphabet, v: str, max_size: int) -> tuple[LabeledTree, ...]:
    """Trees with at most ``max_size`` nodes having ``v`` as a graft site, canonical order."""
    return tuple(t for t in enumerate_trees(alphabet, max_size) if is_graft_site(t, v))


# ---------------------------------------------------------------------------
# Automata


@dataclass(frozen=True, eq=False)
class TreeAutomaton:
    """Bottom-up tree automaton; ``delta`` maps ``(left state, right state, advice, label)``."""

    states: tuple
    input_alphabet: Alphabet
    advice: AdviceTree
    delta: Mapping
    initial: str
    accepting: frozenset

    def __post_init__(self):
        states = tuple(self.states)
        if not states or len(set(states)) != len(states):
            raise ContractError(f"states must be nonempty and distinct: {states}")
        if self.initial not in states:
            raise ContractError(f"initial state {self.initial!r} not among states")
        delta = dict(self.delta)
        for key in itertools.product(states, states, self.advice.alphabet, self.input_alphabet):
            if delta.get(key) not in states:
                raise ContractError(f"transition {key} missing or leaves the state set")
        accepting = frozenset(self.accepting)
        if not accepting <= set(states):
            raise ContractError("accepting states must be among the states")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "accepting", accepting)

    @property
    def advice_alphabet(self) -> Alphabet:
        return self.advice.alphabet

    def state_of(self, node, pos: str = ""):
        """State assigned to ``pos`` when the subtree ``node`` sits there."""
        if node is None:
            return self.initial
        label, left, right = node
        if label not in self.input_alphabet:
            raise AlphabetError(label, pos or "λ", self.input_alphabet.symbols)
        return self.delta[self.state_of(left, pos + "0"), self.state_of(right, pos + "1"),
                          self.advice.at(pos), label]

    def accepts(self, t: LabeledTree) -> bool:
        return self.state_of(t.node) in self.accepting


def run_tree(m: TreeAutomaton, t: LabeledTree) -> tuple[str, dict[str, str]]:
    """Root state and the state at every position of ``t``, computed leaves first."""
    labels = t.labels
    for pos, a in labels.items():
        if a not in m.input_alphabet:
            raise AlphabetError(a, pos or "λ", m.input_alphabet.symbols)
    r: dict[str, str] = {}
    for pos in sorted(labels, key=len, reverse=True):
        r[pos] = m.delta[r.get(pos + "0", m.initial), r.get(pos + "1", m.initial),
                         m.advice.at(pos), labels[pos]]
    return r.get("", m.initial), r


@dataclass(frozen=True, eq=False)
class TreeOracle:
    alphabet: Alphabet
    membership: Callable[[LabeledTree], bool]
    name: str = "tree-oracle"
    automaton: TreeAutomaton | None = None

    def __call__(self, t: LabeledTree) -> bool:
        return self.membership(t)


def _count_label(node, label) -> int:
    if node is None:
        return 0
    return (node[0] == label) + _count_label(node[1], label) + _count_label(node[2], label)


_TREE_LANGUAGES = {
    "even-a": lambda t: _count_label(t.node, "a") % 2 == 0,
    "root-a": lambda t: t.node is not None and t.node[0] == "a",
    "empty-only": lambda t: t.node is None,
    "all": lambda t: True,
    "none": lambda t: False,
}


def catalog_tree_oracle(name: str) -> TreeOracle:
    """Catalog tree languages over labels {a, b}."""
    try:
        fn = _TREE_LANGUAGES[name]
    except KeyError:
        raise FormatError(f"unknown tree language {name!r}; known: {sorted(_TREE_LANGUAGES)}") from None
    return TreeOracle(Alphabet(("a", "b")), fn, name)


def tree_languages() -> list[str]:
    return sorted(_TREE_LANGUAGES)


def tree_oracle_from_automaton(m: TreeAutomaton, name: str = "tree-automaton") -> TreeOracle:
    return TreeOracle(m.input_alphabet, m.accepts, name, m)


# ---------------------------------------------------------------------------
# Congruence at a position


def tree_distinguish(oracle: TreeOracle, x: LabeledTree, y: LabeledTree, v: str,
                     context_size: int) -> LabeledTree | None:
    """Smallest context with graft site ``v`` that separates ``x`` from ``y``, if any."""
    if x == y:
        return None
    for t in contexts(oracle.alphabet, v, context_size):
        if oracle(graft(t, v, x)) != oracle(graft(t, v, y)):
            return t
    return None


@dataclass(frozen=True)
class TreeClass:
    representative: LabeledTree
    members: tuple
    signature: tuple


@dataclass(frozen=True, eq=False)
class TreeTable:
    position: str
    classes: tuple
    tree_size: int
    context_size: int
    contexts: tuple

    @property
    def width(self) -> int:
        return len(self.classes)


def _signature(oracle: TreeOracle, ctxs: Sequence[LabeledTree], v: str, x: LabeledTree) -> tuple:
    member = oracle.membership
    return tuple(member(LabeledTree(_graft(t.node, v, x.node))) for t in ctxs)


def tree_classes_at(oracle: TreeOracle, v: str, tree_size: int, context_size: int) -> TreeTable:
    """Partition trees with <= tree_size nodes by membership over contexts <= context_size.

    The class count is a lower bound on the number of classes at ``v``.
    """
    check_position(v)
    ctxs = tuple(contexts(oracle.alphabet, v, context_size))
    groups: dict[tuple, list] = {}
    for x in enumerate_trees(oracle.alphabet, tree_size):
        groups.setdefault(_signature(oracle, ctxs, v, x), []).append(x)
    classes = tuple(TreeClass(ms[0], tuple(ms), sig) for sig, ms in groups.items())
    classes = tuple(sorted(classes, key=lambda c: tree_sort_key(c.representative, oracle.alphabet)))
    return TreeTable(v, classes, tree_size, context_size, ctxs)


# ---------------------------------------------------------------------------
# Synthesis


def _positions_upto(depth: int) -> list[str]:
    return ["".join(p) for n in range(depth + 1) for p in itertools.product("01", repeat=n)]


@dataclass(frozen=True, eq=False)
class TreeSynthesis:
    """A synthesized machine plus the tables it was built from."""

    automaton: TreeAutomaton
    tables: dict  # position -> TreeTable
    assignment: dict  # position -> {class index: state}
    transitions: dict  # advice symbol -> {(j, j', a): j''}


def synthesize_tree(oracle: TreeOracle, k: int, depth: int, tree_size: int = 3,
                    context_size: int | None = None) -> TreeSynthesis:
    """Machine with states 1..k, F = {1}, agreeing with ``oracle`` on trees of depth <= ``depth``.

    At each position the empty tree's class gets the initial state and, at
    the root, the in-language class gets state 1; other classes take the
    remaining states in representative order.  The table at position v sends
    the states of classes (C, C') at v0, v1 and a label a to the state of
    the class of ``combine(rep C, a, rep C')`` at v.  The smallest members
    of C and C' are combined too; if they land in different classes the
    contexts were too coarse and DepthInsufficientError is raised.
    """
    if context_size is None:
        context_size = depth + 1
    sigma = oracle.alphabet
    q0 = 1 if oracle(EMPTY) else 2
    if q0 > k:
        raise BoundViolationError("the initial state", 2, k,
                                  ["empty tree (rejected)", "its complement class"])
    positions = _positions_upto(depth)
    tables = {}
    assignment = {}
    for v in positions:
        table = tree_classes_at(oracle, v, tree_size, context_size)
        if table.width > k:
            raise BoundViolationError(f"position {v or 'λ'}", table.width, k,
                                      [format_tree(c.representative) for c in table.classes])
        tables[v] = table
        empty_cls = next(i for i, c in enumerate(table.classes) if c.representative.node is None)
        state = {empty_cls: q0}
        if v == "":
            for i, c in enumerate(table.classes):
                if i != empty_cls and oracle(c.representative):
                    state[i] = 1
        free = iter(q for q in range(1, k + 1) if q not in state.values())
        for i in range(table.width):
            if i not in state:
                state[i] = next(free)
        assignment[v] = state

    transitions: dict = {}
    position_tables = {}
    for v in positions:
        table = tables[v]
        by_sig = {c.signature: i for i, c in enumerate(table.classes)}
        if len(v) < depth:
            children = [[(c.members, assignment[w][i]) for i, c in enumerate(tables[w].classes)]
                        for w in (v + "0", v + "1")]
        else:
            # below the horizon every child is absent
            children = [[((EMPTY,), q0)], [((EMPTY,), q0)]]
        f = {(j, jj, a): j for j in range(1, k + 1) for jj in range(1, k + 1) for a in sigma}
        for (left, j), (right, jj) in itertools.product(*children):
            for a in sigma:
                sigs = {_signature(oracle, table.contexts, v, combine(s, a, t))
                        for s in left[:CHECK_MEMBERS] for t in right[:CHECK_MEMBERS]}
                if len(sigs) > 1:
                    raise DepthInsufficientError(
                        f"members of one class pair below {v or 'λ'} combine into different classes; "
                        f"contexts of <= {context_size} nodes are too small")
                sig = sigs.pop()
                if sig not in by_sig:
                    raise DepthInsufficientError(
                        f"{format_tree(combine(left[0], a, right[0]))} at {v or 'λ'} falls outside the classes "
                        f"found with trees of <= {tree_size} nodes; raise the tree size")
                f[j, jj, a] = assignment[v][by_sig[sig]]
        position_tables[v] = tuple(sorted(f.items()))

    default = tuple(sorted({(j, jj, a): j for j in range(1, k + 1)
                            for jj in range(1, k + 1) for a in sigma}.items()))
    names: dict[tuple, str] = {}
    for v in positions:
        names.setdefault(position_tables[v], f"f{len(names)}")
    names.setdefault(default, f"f{len(names)}")
    gamma = Alphabet(tuple(names.values()))
    advice = TableTree(gamma, tuple((v, names[position_tables[v]]) for v in positions), names[default])
    delta = {}
    for tab, g in names.items():
        transitions[g] = dict(tab)
        for (j, jj, a), target in tab:
            delta[str(j), str(jj), g, a] = str(target)
    m = TreeAutomaton(tuple(str(q) for q in range(1, k + 1)), sigma, advice, delta, str(q0), frozenset({"1"}))
    return TreeSynthesis(m, tables, assignment, transitions)

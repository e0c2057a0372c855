"""Alphabets, infinite advice strings and advice trees.

Advice strings are indexed from 1: ``stream.at(1)`` is the symbol read by
the first transition step.  Advice trees are indexed by binary position
strings, ``""`` being the root.
"""

from __future__ import annotations

import abc
import itertools
import re
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from advicer.errors import AlphabetError, ContractError, FormatError

Word = tuple  # tuple of symbol names


@dataclass(frozen=True)
class Alphabet:
    """A nonempty ordered set of symbol names."""

    symbols: tuple
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        if not symbols:
            raise ContractError("an alphabet must be nonempty")
        for s in symbols:
            if not isinstance(s, str) or not s:
                raise ContractError(f"symbol names must be nonempty strings, got {s!r}")
        if len(set(symbols)) != len(symbols):
            raise ContractError(f"duplicate symbols in alphabet {symbols}")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(symbols)})

    @classmethod
    def of(cls, symbols: Iterable[str]) -> Alphabet:
        return cls(tuple(symbols))

    @classmethod
    def range(cls, k: int) -> Alphabet:
        """The alphabet ``{0, ..., k-1}`` with decimal names."""
        return cls(tuple(str(i) for i in range(k)))

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def index(self, symbol) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise AlphabetError(symbol, alphabet=self.symbols) from None

    def word(self, w: Sequence[str]) -> Word:
        """Validate ``w`` and return it as a tuple; positions in errors are 1-based."""
        w = tuple(w)
        for i, s in enumerate(w, 1):
            if s not in self._index:
                raise AlphabetError(s, i, self.symbols)
        return w

    def words(self, n: int) -> Iterator[Word]:
        """All words of length ``n`` in lexicographic order."""
        return itertools.product(self.symbols, repeat=n)

    def words_upto(self, n: int) -> Iterator[Word]:
        """All words of length at most ``n``, shortest first."""
        for m in range(n + 1):
            yield from self.words(m)

    def sort_key(self, w: Sequence[str]):
        return tuple(self._index[s] for s in w)


# ---------------------------------------------------------------------------
# Advice strings


class AdviceStream(abc.ABC):
    """An infinite word over a finite alphabet."""

    alphabet: Alphabet

    @abc.abstractmethod
    def _symbol(self, n: int) -> str:
        ...

    @abc.abstractmethod
    def descriptor(self) -> str:
        """Textual form accepted by :func:`parse_stream`."""

    def at(self, n: int) -> str:
        if n < 1:
            raise ContractError(f"advice positions start at 1, got {n}")
        return self._symbol(n)

    def prefix(self, n: int) -> Word:
        if n < 0:
            raise ContractError(f"prefix length must be nonnegative, got {n}")
        return tuple(self._symbol(i) for i in range(1, n + 1))

    def lasso(self) -> tuple[Word, Word] | None:
        """``(prefix, period)`` when the stream is known to be ultimately periodic."""
        return None

    def __str__(self):
        return self.descriptor()


@dataclass(frozen=True, eq=False)
class PeriodicStream(AdviceStream):
    """The ultimately periodic word ``prefix · period^ω``."""

    alphabet: Alphabet
    prefix_part: Word
    period: Word

    def __post_init__(self):
        object.__setattr__(self, "prefix_part", self.alphabet.word(self.prefix_part))
        object.__setattr__(self, "period", self.alphabet.word(self.period))
        if not self.period:
            raise ContractError("the period of an ultimately periodic stream must be nonempty")

    def _symbol(self, n):
        p = len(self.prefix_part)
        if n <= p:
            return self.prefix_part[n - 1]
        return self.period[(n - p - 1) % len(self.period)]

    def lasso(self):
        return self.prefix_part, self.period

    def descriptor(self):
        return "periodic:" + ",".join(self.prefix_part) + "|" + ",".join(self.period)

    def __eq__(self, other):
        if not isinstance(other, PeriodicStream):
            return NotImplemented
        return (self.alphabet, self.prefix_part, self.period) == (
            other.alphabet, other.prefix_part, other.period)

    def __hash__(self):
        return hash((self.alphabet, self.prefix_part, self.period))


def periodic(prefix: Sequence[str], period: Sequence[str], alphabet: Alphabet | None = None) -> PeriodicStream:
    """Convenience constructor; the alphabet defaults to the symbols used, sorted."""
    if alphabet is None:
        alphabet = Alphabet(tuple(sorted(set(prefix) | set(period))))
    return PeriodicStream(alphabet, tuple(prefix), tuple(period))


class GeneratedStream(AdviceStream):
    """A stream defined by a named position rule from the generator catalog."""

    def __init__(self, alphabet: Alphabet, name: str, rule: Callable[[int], str]):
        self.alphabet = alphabet
        self.name = name
        self._rule = rule

    def _symbol(self, n):
        s = self._rule(n)
        if s not in self.alphabet:
            raise AlphabetError(s, n, self.alphabet.symbols)
        return s

    def descriptor(self):
        return "gen:" + self.name


class BlockStream(AdviceStream):
    """The concatenation of a lazily produced sequence of finite blocks.

    Blocks are materialised on demand and cached; the block iterator must be
    infinite or the stream raises once it runs dry.
    """

    def __init__(self, alphabet: Alphabet, name: str, blocks: Callable[[], Iterator[Sequence[str]]]):
        self.alphabet = alphabet
        self.name = name
        self._blocks = blocks()
        self._buffer: list[str] = []
        self._lock = threading.Lock()

    def _extend_to(self, n):
        with self._lock:
            while len(self._buffer) < n:
                try:
                    block = next(self._blocks)
                except StopIteration:
                    raise ContractError(f"{self.name}: block source exhausted before position {n}") from None
                self._buffer.extend(self.alphabet.word(block))

    def _symbol(self, n):
        if n > len(self._buffer):
            self._extend_to(n)
        return self._buffer[n - 1]

    def descriptor(self):
        return "gen:" + self.name


def advice_at(stream: AdviceStream, n: int) -> str:
    return stream.at(n)


def stream_prefix(stream: AdviceStream, n: int) -> Word:
    return stream.prefix(n)


# ---------------------------------------------------------------------------
# Generator catalog

_CATALOG: dict[str, Callable[..., AdviceStream]] = {}


def register_generator(name: str):
    """Add a stream factory to the closed generator catalog."""
    def deco(factory):
        _CATALOG[name] = factory
        return factory
    return deco


def catalog_names() -> list[str]:
    _load_catalog()
    return sorted(_CATALOG)


def _load_catalog():
    # generators live next to the code that uses them
    import advicer.rationals  # noqa: F401
    import advicer.separation  # noqa: F401


def catalog_stream(name: str, *args: int) -> AdviceStream:
    _load_catalog()
    try:
        factory = _CATALOG[name]
    except KeyError:
        raise FormatError(f"unknown generator {name!r}; known: {sorted(_CATALOG)}") from None
    return factory(*args)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@register_generator("primes")
def prime_characteristic() -> GeneratedStream:
    """``A_n = 1`` iff ``n`` is prime."""
    return GeneratedStream(Alphabet(("0", "1")), "primes", lambda n: "1" if _is_prime(n) else "0")


_GEN_RE = re.compile(r"^([A-Za-z][\w-]*)(?:\(([\d,\s]*)\))?$")


def parse_stream(text: str, alphabet: Alphabet | None = None) -> AdviceStream:
    """Parse ``periodic:<prefix>|<period>`` or ``gen:<name>[(<int>,...)]``."""
    text = text.strip()
    if text.startswith("periodic:"):
        body = text[len("periodic:"):]
        if "|" not in body:
            raise FormatError(f"periodic descriptor needs '|': {text!r}")
        pre, per = body.split("|", 1)
        prefix = tuple(s.strip() for s in pre.split(",") if s.strip())
        period = tuple(s.strip() for s in per.split(",") if s.strip())
        if not period:
            raise FormatError(f"empty period in {text!r}")
        try:
            if alphabet is None:
                return periodic(prefix, period)
            return PeriodicStream(alphabet, prefix, period)
        except ContractError as exc:
            raise FormatError(str(exc)) from None
    if text.startswith("gen:"):
        m = _GEN_RE.match(text[4:].strip())
        if not m:
            raise FormatError(f"bad generator descriptor {text!r}")
        args = tuple(int(a) for a in (m.group(2) or "").split(",") if a.strip())
        stream = catalog_stream(m.group(1), *args)
        if alphabet is not None and stream.alphabet != alphabet:
            raise FormatError(f"generator {m.group(1)} has alphabet {stream.alphabet.symbols}, "
                              f"expected {alphabet.symbols}")
        return stream
    raise FormatError(f"unrecognised stream descriptor {text!r}")


# ---------------------------------------------------------------------------
# Advice trees


def check_position(position: str) -> str:
    if any(c not in "01" for c in position):
        raise ContractError(f"tree positions are binary strings, got {position!r}")
    return position


class AdviceTree(abc.ABC):
    """A total labeling of ``{0,1}*`` by an advice alphabet."""

    alphabet: Alphabet

    @abc.abstractmethod
    def at(self, position: str) -> str:
        ...

    @abc.abstractmethod
    def descriptor(self) -> str:
        ...


@dataclass(frozen=True)
class UniformTree(AdviceTree):
    alphabet: Alphabet
    symbol: str

    def __post_init__(self):
        self.alphabet.word((self.symbol,))

    def at(self, position):
        return self.symbol

    def descriptor(self):
        return f"uniform:{self.symbol}"


@dataclass(frozen=True)
class DepthPeriodicTree(AdviceTree):
    """Label depends only on ``len(position) mod len(table)``."""

    alphabet: Alphabet
    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", self.alphabet.word(self.table))
        if not self.table:
            raise ContractError("depth table must be nonempty")

    def at(self, position):
        return self.table[len(position) % len(self.table)]

    def descriptor(self):
        return "depth:" + ",".join(self.table)


@dataclass(frozen=True)
class TableTree(AdviceTree):
    """Explicit labels for finitely many positions, ``default`` elsewhere."""

    alphabet: Alphabet
    table: tuple  # sorted ((position, symbol), ...)
    default: str

    def __post_init__(self):
        items = dict(self.table)
        for pos, sym in items.items():
            check_position(pos)
            self.alphabet.word((sym,))
        self.alphabet.word((self.default,))
        object.__setattr__(self, "table", tuple(sorted(items.items(), key=lambda kv: (len(kv[0]), kv[0]))))
        object.__setattr__(self, "_map", items)

    def at(self, position):
        return self._map.get(position, self.default)

    def descriptor(self):
        body = ",".join(f"{pos or '^'}={sym}" for pos, sym in self.table)
        return f"table:{body}|{self.default}"


class GeneratedTree(AdviceTree):
    def __init__(self, alphabet: Alphabet, name: str, rule: Callable[[str], str]):
        self.alphabet = alphabet
        self.name = name
        self._rule = rule

    def at(self, position):
        s = self._rule(position)
        if s not in self.alphabet:
            raise AlphabetError(s, position, self.alphabet.symbols)
        return s

    def descriptor(self):
        return "gen:" + self.name


_TREE_CATALOG: dict[str, Callable[[], AdviceTree]] = {
    # the last direction taken to reach a node; the root counts as '0'
    "last-bit": lambda: GeneratedTree(Alphabet(("0", "1")), "last-bit", lambda p: p[-1] if p else "0"),
    # parity of the number of right turns
    "right-parity": lambda: GeneratedTree(Alphabet(("0", "1")), "right-parity", lambda p: str(p.count("1") % 2)),
}


def tree_advice_at(tree: AdviceTree, position: str) -> str:
    return tree.at(check_position(position))


def parse_tree_advice(text: str, alphabet: Alphabet | None = None) -> AdviceTree:
    """Parse ``uniform:<s>``, ``depth:<s>,...``, ``table:<pos>=<s>,...|<default>`` or ``gen:<name>``.

    In table descriptors the root position is written ``^``.
    """
    text = text.strip()
    kind, _, body = text.partition(":")
    try:
        if kind == "uniform":
            sym = body.strip()
            return UniformTree(alphabet or Alphabet((sym,)), sym)
        if kind == "depth":
            table = tuple(s.strip() for s in body.split(",") if s.strip())
            return DepthPeriodicTree(alphabet or Alphabet(tuple(sorted(set(table)))), table)
        if kind == "table":
            entries, _, default = body.rpartition("|")
            table = []
            for item in filter(None, (e.strip() for e in entries.split(","))):
                pos, _, sym = item.partition("=")
                table.append(("" if pos == "^" else pos, sym))
            default = default.strip()
            if alphabet is None:
                alphabet = Alphabet(tuple(sorted({s for _, s in table} | {default})))
            return TableTree(alphabet, tuple(table), default)
        if kind == "gen":
            try:
                tree = _TREE_CATALOG[body.strip()]()
            except KeyError:
                raise FormatError(f"unknown advice-tree generator {body!r}") from None
            if alphabet is not None and tree.alphabet != alphabet:
                raise FormatError(f"generator {body} has alphabet {tree.alphabet.symbols}")
            return tree
    except ContractError as exc:
        raise FormatError(str(exc)) from None
    raise FormatError(f"unrecognised advice-tree descriptor {text!r}")

"""Line-based text formats for machines.

Every file is a list of ``key: value`` lines; blank lines and lines starting
with ``#`` are ignored.  Lists are comma-separated symbol names.

* ``.aut``   terminating (``accepting:``) or Muller (``muller:``) string automata
* ``.saut``  synthesized automata, one table per advice position
* ``.td``    transducers
* ``.taut``  tree automata
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable

from advicer.advice import Alphabet, parse_stream, parse_tree_advice
from advicer.automata import BLANK, MullerAutomaton, TermAutomaton
from advicer.errors import AdviceError, ContractError, FormatError
from advicer.nerode import SynthesizedAutomaton
from advicer.separation import Transducer
from advicer.treeauto import TreeAutomaton

_FORBIDDEN = set(",|:{} \t\n;>")


def _lines(text: str) -> list[tuple[int, str, str]]:
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise FormatError(f"line {lineno}: expected 'key: value', got {raw!r}")
        out.append((lineno, key.strip(), value.strip()))
    return out


def _list(value: str) -> tuple:
    return tuple(s.strip() for s in value.split(",") if s.strip())


def _header(lines, required: Iterable[str]) -> dict:
    head = {}
    for lineno, key, value in lines:
        if key in ("delta", "muller", "table"):
            continue
        if key in head:
            raise FormatError(f"line {lineno}: duplicate header {key!r}")
        head[key] = value
    missing = [k for k in required if k not in head]
    if missing:
        raise FormatError(f"missing header line(s): {', '.join(missing)}")
    return head


def _check_names(names: Iterable[str], what: str):
    for s in names:
        if not s or set(s) & _FORBIDDEN or s.startswith("#"):
            raise FormatError(f"{what} {s!r} cannot be written in this format")


_ARROW = re.compile(r"^(.*?)\s*->\s*(.*)$")


def _arrow(lineno: int, value: str) -> tuple[tuple, str]:
    m = _ARROW.match(value)
    if not m:
        raise FormatError(f"line {lineno}: expected 'lhs -> rhs', got {value!r}")
    return tuple(s.strip() for s in m.group(1).split(",")), m.group(2).strip()


def _build(factory, *args):
    try:
        return factory(*args)
    except ContractError as exc:
        raise FormatError(str(exc)) from None


# ---------------------------------------------------------------------------
# String automata


def _parse_family(value: str) -> frozenset:
    family = []
    for body in re.findall(r"\{([^}]*)\}", value):
        family.append(frozenset(_list(body)))
    if re.sub(r"\{[^}]*\}", "", value).replace(",", "").strip():
        raise FormatError(f"muller family must be a list of {{...}} sets, got {value!r}")
    return frozenset(family)


def parse_automaton(text: str) -> TermAutomaton | MullerAutomaton:
    lines = _lines(text)
    head = _header(lines, ("states", "sigma", "gamma", "advice", "initial"))
    muller = [v for _, k, v in lines if k == "muller"]
    if "accepting" in head and muller:
        raise FormatError("an automaton has either 'accepting:' or 'muller:', not both")
    if "accepting" not in head and not muller:
        raise FormatError("missing 'accepting:' (terminating) or 'muller:' (nonterminating) line")
    states = _list(head["states"])
    sigma = Alphabet(_list(head["sigma"]))
    gamma = Alphabet(_list(head["gamma"]))
    advice = parse_stream(head["advice"], gamma)
    delta = {}
    for lineno, key, value in lines:
        if key != "delta":
            continue
        lhs, rhs = _arrow(lineno, value)
        if len(lhs) != 3:
            raise FormatError(f"line {lineno}: delta needs 'q,g,a -> q2', got {value!r}")
        if lhs in delta:
            raise FormatError(f"line {lineno}: duplicate transition for {','.join(lhs)}")
        delta[lhs] = rhs
    if muller:
        family = frozenset().union(*(_parse_family(v) for v in muller))
        return _build(MullerAutomaton, states, sigma, advice, delta, head["initial"], family)
    return _build(TermAutomaton, states, sigma, advice, delta, head["initial"],
                  frozenset(_list(head["accepting"])))


def format_automaton(m: TermAutomaton | MullerAutomaton) -> str:
    _check_names(m.states, "state")
    _check_names(m.input_alphabet, "input symbol")
    _check_names(m.advice_alphabet, "advice symbol")
    lines = [
        f"states: {','.join(m.states)}",
        f"sigma: {','.join(m.input_alphabet)}",
        f"gamma: {','.join(m.advice_alphabet)}",
        f"advice: {m.advice.descriptor()}",
        f"initial: {m.initial}",
    ]
    inputs = tuple(m.input_alphabet)
    if isinstance(m, MullerAutomaton):
        inputs += (BLANK,)
        order = {q: i for i, q in enumerate(m.states)}
        sets = sorted((sorted(s, key=order.get) for s in m.accepting),
                      key=lambda s: (len(s), [order[q] for q in s]))
        lines.append("muller: " + ",".join("{" + ",".join(s) + "}" for s in sets))
    else:
        lines.append(f"accepting: {','.join(q for q in m.states if q in m.accepting)}")
    for q in m.states:
        for g in m.advice_alphabet:
            for a in inputs:
                lines.append(f"delta: {q},{g},{a} -> {m.delta[q, g, a]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Synthesized automata


def _format_table(sigma: Alphabet, k: int, table: tuple) -> str:
    return " ".join(f"{q},{a}->{table[(q - 1) * len(sigma) + i]}"
                    for q in range(1, 2 * k + 1) for i, a in enumerate(sigma))


def format_synthesized(s: SynthesizedAutomaton) -> str:
    lines = [
        f"k: {s.k}",
        f"sigma: {','.join(s.input_alphabet)}",
        f"initial: {s.initial}",
        f"horizon: {s.horizon}",
    ]
    for n, table in enumerate(s.tables, 1):
        lines.append(f"table: {n}: {_format_table(s.input_alphabet, s.k, table)}")
    lines.append(f"table: default: {_format_table(s.input_alphabet, s.k, s.default)}")
    return "\n".join(lines) + "\n"


def parse_synthesized(text: str) -> SynthesizedAutomaton:
    lines = _lines(text)
    head = _header(lines, ("k", "sigma", "initial", "horizon"))
    try:
        k, initial, horizon = int(head["k"]), int(head["initial"]), int(head["horizon"])
    except ValueError:
        raise FormatError("k, initial and horizon must be integers") from None
    sigma = Alphabet(_list(head["sigma"]))
    tables: dict = {}
    for lineno, key, value in lines:
        if key != "table":
            continue
        label, _, body = value.partition(":")
        entries = {}
        for triple in body.split():
            lhs, rhs = _arrow(lineno, triple)
            if len(lhs) != 2:
                raise FormatError(f"line {lineno}: table entries look like 'q,a->q2', got {triple!r}")
            try:
                entries[int(lhs[0]), lhs[1]] = int(rhs)
            except ValueError:
                raise FormatError(f"line {lineno}: states are integers, got {triple!r}") from None
        expected = {(q, a) for q in range(1, 2 * k + 1) for a in sigma}
        if set(entries) != expected or not all(1 <= t <= 2 * k for t in entries.values()):
            raise FormatError(f"line {lineno}: table must be total on states 1..{2 * k} and sigma")
        tables[label.strip()] = tuple(entries[q, a] for q in range(1, 2 * k + 1) for a in sigma)
    if "default" not in tables:
        raise FormatError("missing 'table: default:' line")
    try:
        ordered = tuple(tables[str(n)] for n in range(1, horizon + 1))
    except KeyError as exc:
        raise FormatError(f"missing table for position {exc.args[0]}") from None
    if not 1 <= initial <= 2 * k:
        raise FormatError(f"initial state {initial} outside 1..{2 * k}")
    return SynthesizedAutomaton(k, sigma, initial, ordered, tables["default"])


# ---------------------------------------------------------------------------
# Transducers


def format_transducer(t: Transducer) -> str:
    _check_names(t.states, "state")
    lines = [
        f"states: {','.join(t.states)}",
        f"gamma: {','.join(t.input_alphabet)}",
        f"sigma: {','.join(t.output_alphabet)}",
        f"initial: {t.initial}",
    ]
    for q in t.states:
        for b in t.input_alphabet:
            lines.append(f"delta: {q},{b} -> {t.next[q, b]},{t.output[q, b]}")
    return "\n".join(lines) + "\n"


def parse_transducer(text: str) -> Transducer:
    """Transitions are ``delta: q,b -> next,output``."""
    lines = _lines(text)
    head = _header(lines, ("states", "gamma", "sigma", "initial"))
    nxt, out = {}, {}
    for lineno, key, value in lines:
        if key != "delta":
            continue
        lhs, rhs = _arrow(lineno, value)
        target = _list(rhs)
        if len(lhs) != 2 or len(target) != 2:
            raise FormatError(f"line {lineno}: expected 'q,b -> next,output', got {value!r}")
        nxt[lhs], out[lhs] = target
    return _build(Transducer, _list(head["states"]), Alphabet(_list(head["gamma"])),
                  Alphabet(_list(head["sigma"])), out, nxt, head["initial"])


# ---------------------------------------------------------------------------
# Tree automata


def format_tree_automaton(m: TreeAutomaton) -> str:
    _check_names(m.states, "state")
    lines = [
        f"states: {','.join(m.states)}",
        f"sigma: {','.join(m.input_alphabet)}",
        f"gamma: {','.join(m.advice_alphabet)}",
        f"advice: {m.advice.descriptor()}",
        f"initial: {m.initial}",
        f"accepting: {','.join(q for q in m.states if q in m.accepting)}",
    ]
    for q in m.states:
        for q2 in m.states:
            for g in m.advice_alphabet:
                for a in m.input_alphabet:
                    lines.append(f"delta: {q},{q2},{g},{a} -> {m.delta[q, q2, g, a]}")
    return "\n".join(lines) + "\n"


def parse_tree_automaton(text: str) -> TreeAutomaton:
    lines = _lines(text)
    head = _header(lines, ("states", "sigma", "gamma", "advice", "initial", "accepting"))
    gamma = Alphabet(_list(head["gamma"]))
    advice = parse_tree_advice(head["advice"], gamma)
    delta = {}
    for lineno, key, value in lines:
        if key != "delta":
            continue
        lhs, rhs = _arrow(lineno, value)
        if len(lhs) != 4:
            raise FormatError(f"line {lineno}: delta needs 'q,q2,g,a -> q3', got {value!r}")
        delta[lhs] = rhs
    return _build(TreeAutomaton, _list(head["states"]), Alphabet(_list(head["sigma"])), advice, delta,
                  head["initial"], frozenset(_list(head["accepting"])))


# ---------------------------------------------------------------------------
# Files


def load_machine(path: str | Path):
    """Read a machine, choosing the parser from the file suffix."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from None
    parsers = {".aut": parse_automaton, ".saut": parse_synthesized,
               ".td": parse_transducer, ".taut": parse_tree_automaton}
    try:
        parser = parsers[path.suffix]
    except KeyError:
        raise FormatError(f"unknown machine file suffix {path.suffix!r}; expected one of {sorted(parsers)}") from None
    try:
        return parser(text)
    except FormatError as exc:
        raise FormatError(f"{path}: {exc}") from None
    except AdviceError as exc:
        raise FormatError(f"{path}: {exc}") from None


def dump_machine(m) -> str:
    if isinstance(m, (TermAutomaton, MullerAutomaton)):
        return format_automaton(m)
    if isinstance(m, SynthesizedAutomaton):
        return format_synthesized(m)
    if isinstance(m, Transducer):
        return format_transducer(m)
    if isinstance(m, TreeAutomaton):
        return format_tree_automaton(m)
    raise ContractError(f"no text format for {type(m).__name__}")

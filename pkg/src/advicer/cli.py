"""``advicer`` command line.

Exit status is 0 on success, 1 when the library reports a domain error and 2
for usage errors.  ``--format tsv`` switches every report to one
tab-separated record per line.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from advicer import models, nerode, rationals, separation, treeauto
from advicer.advice import Alphabet, catalog_stream
from advicer.automata import MullerAutomaton, TermAutomaton, run_bounded
from advicer.errors import AdviceError, FormatError
from advicer.formats import dump_machine, load_machine
from advicer.nerode import SynthesizedAutomaton
from advicer.randgen import DEFAULT_SEED
from advicer.separation import Transducer
from advicer.treeauto import TreeAutomaton


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


class Report:
    """Collects output lines; text mode prints ``text`` and tsv mode prints ``fields``."""

    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []

    def emit(self, text: str, *fields):
        if self.fmt == "tsv":
            self.lines.append("\t".join(str(f) for f in (fields or (text,))))
        else:
            self.lines.append(text)


def parse_word(text: str, alphabet: Alphabet) -> tuple:
    """Comma-separated symbols, or one character per symbol for single-character alphabets."""
    if text == "":
        return ()
    if "," in text or any(len(s) > 1 for s in alphabet):
        return alphabet.word(tuple(s.strip() for s in text.split(",")))
    return alphabet.word(tuple(text))


def show_word(w: Sequence[str]) -> str:
    if not w:
        return "ε"
    return "".join(w) if all(len(s) == 1 for s in w) else ",".join(w)


def _lang(name: str):
    """A catalog language name or an automaton file."""
    if name.endswith((".aut", ".saut")):
        m = load_machine(name)
        if isinstance(m, SynthesizedAutomaton):
            return nerode.LanguageOracle(m.input_alphabet, m.accepts, name)
        if isinstance(m, MullerAutomaton):
            return nerode.LanguageOracle(m.input_alphabet, m.accepts, name)
        return nerode.oracle_from_automaton(m, name)
    return nerode.catalog_oracle(name)


def _tree_lang(name: str):
    if name.endswith(".taut"):
        return treeauto.tree_oracle_from_automaton(_load(name, TreeAutomaton), name)
    return treeauto.catalog_tree_oracle(name)


def _load(path: str, kind):
    m = load_machine(path)
    if not isinstance(m, kind):
        names = kind.__name__ if isinstance(kind, type) else " or ".join(k.__name__ for k in kind)
        raise FormatError(f"{path} holds a {type(m).__name__}, expected {names}")
    return m


def _write(text: str, out: str | None, rep: Report, what: str):
    if out:
        Path(out).write_text(text)
        rep.emit(f"wrote {what} to {out}", "wrote", what, out)
    else:
        rep.lines.extend(text.rstrip("\n").split("\n"))


# ---------------------------------------------------------------------------
# Commands


def cmd_run(args, rep: Report):
    m = _load(args.machine, (TermAutomaton, MullerAutomaton, SynthesizedAutomaton))
    w = parse_word(args.input, m.input_alphabet)
    if isinstance(m, SynthesizedAutomaton):
        states = m.run(w)
        verdict = "accept" if states[-1] <= m.k else "reject"
        if args.trace:
            rep.emit("trace: " + " ".join(map(str, states)), "trace", *states)
        rep.emit(verdict, verdict)
        return
    if args.bound is not None:
        trace = run_bounded(m, w, args.bound)
        if args.trace:
            rep.emit("trace: " + " ".join(trace.states), "trace", *trace.states)
        if isinstance(m, TermAutomaton):
            verdict = "accept" if trace.accepted else "reject"
            rep.emit(verdict, verdict)
        else:
            rep.emit(f"inconclusive after {args.bound} steps (state {trace.final})",
                     "inconclusive", args.bound, trace.final)
        return
    trace = m.run(w)
    if args.trace:
        rep.emit("trace: " + " ".join(trace.states), "trace", *trace.states)
    if trace.infinity_set is not None:
        inf = ",".join(q for q in m.states if q in trace.infinity_set)
        rep.emit(f"infinity set: {{{inf}}}", "infinity", inf)
    verdict = "accept" if trace.accepted else "reject"
    rep.emit(verdict, verdict)


def cmd_convert(args, rep: Report):
    if args.mode == "nt2t":
        out = models.nt_to_t(_load(args.machine, MullerAutomaton))
    elif args.mode == "t2nt":
        out = models.t_to_nt(_load(args.machine, TermAutomaton))
    else:
        out = models.pref_recognizer(_load(args.machine, TermAutomaton)).with_trivial_advice()
    _write(dump_machine(out), args.out, rep, "machine")


def cmd_width(args, rep: Report):
    table = nerode.classes_at(_lang(args.lang), args.n, args.depth)
    kind = "exact" if table.exact else "lower bound"
    rep.emit(f"{table.width} ({kind}; depth={args.depth})", table.width, kind, args.depth)


def cmd_classes(args, rep: Report):
    table = nerode.classes_at(_lang(args.lang), args.n, args.depth)
    kind = "exact" if table.exact else "lower bound"
    rep.emit(f"length {table.length}: {table.width} classes ({kind}; depth={args.depth})",
             "length", table.length, table.width, kind, args.depth)
    for i, c in enumerate(table.classes):
        flag = "accepting" if c.accepting else "rejecting"
        members = " ".join(show_word(w) for w in c.members[:args.show])
        more = f" ... (+{len(c.members) - args.show})" if len(c.members) > args.show else ""
        rep.emit(f"  [{i}] rep={show_word(c.representative)} {flag} size={len(c.members)}: {members}{more}",
                 i, show_word(c.representative), flag, len(c.members))


def cmd_synth(args, rep: Report):
    oracle = _lang(args.lang)
    depth = args.depth if args.depth is not None else args.horizon + 2
    s = nerode.synthesize(oracle, args.k, args.horizon, depth)
    total = sum(len(oracle.alphabet) ** n for n in range(args.horizon + 1))
    if total <= nerode.ENUMERATION_GUARD:
        bad = sum(s.accepts(w) != oracle(w) for w in oracle.alphabet.words_upto(args.horizon))
        rep.emit(f"{2 * args.k} states; agrees with {oracle.name} on {total - bad}/{total} words "
                 f"of length <= {args.horizon}", "synth", 2 * args.k, total - bad, total, args.horizon)
    else:
        rep.emit(f"{2 * args.k} states; horizon {args.horizon}", "synth", 2 * args.k, args.horizon)
    if args.out:
        _write(dump_machine(s), args.out, rep, "synthesized machine")


def cmd_separate(args, rep: Report):
    stream = separation.diagonal_advice(args.k, args.budget)
    prefix = stream.prefix(args.emit)
    rep.emit(f"advice: {show_word(prefix)}", "advice", "".join(prefix))
    rep.emit(f"certified length: {stream.certified_length}", "certified", stream.certified_length)
    rng = np.random.default_rng(args.seed)
    for i, (t, cert) in enumerate(stream.certificates):
        if len(t.input_alphabet) == 1:
            inputs = np.zeros((1, args.steps), dtype=np.int64)
        else:
            inputs = rng.integers(0, len(t.input_alphabet), size=(args.samples, args.steps))
        outputs = separation.run_transducer_batch(t, inputs)
        word = [t.output_alphabet.index(a) for a in cert.word]
        absent = not separation.contains_word_batch(outputs, word).any()
        sizes = "->".join(str(len(s)) for s in cert.state_sets)
        rep.emit(f"  T{i} states={len(t.states)} u={show_word(cert.word)} chain={sizes} "
                 f"absent={'yes' if absent else 'NO'}",
                 i, len(t.states), "".join(cert.word), sizes, int(absent))


def cmd_evade(args, rep: Report):
    t = _load(args.machine, Transducer)
    cert = separation.evade_word(t)
    rep.emit(f"u = {show_word(cert.word)}", "word", "".join(cert.word))
    for j, a in enumerate(cert.word):
        before = ",".join(sorted(cert.state_sets[j]))
        after = ",".join(sorted(cert.state_sets[j + 1]))
        rep.emit(f"  step {j + 1}: {{{before}}} emit {a} (count {cert.counts[j]}) -> {{{after}}}",
                 j + 1, before, a, cert.counts[j], after)


def cmd_rat(args, rep: Report):
    if args.action == "encode":
        text = rationals.encode(rationals.parse_rational(args.value))
        rep.emit(text, text)
    elif args.action == "decode":
        q = rationals.decode(args.value)
        rep.emit(str(q), q)
    elif args.action == "add":
        text = rationals.add_encoded(args.x, args.y)
        rep.emit(text, text)
    elif args.action == "check":
        ok = rationals.domain_check(args.value)
        rep.emit("valid" if ok else "invalid", int(ok))
    else:
        text = "".join(catalog_stream("champernowne").prefix(args.n))
        rep.emit(text, text)


def cmd_tree(args, rep: Report):
    if args.action == "run":
        m = _load(args.machine, TreeAutomaton)
        t = treeauto.parse_tree(args.tree)
        root, r = treeauto.run_tree(m, t)
        if args.trace:
            for pos in sorted(r, key=lambda p: (len(p), p)):
                rep.emit(f"  {pos or 'λ'}: {r[pos]}", pos or "λ", r[pos])
        verdict = "accept" if root in m.accepting else "reject"
        rep.emit(f"root state {root}: {verdict}", verdict, root)
    elif args.action == "classes":
        oracle = _tree_lang(args.lang)
        table = treeauto.tree_classes_at(oracle, args.position, args.size, args.context)
        rep.emit(f"position {args.position or 'λ'}: {table.width} classes (lower bound; trees<={args.size}, "
                 f"contexts<={args.context})", "position", args.position or "λ", table.width)
        for i, c in enumerate(table.classes):
            rep.emit(f"  [{i}] rep={treeauto.format_tree(c.representative)} size={len(c.members)}",
                     i, treeauto.format_tree(c.representative), len(c.members))
    else:
        oracle = _tree_lang(args.lang)
        context = args.context if args.context is not None else args.depth + 1
        syn = treeauto.synthesize_tree(oracle, args.k, args.depth, args.size, context)
        m = syn.automaton
        rep.emit(f"{args.k} states, {len(m.advice_alphabet)} advice tables, depth {args.depth}",
                 "synth", args.k, len(m.advice_alphabet), args.depth)
        if args.verify:
            bad = total = 0
            for node in treeauto.trees_of_depth(oracle.alphabet, args.depth):
                t = treeauto.LabeledTree(node)
                total += 1
                bad += m.accepts(t) != oracle(t)
            rep.emit(f"agrees on {total - bad}/{total} trees of depth <= {args.depth}",
                     "verified", total - bad, total)
        if args.out:
            _write(dump_machine(m), args.out, rep, "tree automaton")


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="advicer", description="Automata with advice.")
    p.add_argument("--format", choices=("text", "tsv"), default="text",
                   help="text (default) or tab-separated records")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    r = sub.add_parser("run", help="run a string automaton on a word")
    r.add_argument("--machine", required=True)
    r.add_argument("--input", default="")
    r.add_argument("--bound", type=int, help="simulate this many steps only")
    r.add_argument("--trace", action="store_true")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("convert", help="convert between machine models")
    c.add_argument("--mode", choices=("nt2t", "t2nt", "pref"), required=True)
    c.add_argument("--machine", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_convert)

    for name, func in (("width", cmd_width), ("classes", cmd_classes)):
        w = sub.add_parser(name, help=f"{name} of the length-n congruence")
        w.add_argument("--lang", required=True, help="catalog name or .aut file")
        w.add_argument("--n", type=int, required=True)
        w.add_argument("--depth", type=int, required=True)
        if name == "classes":
            w.add_argument("--show", type=int, default=8, help="members listed per class")
        w.set_defaults(func=func)

    s = sub.add_parser("synth", help="synthesize an automaton from a bounded-width language")
    s.add_argument("--lang", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--horizon", type=int, required=True)
    s.add_argument("--depth", type=int)
    s.add_argument("--out")
    s.set_defaults(func=cmd_synth)

    d = sub.add_parser("separate", help="diagonal advice with evading-word certificates")
    d.add_argument("--k", type=int, required=True)
    d.add_argument("--budget", type=int, required=True)
    d.add_argument("--emit", type=int, default=32)
    d.add_argument("--steps", type=int, default=200)
    d.add_argument("--samples", type=int, default=500)
    d.add_argument("--seed", type=int, default=DEFAULT_SEED)
    d.set_defaults(func=cmd_separate)

    e = sub.add_parser("evade", help="evading word of a transducer")
    e.add_argument("--machine", required=True)
    e.set_defaults(func=cmd_evade)

    q = sub.add_parser("rat", help="factorial-base rationals")
    qs = q.add_subparsers(dest="action", parser_class=_Parser)
    qs.required = True
    for action in ("encode", "decode", "check"):
        qs.add_parser(action).add_argument("value")
    qa = qs.add_parser("add")
    qa.add_argument("x")
    qa.add_argument("y")
    qs.add_parser("advice").add_argument("--n", type=int, default=32)
    q.set_defaults(func=cmd_rat)

    t = sub.add_parser("tree", help="tree automata")
    ts = t.add_subparsers(dest="action", parser_class=_Parser)
    ts.required = True
    tr = ts.add_parser("run")
    tr.add_argument("--machine", required=True)
    tr.add_argument("--tree", required=True)
    tr.add_argument("--trace", action="store_true")
    tc = ts.add_parser("classes")
    tc.add_argument("--lang", required=True)
    tc.add_argument("--position", default="")
    tc.add_argument("--size", type=int, default=3)
    tc.add_argument("--context", type=int, default=4)
    tsy = ts.add_parser("synth")
    tsy.add_argument("--lang", required=True)
    tsy.add_argument("--k", type=int, required=True)
    tsy.add_argument("--depth", type=int, default=3)
    tsy.add_argument("--size", type=int, default=3)
    tsy.add_argument("--context", type=int)
    tsy.add_argument("--verify", action="store_true")
    tsy.add_argument("--out")
    t.set_defaults(func=cmd_tree)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    rep = Report(args.format)
    try:
        args.func(args, rep)
    except AdviceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for line in rep.lines:
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())

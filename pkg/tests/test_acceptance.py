"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

The summary lines are also collected by conftest and repeated at the end of
the pytest run.
"""

import time
from fractions import Fraction

import numpy as np

from advicer.advice import Alphabet, catalog_stream, periodic
from advicer.models import next_symbol_recognizer, nt_to_t, pref_recognizer
from advicer.nerode import catalog_oracle, exact_width, synthesize, width
from advicer.randgen import random_muller_automaton, random_term_automaton, random_tree_automaton, rng_for
from advicer.rationals import add_encoded, advice_segments, decode, encode
from advicer.separation import (contains_word_batch, enumerate_up_to, evade_word, feasible_after,
                                run_transducer_batch)
from advicer.treeauto import (LabeledTree, catalog_tree_oracle, synthesize_tree, tree_classes_at,
                              tree_oracle_from_automaton, trees_of_depth)
from conftest import ACCEPTANCE

BIN = Alphabet(("0", "1"))


def record(n, ok, elapsed, limit, detail):
    ok = bool(ok) and (limit is None or elapsed < limit)
    budget = f" (limit {limit:g}s)" if limit is not None else ""
    line = f"{detail}; {elapsed:.1f}s{budget}"
    ACCEPTANCE[n] = (ok, line)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {line}")
    return ok


def test_criterion_1_width_upper_bound():
    start = time.perf_counter()
    rng = rng_for(1)
    violations = []
    checked = 0
    for i in range(200):
        m = random_term_automaton(rng, max_states=5, max_advice=6)
        for n in range(11):
            checked += 1
            w = exact_width(m, n)
            if w > len(m.states):
                violations.append((i, n, w, len(m.states)))
    elapsed = time.perf_counter() - start
    assert record(1, not violations, elapsed, 60,
                  f"200 machines x 11 lengths = {checked} exact widths, {len(violations)} above |Q|")


def test_criterion_2_synthesis_agreement():
    start = time.perf_counter()
    results = []
    for name, k in (("parity", 2), ("contains-11", 3), ("mod-3", 3)):
        o = catalog_oracle(name)
        widths = [width(o, n, 6) for n in range(11)]
        s = synthesize(o, k, 10, 6)
        words = list(BIN.words_upto(10))
        bad = sum(s.accepts(w) != o(w) for w in words)
        results.append((name, max(widths) <= k, len(words), bad))
    elapsed = time.perf_counter() - start
    ok = all(wok and n == 2047 and bad == 0 for _, wok, n, bad in results)
    detail = ", ".join(f"{name} {n - bad}/{n}" for name, _, n, bad in results)
    assert record(2, ok, elapsed, 60, detail)


def test_criterion_3_0n1n_width_growth():
    start = time.perf_counter()
    o = catalog_oracle("0n1n")
    lengths = (4, 6, 8, 10)
    widths = [width(o, n, n + 2) for n in lengths]
    elapsed = time.perf_counter() - start
    ok = (widths == [4, 5, 6, 7]
          and all(w >= n // 2 + 1 for w, n in zip(widths, lengths))
          and all(a < b for a, b in zip(widths, widths[1:])))
    assert record(3, ok, elapsed, None, f"widths at n=4,6,8,10: {widths}")


def test_criterion_4_evading_words():
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    steps = 200
    summary = []
    ok = True
    for k in (1, 2):
        machines = list(enumerate_up_to(k, 2))
        failures = 0
        for t in machines:
            cert = evade_word(t)
            sizes = [len(s) for s in cert.state_sets]
            chain = all(b <= (k * a) // (k + 1) for a, b in zip(sizes, sizes[1:]))
            empty = sizes[-1] == 0 and feasible_after(t, cert.word) == frozenset()
            if k == 1:
                inputs = np.zeros((1, steps), dtype=np.int64)  # the only input stream
            else:
                inputs = rng.integers(0, k, size=(500, steps))
            outputs = run_transducer_batch(t, inputs)
            word = [t.output_alphabet.index(a) for a in cert.word]
            absent = not contains_word_batch(outputs, word).any()
            if not (chain and empty and absent):
                failures += 1
        ok &= failures == 0
        summary.append(f"k={k}: {len(machines) - failures}/{len(machines)} machines certified")
    elapsed = time.perf_counter() - start
    assert record(4, ok, elapsed, 120, ", ".join(summary))


def test_criterion_5_model_conversion():
    start = time.perf_counter()
    rng = rng_for(5)
    words = list(BIN.words_upto(8))
    disagreements = 0
    for _ in range(100):
        m = random_muller_automaton(rng, max_states=4)
        t = nt_to_t(m)
        disagreements += sum(m.accepts(w) != t.accepts(w) for w in words)
    elapsed = time.perf_counter() - start
    assert record(5, disagreements == 0, elapsed, 120,
                  f"100 machines x {len(words)} words, {disagreements} disagreements")


def test_criterion_6_prefix_recogniser():
    start = time.perf_counter()
    a = periodic("", "10")
    dfa = pref_recognizer(next_symbol_recognizer(a))
    words = list(BIN.words_upto(10))
    bad = sum(dfa.accepts(w) != (w == a.prefix(len(w))) for w in words)
    elapsed = time.perf_counter() - start
    assert record(6, bad == 0, elapsed, None, f"{len(words) - bad}/{len(words)} words agree with Pref((10)^w)")


def test_criterion_7_rational_addition():
    start = time.perf_counter()
    codes = [encode(Fraction(n, 24)) for n in range(24)]
    bad = sum(decode(add_encoded(x, y)) != (decode(x) + decode(y)) % 1 for x in codes for y in codes)
    trace = add_encoded("01", "01#10")
    blocks_ok = all(seg == format(i, "b") for (i, seg), _ in zip(advice_segments(), range(2, 65)))
    text = "".join(catalog_stream("champernowne").prefix(1000)).split("#")
    blocks_ok &= text[:63] == [format(i, "b") for i in range(2, 65)]
    elapsed = time.perf_counter() - start
    ok = bad == 0 and trace == "00#10" and blocks_ok
    assert record(7, ok, elapsed, 10,
                  f"576 pairs, {bad} wrong; add(01, 01#10) = {trace}; blocks i<=64 {'match' if blocks_ok else 'differ'}")


def test_criterion_8_tree_width():
    start = time.perf_counter()
    rng = rng_for(8)
    positions = ["", "0", "1", "00", "01", "10", "11"]
    over = 0
    for _ in range(50):
        m = random_tree_automaton(rng, max_states=3)
        o = tree_oracle_from_automaton(m)
        over += sum(tree_classes_at(o, v, 4, 4).width > len(m.states) for v in positions)
    even = catalog_tree_oracle("even-a")
    machine = synthesize_tree(even, 2, 3).automaton
    total = bad = 0
    for node in trees_of_depth(even.alphabet, 3):
        t = LabeledTree(node)
        total += 1
        bad += machine.accepts(t) != even(t)
    elapsed = time.perf_counter() - start
    ok = over == 0 and bad == 0
    assert record(8, ok, elapsed, 180,
                  f"50 machines x 7 positions, {over} over |Q|; even-a synthesis {total - bad}/{total} trees")

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from advicer.advice import Alphabet, PeriodicStream, periodic
from advicer.automata import TermAutomaton
from advicer.errors import ContractError, DegenerateMachineError
from advicer.randgen import random_transducer, rng_for
from advicer.separation import (Transducer, contains_word_batch, diagonal_advice, enumerate_transducers,
                                enumerate_up_to, evade_word, feasible_after, find_word, pref_oracle,
                                pref_template, refute_recognisers, repair_prefix_rows, restrict_reachable,
                                run_transducer, run_transducer_batch, to_transducer)

G1, S1 = Alphabet.range(1), Alphabet.range(2)
G2, S2 = Alphabet.range(2), Alphabet.range(3)


def const_machine(symbol):
    return Transducer(("0",), G1, S1, {("0", "0"): symbol}, {("0", "0"): "0"}, "0")


def test_run_constant():
    assert "".join(run_transducer(const_machine("1"), periodic("", "0", G1), 4)) == "1111"


def test_run_alternator():
    t = Transducer(("a", "b"), G1, S1, {("a", "0"): "0", ("b", "0"): "1"},
                   {("a", "0"): "b", ("b", "0"): "a"}, "a")
    assert "".join(run_transducer(t, periodic("", "0", G1), 5)) == "01010"


def test_run_copy():
    copy = Transducer(("0",), G2, S2, {("0", b): b for b in G2}, {("0", b): "0" for b in G2}, "0")
    assert "".join(run_transducer(copy, periodic("", "01", G2), 4)) == "0101"
    with pytest.raises(ContractError):
        run_transducer(copy, periodic("", "a"), 4)


def test_batch_matches_scalar():
    rng = np.random.default_rng(0)
    for t in itertools.islice(enumerate_up_to(2, 2), 0, 400, 37):
        inputs = rng.integers(0, 2, size=(5, 30))
        batch = run_transducer_batch(t, inputs)
        for row, out in zip(inputs, batch):
            scalar = run_transducer(t, [str(b) for b in row], 30)
            assert [int(a) for a in scalar] == out.tolist()


def test_evade_examples():
    c = evade_word(const_machine("1"))
    assert c.word == ("0",) and [len(s) for s in c.state_sets] == [1, 0] and c.counts == (0,)
    assert evade_word(const_machine("0")).word == ("1",)
    t = Transducer(("0", "1"), G2, S2,
                   {("0", "0"): "0", ("0", "1"): "1", ("1", "0"): "1", ("1", "1"): "0"},
                   {("0", "0"): "1", ("0", "1"): "0", ("1", "0"): "1", ("1", "1"): "1"}, "0")
    c = evade_word(t)
    assert c.word == ("2",)
    with pytest.raises(ContractError):
        evade_word(Transducer(("0",), G1, S2, {("0", "0"): "0"}, {("0", "0"): "0"}, "0"))


def chain_arithmetic(t, cert):
    k = len(t.input_alphabet)
    sizes = [len(s) for s in cert.state_sets]
    return all(b <= (k * a) // (k + 1) for a, b in zip(sizes, sizes[1:]))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10 ** 6), st.integers(1, 3))
def test_evade_certificate_invariants(seed, k):
    rng = rng_for(seed)
    t = random_transducer(rng, k, max_states=4)
    cert = evade_word(t)
    assert cert.chain_ok
    assert chain_arithmetic(t, cert)
    sets = cert.state_sets
    for j, a in enumerate(cert.word):
        outs = [t.output[q, b] for q in sets[j] for b in t.input_alphabet]
        assert outs.count(a) == cert.counts[j] == min(outs.count(s) for s in t.output_alphabet)
        assert a == min((s for s in t.output_alphabet if outs.count(s) == cert.counts[j]), key=t.output_alphabet.index)
    assert feasible_after(t, cert.word) == frozenset()
    inputs = np.array([[rng.randrange(k) for _ in range(200)] for _ in range(20)])
    word = [t.output_alphabet.index(a) for a in cert.word]
    assert not contains_word_batch(run_transducer_batch(t, inputs), word).any()


def test_enumeration_order():
    ms = list(enumerate_transducers(1, 1))
    assert [m.output["0", "0"] for m in ms] == ["0", "1"]
    assert len(list(enumerate_transducers(1, 2))) == 2 ** 2 * 2 ** 2
    assert len(list(enumerate_transducers(2, 2))) == 3 ** 4 * 2 ** 4
    two = list(enumerate_transducers(1, 2))
    tables = [tuple(m.output[c] for c in (("0", "0"), ("1", "0"))) + tuple(m.next[c] for c in (("0", "0"), ("1", "0")))
              for m in two]
    assert tables == sorted(tables)


def test_diagonal_examples():
    assert "".join(diagonal_advice(1, 1).prefix(2)) == "10"
    d = diagonal_advice(1, 2)
    text = d.prefix(d.certified_length)
    for t, cert in d.certificates:
        assert find_word(text, cert.word) >= 0
        out = run_transducer(t, periodic("", "0", G1), 200)
        assert find_word(out, cert.word) < 0


def test_diagonal_budget_monotone():
    small, big = diagonal_advice(2, 1), diagonal_advice(2, 2)
    assert small.prefix(small.certified_length) == big.prefix(small.certified_length)
    assert small.prefix(big.certified_length) == big.prefix(big.certified_length)
    with pytest.raises(ContractError):
        diagonal_advice(0, 1)


def test_pref_oracle():
    o = pref_oracle(periodic("", "01"))
    assert all(o(tuple(x)) for x in ("", "0", "01", "010"))
    assert not any(o(tuple(x)) for x in ("1", "00"))
    d = diagonal_advice(1, 1)
    assert pref_oracle(d)(d.prefix(5))
    assert pref_oracle(diagonal_advice(2, 2))(())


def test_pref_template_agrees_to_50():
    rng = rng_for(11)
    for a in (periodic("1", "0"), periodic("", "01"), diagonal_advice(1, 2), diagonal_advice(2, 1)):
        m = pref_template(a)
        o = pref_oracle(a)
        for n in range(51):
            good = a.prefix(n)
            assert m.accepts(good) and o(good)
            if n:
                j = rng.randrange(n)
                other = next(s for s in a.alphabet if s != good[j])
                bad = good[:j] + (other,) + good[j + 1:]
                assert not m.accepts(bad) and not o(bad)
            rand = tuple(rng.choice(a.alphabet.symbols) for _ in range(n))
            assert m.accepts(rand) == o(rand)


def pref_dfa(a_prefix, a_period, extra_accepting_row=False):
    """Recogniser of Pref(A) for k = 1 (advice alphabet {0}), built from A's lasso."""
    symbols = a_prefix + a_period
    p = len(a_prefix)
    states = tuple(f"n{i}" for i in range(len(symbols))) + ("dead",)
    delta = {}
    for i, s in enumerate(symbols):
        nxt = f"n{i + 1}" if i + 1 < len(symbols) else f"n{p}"
        for a in S1:
            delta[f"n{i}", "0", a] = nxt if a == s else "dead"
    for a in S1:
        delta["dead", "0", a] = "dead"
    accepting = set(states) - {"dead"}
    if extra_accepting_row:
        # unreachable accepting state accepting both letters
        states += ("u",)
        for a in S1:
            delta["u", "0", a] = "u"
        accepting.add("u")
    return TermAutomaton(states, S1, periodic("", "0", G1), delta, "n0", frozenset(accepting))


def test_to_transducer_periodic_01():
    m = pref_dfa((), ("0", "1"))
    t = restrict_reachable(to_transducer(m))
    assert len(t.states) == 2
    assert "".join(run_transducer(t, periodic("", "0", G1), 8)) == "01010101"


def test_to_transducer_constant():
    t = restrict_reachable(to_transducer(pref_dfa((), ("0",))))
    assert len(t.states) == 1
    assert "".join(run_transducer(t, periodic("", "0", G1), 5)) == "00000"


@settings(max_examples=60, deadline=None)
@given(st.text("01", max_size=4), st.text("01", min_size=1, max_size=4))
def test_repair_preserves_prefix_output(prefix, period):
    a = PeriodicStream(S1, tuple(prefix), tuple(period))
    m = pref_dfa(tuple(prefix), tuple(period), extra_accepting_row=True)
    # precondition: m recognises exactly Pref(A), checked on all words to length 8
    o = pref_oracle(a)
    assert all(m.accepts(x) == o(x) for x in S1.words_upto(8))
    r = repair_prefix_rows(m)
    for q in r.accepting:
        assert sum(r.delta[q, "0", x] in r.accepting for x in S1) == 1
    t = to_transducer(m)
    assert run_transducer(t, periodic("", "0", G1), 12) == a.prefix(12)


def test_repair_without_accepting_input():
    adv = periodic("", "0", G1)
    delta = {("a", "0", x): "b" for x in S1} | {("b", "0", x): "b" for x in S1}
    m = TermAutomaton(("a", "b"), S1, adv, delta, "a", frozenset({"a"}))
    r = repair_prefix_rows(m)
    assert r.delta["a", "0", "0"] == "a"
    assert "".join(run_transducer(to_transducer(m), adv, 3)) == "000"


def test_degenerate():
    adv = periodic("", "0", G1)
    m = TermAutomaton(("a",), S1, adv, {("a", "0", x): "a" for x in S1}, "a", frozenset())
    with pytest.raises(DegenerateMachineError):
        to_transducer(m)


def test_refutation_k1_budget2():
    refs = list(refute_recognisers(1, 2))
    # one state: one table, two accepting sets; two states: 2^4 tables, four sets
    assert len(refs) == 1 * 2 + 2 ** 4 * 4
    stream = diagonal_advice(1, 2)
    certified = stream.prefix(stream.certified_length)
    for r in refs:
        if r.witness:
            assert find_word(certified, r.witness) == r.offset
        else:
            assert r.machine.initial not in r.machine.accepting


def test_refutation_k2_budget1():
    refs = list(refute_recognisers(2, 1))
    assert len(refs) == 2


def test_contains_word_batch():
    out = np.array([[0, 1, 2, 1], [1, 1, 1, 1]])
    assert contains_word_batch(out, [1, 2]).tolist() == [True, False]
    assert contains_word_batch(out, []).tolist() == [True, True]
    assert contains_word_batch(out, [1] * 5).tolist() == [False, False]


def test_refutation_k2_budget2():
    refs = list(refute_recognisers(2, 2))
    assert len(refs) == 2 + 2 ** 12 * 4
    assert sum(1 for r in refs if r.witness) == 1 + 2 ** 12 * 2

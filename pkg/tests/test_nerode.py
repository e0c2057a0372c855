import pytest
from hypothesis import given, settings, strategies as st

from advicer.advice import Alphabet, PeriodicStream, catalog_stream, periodic
from advicer.automata import TermAutomaton
from advicer.errors import BoundViolationError, ContractError, SizeError, UnsupportedAdviceError
from advicer.nerode import (LanguageOracle, catalog_oracle, class_assignment_stability, classes_at, distinguish,
                            equivalence_rounds, exact_width, oracle_from_automaton, state_equiv_at, synthesize,
                            width)
from advicer.randgen import random_term_automaton, rng_for
from machines import BIN

ZERO_N_ONE_N = catalog_oracle("0n1n")


def w(s):
    return tuple(s)


def brute_force_classes(oracle, n, depth):
    """Independent reference: pairwise comparison of every word against every class."""
    reps = []
    for x in oracle.alphabet.words(n):
        for r in reps:
            if all(oracle(x + z) == oracle(r + z) for z in oracle.alphabet.words_upto(depth)):
                break
        else:
            reps.append(x)
    return len(reps)


def test_distinguish_examples():
    assert distinguish(ZERO_N_ONE_N, "0011", "0001", 4) == ()
    assert distinguish(ZERO_N_ONE_N, "0000", "0001", 4) == w("11")
    assert distinguish(ZERO_N_ONE_N, "0110", "0110", 4) is None
    assert distinguish(ZERO_N_ONE_N, "0110", "1010", 6) is None  # both dead
    with pytest.raises(ContractError):
        distinguish(ZERO_N_ONE_N, "0", "00", 3)


def test_classes_0n1n():
    t = classes_at(ZERO_N_ONE_N, 4, 6)
    assert t.width == 4
    singles = {c.representative for c in t.classes if len(c.members) == 1}
    assert singles == {w("0000"), w("0001"), w("0011")}
    dead = next(c for c in t.classes if len(c.members) > 1)
    assert len(dead.members) == 13
    assert [c.accepting for c in t.classes if c.representative == w("0011")] == [True]
    assert not t.exact


def test_classes_partition_and_flags():
    for name in ("parity", "contains-11", "0n1n"):
        o = catalog_oracle(name)
        t = classes_at(o, 5, 3)
        members = [x for c in t.classes for x in c.members]
        assert sorted(members) == sorted(BIN.words(5))
        for c in t.classes:
            assert c.representative == min(c.members)
            assert all(o(x) == c.accepting for x in c.members)
        assert t.width == brute_force_classes(o, 5, 3)


def test_parity_and_unary():
    assert width(catalog_oracle("parity"), 5, 3) == 2
    unary = LanguageOracle(Alphabet(("1",)), lambda x: len(x) in (2, 3, 5, 7), "primes")
    assert all(width(unary, n, 4) == 1 for n in range(8))


def test_widths_0n1n():
    assert width(ZERO_N_ONE_N, 2, 4) == 3
    assert width(ZERO_N_ONE_N, 10, 12) == 7
    assert brute_force_classes(ZERO_N_ONE_N, 6, 8) == width(ZERO_N_ONE_N, 6, 8) == 5


def test_regular_width_bounded(parity_machine):
    o = oracle_from_automaton(parity_machine)
    for n in range(8):
        assert width(o, n, 4) <= 2


def test_guard():
    big = LanguageOracle(Alphabet(("0", "1", "2", "3")), lambda x: True)
    with pytest.raises(SizeError):
        classes_at(big, 11, 0)


def test_lower_bound_monotone_in_depth():
    for name in ("0n1n", "contains-11", "mod-3"):
        o = catalog_oracle(name)
        widths = [width(o, 5, d) for d in range(8)]
        assert widths == sorted(widths)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["0n1n", "parity", "contains-11", "mod-3"]), st.text("01", min_size=3, max_size=3),
       st.text("01", min_size=3, max_size=3))
def test_distinguish_soundness(name, x, y):
    o = catalog_oracle(name)
    z = distinguish(o, x, y, 5)
    if z is None:
        assert all(o(w(x) + s) == o(w(y) + s) for s in BIN.words_upto(5))
    else:
        assert o(w(x) + z) != o(w(y) + z)
        shorter = [s for s in BIN.words_upto(len(z)) if len(s) < len(z) or s < z]
        assert all(o(w(x) + s) == o(w(y) + s) for s in shorter)


def test_advice_independent_state_equivalence(parity_machine):
    assert sorted(map(sorted, state_equiv_at(parity_machine, 3))) == [["even"], ["odd"]]
    # a redundant copy of "even" merges with it
    adv = parity_machine.advice
    delta = dict(parity_machine.delta)
    for g in adv.alphabet:
        delta["even2", g, "0"] = "even2"
        delta["even2", g, "1"] = "odd"
    m = TermAutomaton(("even", "odd", "even2"), BIN, adv, delta, "even", frozenset({"even", "even2"}))
    blocks = sorted(map(sorted, state_equiv_at(m, 0)))
    assert blocks == [["even", "even2"], ["odd"]]


def test_single_state():
    adv = periodic("0", "01")
    m = TermAutomaton(("s",), BIN, adv, {("s", g, a): "s" for g in BIN for a in BIN}, "s", frozenset())
    assert state_equiv_at(m, 4) == [frozenset({"s"})]


def test_state_equiv_needs_periodic():
    adv = catalog_stream("primes")
    m = TermAutomaton(("s",), BIN, adv, {("s", g, a): "s" for g in BIN for a in BIN}, "s", frozenset())
    with pytest.raises(UnsupportedAdviceError):
        state_equiv_at(m, 1)


def advice_reset_machine():
    """Accepts words whose last letter equals the advice letter read with it."""
    adv = PeriodicStream(BIN, ("1",), ("0", "0", "1"))
    delta = {(q, g, a): ("hit" if a == g else "miss") for q in ("hit", "miss") for g in BIN for a in BIN}
    return TermAutomaton(("hit", "miss"), BIN, adv, delta, "miss", frozenset({"hit"}))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_exact_width_matches_enumeration(seed):
    m = random_term_automaton(rng_for(seed))
    o = oracle_from_automaton(m)
    d = equivalence_rounds(m)
    for n in range(6):
        t = classes_at(o, n, max(d, 0))
        assert t.exact
        assert t.width == exact_width(m, n) <= len(m.states)
        # going deeper never finds more
        assert classes_at(o, n, d + 3).width == t.width


def test_exact_flag_with_advice():
    m = advice_reset_machine()
    o = oracle_from_automaton(m)
    assert classes_at(o, 3, equivalence_rounds(m)).exact
    assert exact_width(m, 3) == classes_at(o, 3, 6).width


def test_successor_map_0n1n():
    t3, t4 = classes_at(ZERO_N_ONE_N, 3, 6), classes_at(ZERO_N_ONE_N, 4, 6)
    h = class_assignment_stability(t3, t4)
    assert h[t3.class_of("000"), "1"] == t4.class_of("0001")
    dead3 = t3.class_of("100")
    assert h[dead3, "0"] == h[dead3, "1"] == t4.class_of("1000")


def test_successor_map_parity():
    o = catalog_oracle("parity")
    t5, t6 = classes_at(o, 5, 3), classes_at(o, 6, 3)
    h = class_assignment_stability(t5, t6)
    even5, odd5 = t5.class_of("00000"), t5.class_of("00001")
    even6, odd6 = t6.class_of("000000"), t6.class_of("000001")
    assert h[even5, "0"] == even6 and h[odd5, "0"] == odd6
    assert h[even5, "1"] == odd6 and h[odd5, "1"] == even6


def test_successor_total_at_depth_n_plus_2():
    for name in ("0n1n", "parity", "contains-11", "mod-3"):
        o = catalog_oracle(name)
        for n in range(6):
            d = n + 2
            h = class_assignment_stability(classes_at(o, n, d), classes_at(o, n + 1, d))
            t = classes_at(o, n, d)
            assert set(h) == {(i, a) for i in range(t.width) for a in BIN}
            t1 = classes_at(o, n + 1, d)
            for (i, a), j in h.items():
                assert t1.class_of(t.classes[i].representative + (a,)) == j


def test_stability_rejects_mismatched_tables():
    with pytest.raises(ContractError):
        class_assignment_stability(classes_at(ZERO_N_ONE_N, 2, 4), classes_at(ZERO_N_ONE_N, 4, 4))


def agrees(s, oracle, horizon):
    return all(s.accepts(x) == oracle(x) for x in oracle.alphabet.words_upto(horizon))


def test_synthesize_contains_11():
    o = catalog_oracle("contains-11")
    s = synthesize(o, 3, 10, 4)
    assert len(s.states) == 6
    assert agrees(s, o, 10)
    assert s.initial == 4  # empty word rejected


def test_synthesize_parity():
    o = catalog_oracle("parity")
    s = synthesize(o, 2, 8, 3)
    assert len(s.states) == 4 and s.initial == 1
    assert agrees(s, o, 8)
    m = s.as_automaton()
    assert all(m.accepts(x) == o(x) for x in BIN.words_upto(8))


def test_synthesized_tables_respect_successors():
    o = catalog_oracle("mod-3")
    s = synthesize(o, 3, 6, 4)
    for n in range(1, 7):
        f = s.advice_at(n)
        assert all(1 <= q <= 6 for q in f)
    assert s.advice_at(50) == s.default
    # the default table is the identity
    assert all(s.step(q, 99, a) == q for q in s.states for a in BIN)


def test_synthesize_0n1n_bound_violation():
    with pytest.raises(BoundViolationError) as info:
        synthesize(ZERO_N_ONE_N, 3, 8, 10)
    err = info.value
    assert err.where == "length 4" and err.width == 4 and err.bound == 3
    assert len(err.witnesses) == 4
    witnesses = [w(x) for x in err.witnesses]
    for i, a in enumerate(witnesses):
        for b in witnesses[i + 1:]:
            assert distinguish(ZERO_N_ONE_N, a, b, 10) is not None


def test_shallow_depth_splits_successors():
    from advicer.errors import DepthInsufficientError
    with pytest.raises(DepthInsufficientError):
        class_assignment_stability(classes_at(ZERO_N_ONE_N, 3, 0), classes_at(ZERO_N_ONE_N, 4, 0))

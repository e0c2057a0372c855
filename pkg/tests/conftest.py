import pytest

from advicer.advice import Alphabet, PeriodicStream
from advicer.automata import TermAutomaton

# criterion number -> (passed, detail), filled in by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")


BIN = Alphabet(("0", "1"))


@pytest.fixture
def parity_machine():
    """Even number of 1s; the advice is a single constant letter."""
    advice = PeriodicStream(Alphabet(("x",)), (), ("x",))
    delta = {("even", "x", "0"): "even", ("even", "x", "1"): "odd",
             ("odd", "x", "0"): "odd", ("odd", "x", "1"): "even"}
    return TermAutomaton(("even", "odd"), BIN, advice, delta, "even", frozenset({"even"}))

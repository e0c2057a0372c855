"""Factorial-base codes for rationals in [0, 1) and addition against an advice tape.

A rational ``q = sum(a_i / i!)`` with ``0 <= a_i < i`` is written as the
blocks ``f(a_2)#f(a_3)#...#f(a_n)``, where block i is ``a_i`` in binary,
left-padded to the length of ``binary(i)``.  The advice tape
``10#11#100#101#...`` lists ``binary(i)`` aligned with block i, so an
automaton reading a code in lockstep with the tape always sees the radix
of the digit under its head.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterator

from advicer.advice import Alphabet, GeneratedStream, register_generator
from advicer.errors import ContractError, FormatError

TAPE_ALPHABET = Alphabet(("0", "1", "#"))


def _champernowne_symbol(n: int) -> str:
    # binary(i) for i in [2^(L-1), 2^L) has L bits, plus one '#': L+1 symbols each
    offset = n - 1
    bits = 2
    first = 2
    while True:
        count = (1 << bits) - first
        span = count * (bits + 1)
        if offset < span:
            i, j = divmod(offset, bits + 1)
            return "#" if j == bits else format(first + i, "b")[j]
        offset -= span
        first = 1 << bits
        bits += 1


@register_generator("champernowne")
def champernowne_advice() -> GeneratedStream:
    """The tape ``binary(2) # binary(3) # binary(4) # ...``."""
    return GeneratedStream(TAPE_ALPHABET, "champernowne", _champernowne_symbol)


def advice_segments(tape: GeneratedStream | None = None) -> Iterator[tuple[int, str]]:
    """``(i, segment)`` pairs read off the tape, one per ``#``-terminated block, from i = 2."""
    tape = tape or champernowne_advice()
    n, i, block = 1, 2, []
    while True:
        s = tape.at(n)
        n += 1
        if s == "#":
            yield i, "".join(block)
            i, block = i + 1, []
        else:
            block.append(s)


def digits_of(q: Fraction) -> tuple[int, ...]:
    """Minimal digits ``(a_2, ..., a_n)`` with ``q = sum a_i / i!``."""
    q = Fraction(q)
    if not 0 <= q < 1:
        raise ContractError(f"{q} is not in [0, 1)")
    digits = []
    i = 2
    while q:
        q *= i
        a = q.numerator // q.denominator
        digits.append(a)
        q -= a
        i += 1
    return tuple(digits)


def digits_to_text(digits) -> str:
    blocks = []
    for i, segment in advice_segments():
        if len(blocks) == len(digits):
            break
        a = digits[i - 2]
        if not 0 <= a < i:
            raise ContractError(f"digit a_{i} = {a} outside [0, {i})")
        blocks.append(format(a, "b").zfill(len(segment)))
    return "#".join(blocks)


def encode(q: Fraction | str) -> str:
    """The code of ``q``; strings like ``"1/3"`` are accepted."""
    return digits_to_text(digits_of(Fraction(q)))


def _blocks(text: str) -> list[str]:
    return text.split("#") if text else []


def domain_check(text: str) -> bool:
    """True iff ``text`` is the code of some rational.

    Blocks are checked against the tape segment they line up with: same
    length, bitwise value below the segment's value, last block nonzero.
    """
    if any(c not in "01#" for c in text):
        return False
    blocks = _blocks(text)
    if not blocks:
        return True
    segments = advice_segments()
    for block in blocks:
        _, segment = next(segments)
        if len(block) != len(segment) or not _below(block, segment):
            return False
    return "1" in blocks[-1]


def _below(block: str, segment: str) -> bool:
    """Equal-length binary strings compared most significant bit first."""
    for b, s in zip(block, segment):
        if b != s:
            return b < s
    return False


def decode(text: str) -> Fraction:
    if not domain_check(text):
        raise FormatError(f"{text!r} is not a well-formed rational code")
    q = Fraction(0)
    fact = 1
    for i, block in enumerate(_blocks(text), 2):
        fact *= i
        q += Fraction(int(block, 2), fact)
    return q


def add_digit(a: str, b: str, carry: int, segment: str) -> tuple[str, int]:
    """One column of the addition: digits ``a``, ``b`` in radix ``segment`` (binary i).

    Uses nothing but the two blocks, the carry in, and the tape segment.
    """
    radix = int(segment, 2)
    total = int(a, 2) + int(b, 2) + carry
    if total >= radix:
        return format(total - radix, "b").zfill(len(segment)), 1
    return format(total, "b").zfill(len(segment)), 0


def add_encoded(x: str, y: str) -> str:
    """Code of ``(decode(x) + decode(y)) mod 1``, computed right to left with carries."""
    for t in (x, y):
        if not domain_check(t):
            raise FormatError(f"{t!r} is not a well-formed rational code")
    bx, by = _blocks(x), _blocks(y)
    n = max(len(bx), len(by))
    segments = []
    for _, segment in advice_segments():
        if len(segments) == n:
            break
        segments.append(segment)
    # shorter operand is padded with zero digits
    bx += ["0" * len(s) for s in segments[len(bx):]]
    by += ["0" * len(s) for s in segments[len(by):]]
    out = [""] * n
    carry = 0
    for j in reversed(range(n)):
        out[j], carry = add_digit(bx[j], by[j], carry, segments[j])
    # carry out of the a_2 column is an integer part, dropped mod 1
    while out and "1" not in out[-1]:
        out.pop()
    return "#".join(out)


def parse_rational(text: str) -> Fraction:
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not a rational: {text!r}") from None
    return q

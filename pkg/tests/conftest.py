from __future__ import annotations

from fractions import Fraction

import pytest

from atlp import kernel


C85 = Fraction(8, 5)
A0_16 = Fraction(41, 20)

# the known seven-line derivation at c = 8/5: (rule, x, line after the step)
SEVEN_LINE_STEPS = [
    ("slowdown", None, ((), Fraction(82, 25))),
    ("speedup", Fraction(32, 25), ((("E", "32/25", "32/25"), ("A", "1", "1")), Fraction(2))),
    (
        "speedup",
        Fraction(1),
        ((("E", "32/25", "32/25"), ("A", "1", "1"), ("E", "1", "1")), Fraction(1)),
    ),
    ("slowdown", None, ((("E", "32/25", "32/25"), ("A", "1", "1")), Fraction(8, 5))),
    ("slowdown", None, ((("E", "32/25", "32/25"),), Fraction(64, 25))),
    (
        "speedup",
        Fraction(32, 25),
        ((("E", "32/25", "32/25"), ("A", "1", "32/25")), Fraction(32, 25)),
    ),
    ("slowdown", None, ((("E", "32/25", "32/25"),), Fraction(256, 125))),
]


def line_from_tuple(data) -> kernel.ClassLine:
    blocks, dts = data
    return kernel.ClassLine(
        tuple(kernel.QuantifierBlock(q, Fraction(a), Fraction(b)) for q, a, b in blocks),
        dts,
    )


@pytest.fixture
def seven_line_chain() -> list[kernel.ClassLine]:
    return [line_from_tuple(data) for _, _, data in SEVEN_LINE_STEPS]

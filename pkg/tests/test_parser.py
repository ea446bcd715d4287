from __future__ import annotations

from fractions import Fraction

import pytest

from rurpi.algebra.polyarith import IntPoly
from rurpi.errors import ParseError
from rurpi.parser import (
    clear_denominators,
    format_polynomial,
    format_system,
    parse_system,
)
from rurpi.systems import katsura


def test_parse_toy(toy_system) -> None:
    assert toy_system.variables == ("x", "y")
    assert toy_system.source == "toy"
    assert toy_system.generators == (
        IntPoly.from_dict({(1, 0): 1, (0, 1): 1, (0, 0): -3}, 2),
        IntPoly.from_dict({(1, 1): 1, (0, 0): -2}, 2),
    )


def test_comments_and_blank_lines() -> None:
    text = "# header comment\n\nvars: x   # one variable\n\nx^2 - 2  # sqrt two\n"
    system = parse_system(text)
    assert system.variables == ("x",)
    assert system.generators == (IntPoly.from_dict({(2,): 1, (0,): -2}, 1),)


def test_rational_coefficients_are_cleared() -> None:
    (eq,) = parse_system("vars: x\nx/2 - 1/3\n").generators
    assert eq == IntPoly.from_dict({(1,): 3, (0,): -2}, 1)


def test_clear_denominators() -> None:
    coeffs = {(2, 0): Fraction(1, 4), (0, 1): Fraction(-5, 6), (0, 0): Fraction(2)}
    assert clear_denominators(coeffs, 2) == IntPoly.from_dict(
        {(2, 0): 3, (0, 1): -10, (0, 0): 24}, 2
    )
    assert clear_denominators({}, 2) == IntPoly.from_dict({}, 2)


def test_powers_and_parentheses() -> None:
    (eq,) = parse_system("vars: x\n(x + 1)^2\n").generators
    assert eq == IntPoly.from_dict({(2,): 1, (1,): 2, (0,): 1}, 1)
    (eq,) = parse_system("vars: x, y\n-(x - y)*(x + y)\n").generators
    assert eq == IntPoly.from_dict({(2, 0): -1, (0, 2): 1}, 2)


@pytest.mark.parametrize(
    ("text", "line", "column"),
    [
        ("vars: x\ny + 1\n", 2, 1),
        ("vars: x\n2x\n", 2, 2),
        ("vars: x\nx/x\n", 2, 3),
        ("vars: x\nx/0\n", 2, 3),
        ("vars: x\nx^y\n", 2, 3),
        ("vars: x\n(x + 1\n", 2, 7),
        ("vars: x\nx - x\n", 2, 1),
        ("vars: x, x\nx\n", 1, 6),
        ("x + 1\n", 1, 1),
    ],
)
def test_parse_errors_carry_a_position(text: str, line: int, column: int) -> None:
    with pytest.raises(ParseError) as info:
        parse_system(text)
    assert (info.value.line, info.value.column) == (line, column)
    assert str(info.value).startswith(f"line {line}, column {column}:")


@pytest.mark.parametrize("text", ["", "# nothing here\n", "vars: x\n"])
def test_empty_input_is_an_error(text: str) -> None:
    with pytest.raises(ParseError):
        parse_system(text)


def test_format_polynomial() -> None:
    poly = IntPoly.from_dict({(2, 0): 1, (1, 1): -3, (0, 1): 2, (0, 0): -1}, 2)
    assert format_polynomial(poly, ("x", "y")) == "x^2 - 3*x*y + 2*y - 1"
    assert format_polynomial(IntPoly.from_dict({}, 2), ("x", "y")) == "0"


def test_format_parse_round_trip() -> None:
    system = katsura(10)
    text = format_system(system)
    assert text.splitlines()[0] == "vars: " + ", ".join(f"x{i}" for i in range(1, 11))
    parsed = parse_system(text)
    assert len(parsed.generators) == 10
    assert parsed.same_equations(system)

import numpy as np
import pytest
from sympy import Rational

from src.utils.divisor_expr import format_class, format_divisor, parse_combination, parse_divisor
from src.utils.errors import DivisorSyntaxError

LABELS = ["L", "E", "O", "F", "Theta1_0", "f1"]


@pytest.mark.parametrize(
    "text, expected",
    [
        ("3L - E", {"L": 3, "E": -1}),
        ("3 L-E", {"L": 3, "E": -1}),
        ("1/2 O + F", {"O": Rational(1, 2), "F": 1}),
        ("2*L + E - E", {"L": 2}),
        ("-E", {"E": -1}),
        ("Theta1_0 + 2 f1", {"Theta1_0": 1, "f1": 2}),
        ("0", {}),
    ],
)
def test_parse_combination(text, expected):
    assert parse_combination(text, LABELS) == expected


@pytest.mark.parametrize(
    "text, column, fragment",
    [
        ("", 1, "empty"),
        ("   ", 1, "empty"),
        ("3L -", 5, "end of input"),
        ("3L + X", 6, "unknown label"),
        ("L + $", 5, "unexpected character"),
        ("L $", 3, "expected '+' or '-'"),
        ("1/0 L", 3, "zero denominator"),
        ("L E", 3, "expected '+' or '-'"),
        ("+ + L", 3, "expected a label"),
    ],
)
def test_syntax_errors_are_located(text, column, fragment):
    with pytest.raises(DivisorSyntaxError) as info:
        parse_combination(text, LABELS)
    assert info.value.column == column
    assert fragment in str(info.value)


def test_parse_divisor_against_a_model(f1):
    D = parse_divisor("3L - E", f1.label_map())
    assert D.coords == (3, -1)
    assert D.label == "3L - E"
    assert parse_divisor("N - Q", f1.label_map()).coords == (1, -1)


def test_format_divisor():
    assert format_divisor({"L": 3, "E": -1}) == "3 L - E"
    assert format_divisor({"O": Rational(1, 2), "F": 1}) == "1/2 O + F"
    assert format_divisor({"E": -1}) == "-E"
    assert format_divisor({}) == "0"
    assert format_divisor({"L": 0, "E": Rational(-2, 3)}, ["L", "E"]) == "-2/3 E"
    assert format_class((1, 0), ("L", "E")) == "L"


def test_format_then_parse_gives_back_the_combination():
    rng = np.random.default_rng(5)
    for _ in range(200):
        combination = {}
        for label in LABELS:
            if rng.random() < 0.6:
                combination[label] = Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 5)))
        text = format_divisor(combination, LABELS)
        assert parse_combination(text, LABELS) == {k: v for k, v in combination.items() if v != 0}

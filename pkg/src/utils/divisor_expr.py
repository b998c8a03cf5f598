import re
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy import Float, Integer, Rational, Symbol
from sympy.parsing.sympy_parser import implicit_multiplication, parse_expr, standard_transformations

from src.geometry.zariski import DivisorClass
from src.utils.errors import DivisorSyntaxError

TRANSFORMATIONS = standard_transformations + (implicit_multiplication,)

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/])|(?P<bad>\S))")


def _tokens(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None or match.end() == pos:
            break
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    return tokens


def _check_grammar(text: str, labels: Mapping) -> None:
    """expr := term (('+'|'-') term)*; term := [coeff ['*']] label; coeff := int | int '/' int."""
    tokens = _tokens(text)
    if not tokens:
        raise DivisorSyntaxError(text, 1, "empty divisor expression")
    end = len(text.rstrip()) + 1
    k = 0

    def peek(offset=0):
        return tokens[k + offset] if k + offset < len(tokens) else ("end", "", end)

    if peek()[1] in "+-" and peek()[0] == "op":
        k += 1
    while True:
        kind, value, column = peek()
        if kind == "bad":
            raise DivisorSyntaxError(text, column, f"unexpected character {value!r}")
        if kind == "num":
            k += 1
            if peek()[:2] == ("op", "/"):
                k += 1
                kind, value, column = peek()
                if kind != "num":
                    raise DivisorSyntaxError(text, column, "expected an integer denominator")
                if int(value) == 0:
                    raise DivisorSyntaxError(text, column, "zero denominator")
                k += 1
            if peek()[:2] == ("op", "*"):
                k += 1
            kind, value, column = peek()
        if kind == "bad":
            raise DivisorSyntaxError(text, column, f"unexpected character {value!r}")
        if kind != "name":
            what = "end of input" if kind == "end" else repr(value)
            raise DivisorSyntaxError(text, column, f"expected a label, found {what}")
        if value not in labels:
            raise DivisorSyntaxError(text, column, f"unknown label {value!r}")
        k += 1
        kind, value, column = peek()
        if kind == "end":
            return
        if kind == "op" and value in "+-":
            k += 1
            continue
        raise DivisorSyntaxError(text, column, f"expected '+' or '-', found {value!r}")


def parse_combination(text: str, labels: Sequence[str]) -> Dict[str, Rational]:
    """Parse `3L - E`, `1/2 O + F`, ... into label coefficients (zero terms dropped)."""
    labels = list(labels)
    if text.strip() == "0":
        return {}
    _check_grammar(text, labels)
    symbols = {label: Symbol(label) for label in labels}
    # "3L" becomes "3 L" so the tokenizer never sees a malformed number
    spaced = re.sub(r"\b(\d+)(?=[A-Za-z_])", r"\1 ", text)
    expr = parse_expr(
        spaced,
        local_dict=symbols,
        global_dict={"Integer": Integer, "Rational": Rational, "Symbol": Symbol, "Float": Float},
        transformations=TRANSFORMATIONS,
    )
    expr = sympy.expand(expr)
    if expr.atoms(Float):
        raise DivisorSyntaxError(text, 1, "floating-point coefficient")
    coefficients = expr.as_coefficients_dict()
    result: Dict[str, Rational] = {}
    for label in labels:
        c = coefficients.get(symbols[label], 0)
        if c != 0:
            result[label] = Rational(c)
    unknown = set(coefficients) - {symbols[label] for label in labels}
    if any(coefficients[u] != 0 for u in unknown):
        raise DivisorSyntaxError(text, 1, "expression is not a linear combination of labels")
    return result


def parse_divisor(text: str, labels: Mapping[str, Sequence]) -> DivisorClass:
    """Parse a divisor expression against the label → class map of a surface model."""
    combination = parse_combination(text, list(labels))
    dim = len(next(iter(labels.values()))) if labels else 0
    coords = [Rational(0)] * dim
    for label, c in combination.items():
        for i, v in enumerate(labels[label]):
            coords[i] += c * v
    return DivisorClass(tuple(coords), label=text.strip())


def format_divisor(combination: Mapping[str, Rational], order: Optional[Sequence[str]] = None) -> str:
    """Inverse of `parse_combination`, e.g. `{"L": 3, "E": -1}` → `3 L - E`."""
    order = list(order) if order is not None else list(combination)
    parts = []
    for label in order:
        c = Rational(combination.get(label, 0))
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        magnitude = abs(c)
        term = label if magnitude == 1 else f"{magnitude} {label}"
        if not parts:
            parts.append(f"-{term}" if sign == "-" else term)
        else:
            parts.append(f"{sign} {term}")
    return " ".join(parts) if parts else "0"


def format_class(coords: Sequence, basis_labels: Sequence[str]) -> str:
    return format_divisor(dict(zip(basis_labels, coords)), basis_labels)

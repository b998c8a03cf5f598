import json

from sympy import Rational

from src.geometry.nob import FlagSpec, polygon
from src.utils.emit import dump_json, exact_str, polygon_to_csv, polygon_to_svg, to_jsonable


def test_exact_numbers():
    assert exact_str(Rational(3, 6)) == "1/2"
    assert exact_str(Rational(-4, 2)) == "-2"
    assert to_jsonable({"a": [Rational(1, 3), Rational(2)], "b": (True, None)}) == {"a": ["1/3", 2], "b": [True, None]}
    assert json.loads(dump_json({"area": Rational(3, 2)})) == {"area": "3/2"}


def test_csv_is_exact_and_stable(f1, tmp_path):
    poly = polygon(f1, (3, -1), FlagSpec("E"))
    path = tmp_path / "f1.csv"
    polygon_to_csv(poly, path)
    assert path.read_text() == "vertex,t,s\n0,0,0\n1,2,0\n2,2,3\n3,0,1\n"
    polygon_to_csv(poly, tmp_path / "again.csv")
    assert (tmp_path / "again.csv").read_bytes() == path.read_bytes()


def test_svg_is_written(f1, tmp_path):
    poly = polygon(f1, (2, -1), FlagSpec("N", {"E": 1}))
    path = tmp_path / "plots" / "f1.svg"
    polygon_to_svg(poly, path, title="f1")
    text = path.read_text()
    assert "<svg" in text

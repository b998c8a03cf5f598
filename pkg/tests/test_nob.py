import numpy as np
import pytest
from sympy import Rational

from src.command.search import flag_grid
from src.geometry import nob
from src.geometry.nob import (
    Affine,
    FlagSpec,
    PiecewiseLinearFn,
    alpha_beta,
    count_vertices,
    polygon,
    shoelace,
    sweep,
)
from src.geometry.zariski import volume
from src.utils.errors import (
    ContractViolation,
    FlagInNegativePartError,
    NotBigError,
    PreconditionError,
    UnknownLabelError,
)

R = Rational


def test_piecewise_linear_function():
    fn = PiecewiseLinearFn.merged([0, 1, 2, 3], [Affine(R(0), R(0)), Affine(R(0), R(0)), Affine(R(1), R(-2))])
    assert fn.breakpoints == (0, 2, 3)
    assert fn.slopes == [0, 1]
    assert fn(R(5, 2)) == R(1, 2)
    assert fn.is_convex() and not fn.is_concave()
    with pytest.raises(ContractViolation):
        fn(4)
    with pytest.raises(ContractViolation):
        PiecewiseLinearFn((0, 1, 2), (Affine(R(0), R(0)), Affine(R(0), R(1))))


def test_shoelace():
    assert shoelace([(0, 0), (2, 0), (2, 3), (0, 1)]) == 4
    assert shoelace([(0, 0), (1, 0), (0, 1)]) == R(1, 2)


def test_p2_triangle(p2):
    poly = polygon(p2, (1,), FlagSpec("L"))
    assert poly.vertices == ((0, 0), (1, 0), (0, 1))
    assert poly.area == R(1, 2)
    assert count_vertices(poly) == 3


def test_f1_general_point_on_exceptional_curve(f1):
    poly = polygon(f1, (3, -1), FlagSpec("E"))
    assert poly.vertices == ((0, 0), (2, 0), (2, 3), (0, 1))
    assert poly.area == 4 == volume(f1, (3, -1)) / 2
    assert (poly.nu, poly.mu) == (0, 2)
    assert poly.alpha.slopes == [0]
    assert poly.beta.slopes == [1]


def test_f1_fibre_through_exceptional_curve(f1):
    flag = FlagSpec("F", {"E": 1})
    pieces = sweep(f1, (3, -1), flag)
    assert [(p.start, p.end, p.support) for p in pieces] == [(0, 1, ()), (1, 3, ("E",))]
    assert pieces[1].coefficients["E"] == Affine(R(1), R(-1))
    alpha, beta = alpha_beta(pieces, flag)
    assert alpha.breakpoints == (0, 1, 3)
    assert beta.breakpoints == (0, 3)
    poly = polygon(f1, (3, -1), flag)
    assert poly.vertices == ((0, 0), (1, 0), (3, 2), (0, 2))
    assert poly.area == 4


def test_general_point_ignores_the_negative_part(f1):
    poly = polygon(f1, (3, -1), FlagSpec("F"))
    assert poly.vertices == ((0, 0), (3, 0), (1, 2), (0, 2))


def test_five_vertices_on_f1(f1):
    poly = polygon(f1, (2, -1), FlagSpec("N", {"E": 1}))
    assert poly.vertices == ((0, 0), (R(1, 2), 0), (R(2, 3), R(1, 3)), (R(1, 2), R(3, 2)), (0, 4))
    assert poly.area == R(3, 2)
    rows = poly.to_rows()
    assert rows[1] == {"vertex": 1, "t": "1/2", "s": "0"}


def test_flag_checks(f1):
    with pytest.raises(PreconditionError):
        FlagSpec("E", {"E": 1}).check(f1)
    with pytest.raises(PreconditionError):
        FlagSpec("E", {"F": 2}).check(f1)
    with pytest.raises(UnknownLabelError):
        FlagSpec("Z").check(f1)
    assert FlagSpec("F", {"E": 0}).general
    assert FlagSpec("F", {"E": 1}).describe() == "(F, p with E:1)"


def test_divisor_must_be_big(f1):
    with pytest.raises(NotBigError):
        polygon(f1, (0, 1), FlagSpec("F"))
    with pytest.raises(NotBigError):
        polygon(f1, (1, -1), FlagSpec("E"))


def _random_sweeps(model, rng, count):
    flags = list(flag_grid(model))
    gens = model.generator_vectors
    done = 0
    while done < count:
        weights = [int(w) for w in rng.integers(0, 4, size=len(gens))]
        D = tuple(sum((w * g[i] for w, g in zip(weights, gens)), R(0)) for i in range(model.rho))
        if volume(model, D) <= 0:
            continue
        yield D, flags[int(rng.integers(0, len(flags)))]
        done += 1


@pytest.mark.parametrize("stem, mv, seed", [("p2", 3, 0), ("f1", 5, 1), ("k3_s1", 7, 2)])
def test_polygon_laws_on_random_sweeps(load_bundled, stem, mv, seed):
    model = load_bundled(stem)
    rng = np.random.default_rng(seed)
    for D, flag in _random_sweeps(model, rng, 40):
        poly = polygon(model, D, flag)
        assert poly.area == volume(model, D) / 2
        assert poly.alpha.is_convex()
        assert poly.beta.is_concave()
        assert 3 <= count_vertices(poly) <= mv
        assert all(poly.alpha(t) <= poly.beta(t) for t in poly.alpha.breakpoints + poly.beta.breakpoints)


def test_flag_curve_may_not_reenter_the_negative_part(f1, monkeypatch):
    real = nob._right_support

    def with_flag_curve(model, D, C, t):
        support, coeffs = real(model, D, C, t)
        return support + [model.curve("E")], coeffs + [Affine(R(0), R(0))]

    monkeypatch.setattr(nob, "_right_support", with_flag_curve)
    with pytest.raises(FlagInNegativePartError, match="flag curve E"):
        sweep(f1, (3, -1), FlagSpec("E"))

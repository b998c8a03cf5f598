import numpy as np
import pytest
from sympy import Rational

from src.geometry.configmv import CurveRecord
from src.geometry.exactmath import is_negative_definite
from src.geometry.zariski import (
    DivisorClass,
    SurfaceModel,
    is_pseudo_effective,
    mu_of,
    nu_of,
    volume,
    zariski_bruteforce,
    zariski_decompose,
)
from src.utils.divisor_expr import parse_divisor
from src.utils.errors import (
    ContractViolation,
    NotPseudoEffectiveError,
    UnknownLabelError,
    UnsupportedError,
)


def test_divisor_class_arithmetic():
    D = DivisorClass((1, 2), label="D")
    assert D + DivisorClass((1, 0)) == DivisorClass((2, 2))
    assert D - DivisorClass((1, 0)) == DivisorClass((0, 2))
    assert 2 * D == D * 2 == DivisorClass((2, 4))
    assert -D == DivisorClass((-1, -2))
    assert D == DivisorClass(("1", "2/1"))
    assert list(D) == [1, 2]


def test_f1_fixed_part(f1):
    decomposition = zariski_decompose(f1, parse_divisor("L + 2E", f1.label_map()))
    assert decomposition.positive == DivisorClass((1, 0))
    assert decomposition.negative_coeffs == {"E": 2}
    assert decomposition.negative(f1) == DivisorClass((0, 2))


def test_nef_divisor_is_its_own_positive_part(f1):
    decomposition = zariski_decompose(f1, (3, -1))
    assert decomposition.positive == DivisorClass((3, -1))
    assert decomposition.negative_coeffs == {}


def test_s1_zero_section_plus_fibre(k3_s1):
    D = parse_divisor("O + F", k3_s1.label_map())
    decomposition = zariski_decompose(k3_s1, D)
    assert decomposition.negative_coeffs == {"O": Rational(1, 2)}
    assert decomposition.positive == DivisorClass((Rational(1, 2), Rational(1, 2), 0))
    assert decomposition.positive == DivisorClass(k3_s1.resolve_label("O")) * Rational(1, 2) + DivisorClass(
        k3_s1.resolve_label("F")
    )


def test_nu_mu_volume(f1, p2):
    assert nu_of(f1, (3, -1), "E") == 0
    assert nu_of(f1, (1, 2), "E") == 2
    assert mu_of(f1, (3, -1), "E") == 2
    assert mu_of(f1, (3, -1), "F") == 3
    assert mu_of(p2, (1,), "L") == 1
    assert volume(f1, (3, -1)) == 8
    assert volume(f1, (1, 2)) == 1
    assert volume(p2, (Rational(3, 2),)) == Rational(9, 4)


def test_domain_errors(f1, load_bundled):
    assert is_pseudo_effective(f1, (1, -1))
    with pytest.raises(NotPseudoEffectiveError):
        zariski_decompose(f1, (-1, 0))
    with pytest.raises(NotPseudoEffectiveError):
        mu_of(f1, (0, -1), "E")
    with pytest.raises(UnknownLabelError):
        nu_of(f1, (3, -1), "X")
    with pytest.raises(ContractViolation):
        zariski_decompose(f1, (1, 2, 3))
    with pytest.raises(UnsupportedError):
        zariski_decompose(load_bundled("exe"), (1, 0, 0))


def test_validate_reports_every_problem():
    model = SurfaceModel(
        name="bad",
        rho=2,
        ns_gram=((1, 0), (0, -1)),
        basis_labels=("L", "E"),
        curves=(CurveRecord("E", (0, 1), -1), CurveRecord("C", (1, 1), 0)),
        effective_generators=((None, (Rational(1), Rational(-1))),),
    )
    problems = model.validate()
    messages = " | ".join(message for _, message in problems)
    assert "missing from effective_generators" in messages
    assert "meet negatively" in messages


@pytest.mark.parametrize("stem, cases, seed", [("p2", 200, 0), ("f1", 400, 1), ("k3_s1", 400, 2)])
def test_zariski_matches_bruteforce_on_random_divisors(load_bundled, stem, cases, seed):
    model = load_bundled(stem)
    gens = model.generator_vectors
    rng = np.random.default_rng(seed)
    for _ in range(cases):
        q = int(rng.integers(1, 4))
        weights = [Rational(int(w), q) for w in rng.integers(0, 7, size=len(gens))]
        D = tuple(sum((w * g[i] for w, g in zip(weights, gens)), Rational(0)) for i in range(model.rho))

        decomposition = zariski_decompose(model, D)
        assert decomposition == zariski_bruteforce(model, D)

        P = decomposition.positive
        assert P + decomposition.negative(model) == DivisorClass(D)
        support = [model.curve(label) for label in decomposition.support]
        assert all(model.dot(P, c.cls) == 0 for c in support)
        assert is_negative_definite([[model.dot(a.cls, b.cls) for b in support] for a in support])
        assert all(a > 0 for a in decomposition.negative_coeffs.values())
        assert all(model.dot(P, g) >= 0 for g in gens)
        assert all(model.dot(P, c.cls) >= 0 for c in model.curves)

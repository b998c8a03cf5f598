import numpy as np
import pytest
from sympy import Matrix, Rational, oo

from src.geometry.exactmath import (
    SolveOutcome,
    as_rational,
    bilinear,
    cone_contains,
    cone_max_param,
    is_negative_definite,
    signature_of,
    solve_linear,
)
from src.utils.errors import ContractViolation, PreconditionError

F1_CONE = [(0, 1), (1, -1)]


def test_as_rational():
    assert as_rational("1/2") == Rational(1, 2)
    assert as_rational(" -3/6 ") == Rational(-1, 2)
    assert as_rational(7) == 7
    for bad in (0.5, True, "x", "1/2/3"):
        with pytest.raises(ContractViolation):
            as_rational(bad)


def test_bilinear():
    assert bilinear((3, -1), [[1, 0], [0, -1]], (3, -1)) == 8
    with pytest.raises(ContractViolation):
        bilinear((1,), [[1, 0], [0, 1]], (1, 0))


def test_signature_known_forms():
    assert signature_of([[0, 1], [1, 0]]) == (1, 1, 0)
    assert signature_of([[1, 0], [0, -1]]) == (1, 1, 0)
    assert signature_of([[0, 0], [0, 0]]) == (0, 0, 2)
    assert signature_of([[0, 1, 1], [1, 0, 1], [1, 1, 0]]) == (1, 2, 0)
    assert signature_of([[-2, 1], [1, -2]]) == (0, 2, 0)
    assert signature_of([]) == (0, 0, 0)


def test_signature_rejects_asymmetric():
    with pytest.raises(ContractViolation):
        signature_of([[0, 1], [2, 0]])
    with pytest.raises(ContractViolation):
        signature_of([[0, 1, 2], [1, 0, 3]])


def test_signature_matches_eigenvalues_on_random_forms():
    rng = np.random.default_rng(7)
    for _ in range(200):
        n = int(rng.integers(1, 5))
        A = rng.integers(-3, 4, size=(n, n))
        G = A + A.T
        sig = signature_of(G.tolist())
        assert sum(sig) == n
        assert sig.n_zero == n - Matrix(G.tolist()).rank()
        eig = np.linalg.eigvalsh(G.astype(float))
        if np.min(np.abs(eig)) > 1e-6:
            assert sig.n_plus == int(np.sum(eig > 0))
            assert sig.n_minus == int(np.sum(eig < 0))


def test_signature_is_invariant_under_unimodular_change():
    rng = np.random.default_rng(11)
    for _ in range(50):
        A = rng.integers(-2, 3, size=(3, 3))
        G = Matrix((A + A.T).tolist())
        B = Matrix([[1, int(rng.integers(-2, 3)), 0], [0, 1, int(rng.integers(-2, 3))], [0, 0, 1]])
        assert signature_of(B * G * B.T) == signature_of(G)


def test_is_negative_definite():
    assert is_negative_definite([[-2, 1], [1, -2]])
    assert is_negative_definite([[-1]])
    assert is_negative_definite([])
    assert not is_negative_definite([[-2, 2], [2, -2]])
    assert not is_negative_definite([[0, 1], [1, 0]])
    assert not is_negative_definite([[-2, 0], [0, 1]])


def test_solve_linear():
    assert solve_linear([[2, 1], [1, 3]], [3, 5]) == (Rational(4, 5), Rational(7, 5))
    assert solve_linear([[1, 1], [1, 1]], [1, 2]) is SolveOutcome.NO_SOLUTION
    assert solve_linear([[1, 1]], [1]) is SolveOutcome.UNDERDETERMINED
    assert solve_linear(Matrix(0, 0, []), []) == ()
    with pytest.raises(ContractViolation):
        solve_linear([[1, 0], [0, 1]], [1])


def test_cone_contains_certificate():
    result = cone_contains(F1_CONE, (3, -1))
    assert result.member
    assert result.certificate == (2, 3)


def test_cone_contains_separating_functional():
    for x in [(-1, 0), (0, -1), (1, -2)]:
        result = cone_contains(F1_CONE, x)
        assert not result.member
        f = result.functional
        assert all(sum(a * b for a, b in zip(f, g)) >= 0 for g in F1_CONE)
        assert sum(a * b for a, b in zip(f, x)) < 0


def test_cone_contains_on_random_points():
    rng = np.random.default_rng(3)
    gens = [(1, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 2)]
    for _ in range(100):
        weights = rng.integers(0, 4, size=len(gens))
        x = tuple(int(sum(w * g[i] for w, g in zip(weights, gens))) for i in range(3))
        result = cone_contains(gens, x)
        assert result.member
        assert all(w >= 0 for w in result.certificate)
    assert not cone_contains(gens, (0, 0, -1)).member


def test_cone_contains_dimension_mismatch():
    with pytest.raises(ContractViolation):
        cone_contains(F1_CONE, (1, 2, 3))
    with pytest.raises(ContractViolation):
        cone_contains([], (1,))


def test_cone_max_param():
    assert cone_max_param(F1_CONE, (3, -1), (0, 1)) == 2
    assert cone_max_param(F1_CONE, (3, -1), (1, -1)) == 3
    assert cone_max_param(F1_CONE, (2, -1), (3, -2)) == Rational(2, 3)
    assert cone_max_param(F1_CONE, (3, -1), (0, -1)) == oo
    with pytest.raises(PreconditionError):
        cone_max_param(F1_CONE, (-1, 0), (0, 1))


def test_negative_definiteness_agrees_with_signature():
    rng = np.random.default_rng(13)
    seen = set()
    for _ in range(200):
        n = int(rng.integers(1, 5))
        A = rng.integers(-2, 3, size=(n, n))
        G = (A + A.T - int(rng.integers(0, 9)) * np.eye(n, dtype=np.int64)).tolist()
        expected = tuple(signature_of(G)) == (0, n, 0)
        assert is_negative_definite(G) == expected
        seen.add(expected)
    assert seen == {True, False}


def test_cone_max_param_is_the_last_member():
    rng = np.random.default_rng(5)
    gens = [(1, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 2)]
    step = Rational(1, 1000)
    checked = 0
    for _ in range(100):
        weights = rng.integers(0, 4, size=len(gens))
        D = tuple(int(sum(w * g[i] for w, g in zip(weights, gens))) for i in range(3))
        C = tuple(int(c) for c in rng.integers(-2, 3, size=3))
        if not any(C):
            continue
        t = cone_max_param(gens, D, C)
        if t == oo:
            continue
        assert t >= 0
        assert cone_contains(gens, tuple(d - t * c for d, c in zip(D, C))).member
        assert not cone_contains(gens, tuple(d - (t + step) * c for d, c in zip(D, C))).member
        checked += 1
    assert checked > 20

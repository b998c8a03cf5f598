import enum
import logging
from collections import namedtuple
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import sympy
from sympy import Matrix, Rational, oo

from src.utils.errors import ContractViolation, PreconditionError

logger = logging.getLogger(__name__)

Signature = namedtuple("Signature", ["n_plus", "n_minus", "n_zero"])

Vector = Tuple[Rational, ...]


class SolveOutcome(enum.Enum):
    NO_SOLUTION = "no solution"
    UNDERDETERMINED = "underdetermined"


@dataclass(frozen=True)
class ConeQueryResult:
    member: bool
    certificate: Optional[Vector] = None
    functional: Optional[Vector] = None


def as_rational(value) -> Rational:
    """Convert an int, a `p/q` string or a sympy rational into `sympy.Rational`.

    Floats are refused: nothing in this package is allowed to be inexact.
    """
    if isinstance(value, bool):
        raise ContractViolation(f"boolean {value!r} is not a number")
    if isinstance(value, float):
        raise ContractViolation(f"floating-point value {value!r} is not exact")
    if isinstance(value, str):
        try:
            value = Rational(value.strip())
        except (TypeError, ValueError, sympy.SympifyError):
            raise ContractViolation(f"{value!r} is not an exact fraction")
    value = sympy.sympify(value)
    if not value.is_Rational:
        raise ContractViolation(f"{value!r} is not an exact rational number")
    return Rational(value)


def as_vector(values: Sequence) -> Vector:
    return tuple(as_rational(v) for v in values)


def as_matrix(rows) -> Matrix:
    if isinstance(rows, sympy.MatrixBase):
        matrix = Matrix(rows)
    else:
        rows = [list(r) for r in rows]
        if not rows:
            return Matrix(0, 0, [])
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ContractViolation("matrix rows have different lengths")
        matrix = Matrix(len(rows), width, [as_rational(v) for r in rows for v in r])
    return matrix.applyfunc(as_rational)


def _symmetric(G) -> Matrix:
    A = as_matrix(G)
    if A.rows != A.cols:
        raise ContractViolation(f"expected a square matrix, got {A.rows}x{A.cols}")
    if A != A.T:
        raise ContractViolation("matrix is not symmetric")
    return A


def bilinear(u: Sequence, G, v: Sequence) -> Rational:
    """Evaluate uᵀ·G·v exactly."""
    A = as_matrix(G)
    if len(u) != A.rows or len(v) != A.cols:
        raise ContractViolation("vector length does not match the Gram matrix")
    return Rational((Matrix([list(u)]) * A * Matrix(list(v)))[0, 0])


def signature_of(G) -> Signature:
    """Exact inertia of a symmetric matrix by symmetric Gaussian reduction over ℚ.

    Args:
        G: Symmetric matrix (sympy matrix or nested sequences of exact numbers).

    Returns:
        Signature: `(n_plus, n_minus, n_zero)`.
    """
    A = _symmetric(G)
    n_plus = n_minus = n_zero = 0
    while A.rows > 0:
        if A[0, 0] == 0:
            pivot = next((i for i in range(1, A.rows) if A[i, i] != 0), None)
            if pivot is not None:
                A = A.copy()
                A.row_swap(0, pivot)
                A.col_swap(0, pivot)
            else:
                partner = next((j for j in range(1, A.cols) if A[0, j] != 0), None)
                if partner is None:
                    n_zero += 1
                    A = A[1:, 1:]
                    continue
                # diagonal is zero here, so the new corner is 2·A[0, partner]
                A = A.copy()
                A[0, :] = A[0, :] + A[partner, :]
                A[:, 0] = A[:, 0] + A[:, partner]
        p = A[0, 0]
        if p > 0:
            n_plus += 1
        else:
            n_minus += 1
        A = A[1:, 1:] - A[1:, 0] * A[0, 1:] / p
    return Signature(n_plus, n_minus, n_zero)


def is_negative_definite(G) -> bool:
    """Sylvester's criterion: (-1)^k·det of the k-th leading minor must be positive.

    The empty matrix counts as negative definite.
    """
    A = _symmetric(G)
    for k in range(1, A.rows + 1):
        if (-1) ** k * A[:k, :k].det(method="bareiss") <= 0:
            return False
    return True


def solve_linear(A, b: Sequence) -> Union[Vector, SolveOutcome]:
    """Solve `A·x = b` exactly.

    Returns:
        Union[Vector, SolveOutcome]: The unique solution, `SolveOutcome.NO_SOLUTION`
        for an inconsistent system or `SolveOutcome.UNDERDETERMINED` when the
        solution set has free parameters.
    """
    A = as_matrix(A)
    rhs = as_vector(b)
    if A.rows != len(rhs):
        raise ContractViolation(f"system has {A.rows} rows but {len(rhs)} right-hand sides")
    if A.cols == 0:
        return () if all(v == 0 for v in rhs) else SolveOutcome.NO_SOLUTION
    if A.rows == 0:
        return SolveOutcome.UNDERDETERMINED
    try:
        solution, params = A.gauss_jordan_solve(Matrix(list(rhs)))
    except ValueError:
        return SolveOutcome.NO_SOLUTION
    if params.rows > 0:
        return SolveOutcome.UNDERDETERMINED
    return tuple(Rational(v) for v in solution)


class _Tableau:
    """Dense exact simplex tableau, pivoting by Bland's rule.

    `z` holds the reduced costs, `value` the negated objective value.
    """

    def __init__(self, rows: List[List[Rational]], rhs: List[Rational], basis: List[int]):
        self.rows = [list(r) for r in rows]
        self.rhs = list(rhs)
        self.basis = list(basis)
        self.width = len(self.rows[0]) if self.rows else 0
        self.z: List[Rational] = []
        self.value = Rational(0)

    def price(self, cost: Sequence[Rational]) -> None:
        self.z = list(cost)
        self.value = Rational(0)
        for row, rhs, var in zip(self.rows, self.rhs, self.basis):
            c = cost[var]
            if c != 0:
                self.z = [zj - c * aij for zj, aij in zip(self.z, row)]
                self.value -= c * rhs

    def pivot(self, r: int, j: int) -> None:
        p = self.rows[r][j]
        self.rows[r] = [a / p for a in self.rows[r]]
        self.rhs[r] = self.rhs[r] / p
        for i in range(len(self.rows)):
            f = self.rows[i][j]
            if i != r and f != 0:
                self.rows[i] = [a - f * b for a, b in zip(self.rows[i], self.rows[r])]
                self.rhs[i] = self.rhs[i] - f * self.rhs[r]
        f = self.z[j]
        if f != 0:
            self.z = [a - f * b for a, b in zip(self.z, self.rows[r])]
            self.value = self.value - f * self.rhs[r]
        self.basis[r] = j

    def drop_row(self, r: int) -> None:
        del self.rows[r]
        del self.rhs[r]
        del self.basis[r]

    def optimize(self, allowed: Sequence[int]) -> bool:
        """Run primal simplex over the allowed columns.

        Returns:
            bool: False if the objective is unbounded below.
        """
        while True:
            entering = next((j for j in allowed if self.z[j] < 0), None)
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = self.rhs[i] / row[entering]
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)

    def basic_values(self, n: int) -> List[Rational]:
        values = [Rational(0)] * n
        for var, rhs in zip(self.basis, self.rhs):
            if var < n:
                values[var] = rhs
        return values


def _phase_one(columns: List[Vector], target: Vector) -> Tuple[_Tableau, List[int]]:
    d, n = len(target), len(columns)
    signs = [Rational(-1) if v < 0 else Rational(1) for v in target]
    rows = []
    for i in range(d):
        row = [signs[i] * col[i] for col in columns]
        row += [Rational(1) if k == i else Rational(0) for k in range(d)]
        rows.append(row)
    tableau = _Tableau(rows, [s * v for s, v in zip(signs, target)], list(range(n, n + d)))
    tableau.price([Rational(0)] * n + [Rational(1)] * d)
    tableau.optimize(range(n + d))
    return tableau, signs


def _check_dimensions(generators: Sequence[Sequence], *vectors: Sequence) -> int:
    if len(generators) == 0:
        raise ContractViolation("the generator list is empty")
    dim = len(generators[0])
    for v in list(generators) + list(vectors):
        if len(v) != dim:
            raise ContractViolation(f"dimension mismatch: expected {dim}, got {len(v)}")
    return dim


def cone_contains(generators: Sequence[Sequence], x: Sequence) -> ConeQueryResult:
    """Decide whether `x` lies in the closed cone spanned by `generators`.

    Args:
        generators (Sequence[Sequence]): Cone generators, all of the same length.
        x (Sequence): Query vector.

    Returns:
        ConeQueryResult: On membership `certificate` holds nonnegative weights
        reproducing `x`; otherwise `functional` is nonnegative on every
        generator and negative on `x`.
    """
    dim = _check_dimensions(generators, x)
    columns = [as_vector(g) for g in generators]
    target = as_vector(x)
    n = len(columns)
    tableau, signs = _phase_one(columns, target)

    if tableau.value == 0:
        weights = tuple(tableau.basic_values(n))
        combo = tuple(sum((w * col[i] for w, col in zip(weights, columns)), Rational(0)) for i in range(dim))
        if any(w < 0 for w in weights) or combo != target:
            raise ContractViolation("cone membership certificate failed verification")
        return ConeQueryResult(True, certificate=weights)

    # duals of phase one, read off the reduced costs of the artificial columns
    duals = [1 - tableau.z[n + i] for i in range(dim)]
    functional = tuple(-s * y for s, y in zip(signs, duals))
    on_gens = [sum((f * g for f, g in zip(functional, col)), Rational(0)) for col in columns]
    on_x = sum((f * v for f, v in zip(functional, target)), Rational(0))
    if any(v < 0 for v in on_gens) or on_x >= 0:
        raise ContractViolation("separating functional failed verification")
    return ConeQueryResult(False, functional=functional)


def cone_max_param(generators: Sequence[Sequence], D: Sequence, C: Sequence):
    """Largest t with `D - t·C` in the cone spanned by `generators`.

    Returns:
        Rational or `sympy.oo` when no finite supremum exists.

    Raises:
        PreconditionError: `D` is not in the cone.
    """
    _check_dimensions(generators, D, C)
    if not cone_contains(generators, D).member:
        raise PreconditionError("the divisor is not in the cone")
    columns = [as_vector(g) for g in generators] + [as_vector(C)]
    target = as_vector(D)
    n = len(columns)
    t_index = n - 1

    tableau, _ = _phase_one(columns, target)
    # push leftover artificial variables out of the basis, dropping redundant rows
    r = 0
    while r < len(tableau.rows):
        if tableau.basis[r] >= n:
            k = next((j for j in range(n) if tableau.rows[r][j] != 0), None)
            if k is None:
                tableau.drop_row(r)
                continue
            tableau.pivot(r, k)
        r += 1

    cost = [Rational(0)] * tableau.width
    cost[t_index] = Rational(-1)
    tableau.price(cost)
    if not tableau.optimize(range(n)):
        logger.debug("parametric maximum is unbounded")
        return oo
    return tableau.basic_values(n)[t_index]

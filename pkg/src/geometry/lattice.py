import enum
import itertools
import logging
import re
from dataclasses import dataclass, field
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from sympy import ImmutableMatrix, Rational, floor

from src.geometry.exactmath import Signature, is_negative_definite, signature_of
from src.utils.errors import ContractViolation, PreconditionError

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class Lattice:
    """Integral lattice given by its Gram matrix in a labelled basis.

    Set `degenerate_ok` to wrap a singular Gram (curve configurations).
    """

    gram: Tuple[IntVector, ...]
    labels: Tuple[str, ...] = ()
    name: str = ""
    degenerate_ok: bool = False

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.gram)
        for row, raw in zip(rows, self.gram):
            if any(int(v) != v for v in raw):
                raise ContractViolation("Gram entries must be integers")
        n = len(rows)
        if any(len(row) != n for row in rows):
            raise ContractViolation("Gram matrix is not square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(i)):
            raise ContractViolation("Gram matrix is not symmetric")
        labels = tuple(self.labels) if self.labels else tuple(f"v{i + 1}" for i in range(n))
        if len(labels) != n:
            raise ContractViolation(f"{len(labels)} labels for a rank {n} lattice")
        if len(set(labels)) != n:
            raise ContractViolation("basis labels are not unique")
        object.__setattr__(self, "gram", rows)
        object.__setattr__(self, "labels", labels)
        if not self.degenerate_ok and n > 0 and self.matrix.det() == 0:
            raise ContractViolation(f"Gram matrix of {self.name or 'lattice'} is degenerate")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def matrix(self) -> ImmutableMatrix:
        if self.rank == 0:
            return ImmutableMatrix(0, 0, [])
        return ImmutableMatrix(self.gram)

    def dot(self, u: Sequence, v: Sequence):
        return sum(u[i] * self.gram[i][j] * v[j] for i in range(self.rank) for j in range(self.rank))

    def as_array(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64).reshape(self.rank, self.rank)


class EmbeddingStatus(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class ModularObstruction:
    modulus: int
    form: str
    assignments_covered: int
    per_vector_solutions: Tuple[int, ...]


@dataclass(frozen=True)
class EmbeddingVerdict:
    status: EmbeddingStatus
    witness: Optional[Tuple[IntVector, ...]] = None
    obstruction: Optional[ModularObstruction] = None
    search_bound: Optional[int] = None
    notes: Tuple[str, ...] = field(default_factory=tuple)


def _dynkin_graph(family: str, n: int) -> nx.Graph:
    if family == "A" and n >= 1:
        return nx.path_graph(n)
    if family == "D" and n >= 4:
        graph = nx.path_graph(n - 1)
        graph.add_edge(n - 3, n - 1)
        return graph
    if family == "E" and n in (6, 7, 8):
        graph = nx.path_graph(n - 1)
        graph.add_edge(2, n - 1)
        return graph
    raise PreconditionError(f"there is no root lattice {family}{n}")


def make_root_lattice(family: str, n: int) -> Lattice:
    """Root lattice read off its Coxeter-Dynkin diagram.

    Args:
        family (str): One of `A`, `D`, `E`.
        n (int): Rank; `A` needs n ≥ 1, `D` needs n ≥ 4, `E` needs n in {6, 7, 8}.

    Returns:
        Lattice: Negative-definite lattice with -2 on the diagonal and +1 between adjacent nodes.
    """
    family = family.upper()
    graph = _dynkin_graph(family, n)
    adjacency = nx.to_numpy_array(graph, nodelist=range(n), dtype=np.int64)
    gram = adjacency - 2 * np.eye(n, dtype=np.int64)
    return Lattice(
        gram=tuple(tuple(int(v) for v in row) for row in gram),
        labels=tuple(f"{family}{n}_{i + 1}" for i in range(n)),
        name=f"{family}{n}",
    )


def hyperbolic_U() -> Lattice:
    return Lattice(gram=((0, 1), (1, 0)), labels=("e", "f"), name="U")


def direct_sum(first: Lattice, second: Lattice) -> Lattice:
    n, m = first.rank, second.rank
    gram = [list(row) + [0] * m for row in first.gram]
    gram += [[0] * n + list(row) for row in second.gram]
    labels = list(first.labels)
    taken = set(labels)
    for label in second.labels:
        candidate, k = label, 1
        while candidate in taken:
            k += 1
            candidate = f"{label}_{k}"
        taken.add(candidate)
        labels.append(candidate)
    if not first.name or not second.name:
        name = first.name or second.name
    else:
        name = f"{first.name}+{second.name}"
    return Lattice(
        gram=tuple(tuple(r) for r in gram),
        labels=tuple(labels),
        name=name,
        degenerate_ok=first.degenerate_ok or second.degenerate_ok,
    )


def discriminant(lattice: Lattice) -> int:
    if lattice.rank == 0:
        return 1
    return int(lattice.matrix.det(method="bareiss"))


def is_even(lattice: Lattice) -> bool:
    return all(lattice.gram[i][i] % 2 == 0 for i in range(lattice.rank))


def signature(lattice: Lattice) -> Signature:
    return signature_of(lattice.matrix)


def is_unimodular(lattice: Lattice) -> bool:
    return abs(discriminant(lattice)) == 1


def gram_change_of_basis(lattice: Lattice, basis: Sequence[Sequence[int]], labels: Sequence[str] = ()) -> Lattice:
    """Express `lattice` in a new basis given by integer row vectors.

    Raises:
        PreconditionError: The rows do not form a ℤ-basis (determinant ≠ ±1).
    """
    B = ImmutableMatrix([list(map(int, row)) for row in basis])
    if B.rows != lattice.rank or B.cols != lattice.rank:
        raise ContractViolation("base change must be a square matrix of the lattice rank")
    if abs(B.det()) != 1:
        raise PreconditionError("base change is not unimodular")
    gram = B * lattice.matrix * B.T
    return Lattice(
        gram=tuple(tuple(int(gram[i, j]) for j in range(B.rows)) for i in range(B.rows)),
        labels=tuple(labels) if labels else lattice.labels,
        name=lattice.name,
    )


_TOKEN = re.compile(r"^([ADE])(\d+)$")


def lattice_from_name(text: str) -> Lattice:
    """Build a named lattice such as `U`, `A2`, `E8` or a sum like `U+A1`."""
    result = Lattice(gram=(), name="")
    for token in (t.strip() for t in text.split("+")):
        if token == "U":
            block = hyperbolic_U()
        elif _TOKEN.match(token.upper()):
            family, n = _TOKEN.match(token.upper()).groups()
            block = make_root_lattice(family, int(n))
        else:
            raise PreconditionError(f"unknown lattice name {token!r}")
        result = direct_sum(result, block)
    return result


def _fincke_pohst_coefficients(A: List[List[Rational]]) -> List[List[Rational]]:
    n = len(A)
    q = [[Rational(v) for v in row] for row in A]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    return q


def roots_of(lattice: Lattice, margin: int = 0) -> List[IntVector]:
    """All vectors of square -2 in a negative-definite lattice.

    Enumeration runs on the positive-definite form -G written as a sum of
    squares; each coordinate range is the exact interval of that decomposition,
    widened by `margin` and filtered back exactly.

    Returns:
        List[IntVector]: Sorted lexicographically, closed under negation.
    """
    if not is_negative_definite(lattice.matrix):
        raise PreconditionError(f"{lattice.name or 'lattice'} is not negative definite")
    n = lattice.rank
    if n == 0:
        return []
    q = _fincke_pohst_coefficients([[-v for v in row] for row in lattice.gram])
    bound = Rational(2)
    found: List[IntVector] = []
    x = [0] * n

    def descend(i: int, remaining: Rational):
        center = -sum((q[i][j] * x[j] for j in range(i + 1, n)), Rational(0))
        reach = isqrt(int(floor(remaining / q[i][i]))) + 1 + margin
        lo, hi = int(floor(center)) - reach, int(floor(center)) + reach + 1
        for value in range(lo, hi + 1):
            spent = q[i][i] * (value - center) ** 2
            if spent > remaining:
                continue
            x[i] = value
            if i == 0:
                if spent == remaining:
                    found.append(tuple(x))
            else:
                descend(i - 1, remaining - spent)
        x[i] = 0

    descend(n - 1, bound)
    roots = sorted(found)
    logger.debug("%s has %d roots", lattice.name, len(roots))
    return roots


def _box(bound: int, n: int) -> np.ndarray:
    axis = np.arange(-bound, bound + 1, dtype=np.int64)
    return np.array(np.meshgrid(*([axis] * n), indexing="ij"), dtype=np.int64).reshape(n, -1).T


def _residues(modulus: int, n: int) -> np.ndarray:
    axis = np.arange(modulus, dtype=np.int64)
    return np.array(np.meshgrid(*([axis] * n), indexing="ij"), dtype=np.int64).reshape(n, -1).T


def _extend(candidates: Sequence[np.ndarray], gram: np.ndarray, source: Tuple[IntVector, ...], modulus: Optional[int]):
    """Depth-first search for vectors v_i in candidates[i] with v_i·G·v_j = S_ij for j < i.

    Candidate arrays are in lexicographic order, so the first hit is the
    lexicographically least tuple.
    """
    r = len(candidates)
    chosen: List[np.ndarray] = []

    def search(i: int):
        pool = candidates[i]
        for j, v in enumerate(chosen):
            products = pool @ (gram @ v)
            if modulus is None:
                pool = pool[products == source[i][j]]
            else:
                pool = pool[(products - source[i][j]) % modulus == 0]
            if len(pool) == 0:
                return None
        for row in pool:
            chosen.append(row)
            if i + 1 == r:
                return tuple(tuple(int(c) for c in v) for v in chosen)
            hit = search(i + 1)
            if hit is not None:
                return hit
            chosen.pop()
        return None

    return search(0) if r > 0 else ()


def _self_products(vectors: np.ndarray, gram: np.ndarray) -> np.ndarray:
    return np.einsum("ij,jk,ik->i", vectors, gram, vectors)


def find_witness(source: Lattice, target: Lattice, search_bound: int, max_box: int):
    """Search growing boxes [-b, b]^n, b = 1..search_bound, for an isometric image of the source basis.

    The first box holding any image decides, and within it the lexicographically
    least tuple is returned. For A2 in U + A1 that is ((-1, 0, -1), (0, 1, 1)),
    not the e - f, f - a pair one would write by hand.
    """
    gram = target.as_array()
    n = target.rank
    for b in range(1, search_bound + 1):
        if (2 * b + 1) ** n > max_box:
            return None, f"witness search stopped at box {b - 1}: box {b} exceeds {max_box} vectors"
        box = _box(b, n)
        norms = _self_products(box, gram)
        candidates = [box[norms == source.gram[i][i]] for i in range(source.rank)]
        if any(len(c) == 0 for c in candidates):
            continue
        hit = _extend(candidates, gram, source.gram, None)
        if hit is not None:
            logger.debug("witness found in box %d", b)
            return hit, None
    return None, None


def modular_obstruction(source: Lattice, target: Lattice, modulus: int, max_box: int):
    """Look for a residue class solution of the Gram equations modulo `modulus`.

    When the target is even the diagonal equations use the half-norm
    vᵀGv/2 ≡ S_ii/2, otherwise the full form.

    Returns:
        Tuple[Optional[ModularObstruction], Optional[str]]: The obstruction if no
        residue assignment solves the system, and a note if the modulus was skipped.
    """
    n, r = target.rank, source.rank
    if modulus ** n > max_box:
        return None, f"modulus {modulus} skipped: {modulus ** n} residues exceed {max_box}"
    gram = target.as_array()
    residues = _residues(modulus, n)
    half = is_even(target) and all(source.gram[i][i] % 2 == 0 for i in range(r))
    norms = _self_products(residues, gram)
    candidates = []
    for i in range(r):
        if half:
            ok = (norms // 2 - source.gram[i][i] // 2) % modulus == 0
        else:
            ok = (norms - source.gram[i][i]) % modulus == 0
        candidates.append(residues[ok])
    solution = _extend(candidates, gram, source.gram, modulus)
    if solution is not None:
        return None, None
    return (
        ModularObstruction(
            modulus=modulus,
            form="half-norm" if half else "full",
            assignments_covered=modulus ** (n * r),
            per_vector_solutions=tuple(len(c) for c in candidates),
        ),
        None,
    )


def embeds_root(
    source: Lattice,
    target: Lattice,
    search_bound: int = 6,
    moduli: Sequence[int] = (2, 3, 4),
    max_box: int = 4_000_000,
) -> EmbeddingVerdict:
    """Decide whether the root lattice `source` embeds into `target`.

    Args:
        source (Lattice): Negative-definite lattice with -2 on the diagonal.
        target (Lattice): Any lattice.
        search_bound (int, optional): Largest sup-norm of witness coordinates. Defaults to 6.
        moduli (Sequence[int], optional): Moduli for the residue test. Defaults to (2, 3, 4).
        max_box (int, optional): Largest number of vectors a single enumeration may touch.

    Returns:
        EmbeddingVerdict: `YES` with a witness, `NO` with a modular obstruction or `UNKNOWN`.
    """
    if any(source.gram[i][i] != -2 for i in range(source.rank)) or not is_negative_definite(source.matrix):
        raise PreconditionError(f"{source.name or 'source'} is not a root lattice Gram")
    notes = []
    witness, note = find_witness(source, target, search_bound, max_box)
    if note:
        notes.append(note)
    obstruction = None
    for m in moduli:
        if m < 2:
            raise PreconditionError(f"modulus {m} must be at least 2")
        obstruction, note = modular_obstruction(source, target, m, max_box)
        if note:
            notes.append(note)
        if obstruction is not None:
            break
    if witness is not None and obstruction is not None:
        raise ContractViolation("found both an embedding and a modular obstruction")
    if witness is not None:
        return EmbeddingVerdict(EmbeddingStatus.YES, witness=witness, notes=tuple(notes))
    if obstruction is not None:
        return EmbeddingVerdict(EmbeddingStatus.NO, obstruction=obstruction, notes=tuple(notes))
    return EmbeddingVerdict(EmbeddingStatus.UNKNOWN, search_bound=search_bound, notes=tuple(notes))


def verify_witness(source: Lattice, target: Lattice, witness: Sequence[Sequence[int]]) -> bool:
    """Recompute the Gram of the witness vectors and compare with the source."""
    if len(witness) != source.rank:
        return False
    return all(
        target.dot(witness[i], witness[j]) == source.gram[i][j]
        for i in range(source.rank)
        for j in range(source.rank)
    )


def verify_obstruction(source: Lattice, target: Lattice, obstruction: ModularObstruction) -> bool:
    """Re-enumerate every residue assignment naively and confirm that none solves the system."""
    m, n, r = obstruction.modulus, target.rank, source.rank
    half = obstruction.form == "half-norm"
    per_vector = list(itertools.product(range(m), repeat=n))
    covered = 0
    for assignment in itertools.product(per_vector, repeat=r):
        covered += 1
        solved = True
        for i in range(r):
            for j in range(i, r):
                value = target.dot(assignment[i], assignment[j])
                expected = source.gram[i][j]
                if i == j and half:
                    value, expected = value // 2, expected // 2
                if (value - expected) % m != 0:
                    solved = False
                    break
            if not solved:
                break
        if solved:
            return False
    return covered == obstruction.assignments_covered

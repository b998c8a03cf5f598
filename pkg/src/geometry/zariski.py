import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Rational, oo

from src.geometry.configmv import CurveRecord
from src.geometry.exactmath import (
    SolveOutcome,
    as_vector,
    cone_contains,
    cone_max_param,
    is_negative_definite,
    signature_of,
    solve_linear,
)
from src.utils.errors import (
    ContractViolation,
    ModelInconsistencyError,
    NotPseudoEffectiveError,
    UnboundedError,
    UnknownLabelError,
    UnsupportedError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DivisorClass:
    coords: Tuple[Rational, ...]
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "coords", as_vector(self.coords))

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __mul__(self, scalar) -> "DivisorClass":
        scalar = Rational(scalar)
        return DivisorClass(tuple(scalar * a for a in self.coords))

    __rmul__ = __mul__

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coords))

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __iter__(self):
        return iter(self.coords)


@dataclass
class SurfaceModel:
    name: str
    rho: int
    ns_gram: Tuple[Tuple[int, ...], ...]
    basis_labels: Tuple[str, ...]
    curves: Tuple[CurveRecord, ...] = ()
    effective_generators: Tuple[Tuple[Optional[str], Tuple[Rational, ...]], ...] = ()
    all_negatives_are_minus2: bool = False
    elliptic: Optional[object] = field(default=None, compare=False, repr=False)

    @property
    def polyhedral(self) -> bool:
        return len(self.effective_generators) > 0

    @property
    def negative_curves(self) -> List[CurveRecord]:
        return [c for c in self.curves if c.negative]

    @property
    def generator_vectors(self) -> List[Tuple[Rational, ...]]:
        return [vec for _, vec in self.effective_generators]

    def dot(self, u: Sequence, v: Sequence) -> Rational:
        G = self.ns_gram
        total = Rational(0)
        for i, ui in enumerate(u):
            if ui == 0:
                continue
            for j, vj in enumerate(v):
                if G[i][j] != 0 and vj != 0:
                    total += ui * G[i][j] * vj
        return total

    def curve(self, label: str) -> CurveRecord:
        for c in self.curves:
            if c.label == label:
                return c
        raise UnknownLabelError(f"{self.name}: no curve labelled {label!r}")

    def label_map(self) -> Dict[str, Tuple[Rational, ...]]:
        """Every label a divisor expression may use: basis vectors, then generators, then curves."""
        labels: Dict[str, Tuple[Rational, ...]] = {}
        for i, label in enumerate(self.basis_labels):
            labels[label] = tuple(Rational(1 if j == i else 0) for j in range(self.rho))
        for label, vec in self.effective_generators:
            if label is not None:
                labels[label] = tuple(vec)
        for c in self.curves:
            labels[c.label] = tuple(Rational(v) for v in c.cls)
        return labels

    def resolve_label(self, label: str) -> Tuple[Rational, ...]:
        labels = self.label_map()
        if label not in labels:
            raise UnknownLabelError(f"{self.name}: unknown label {label!r}")
        return labels[label]

    def require_polyhedral(self, what: str) -> None:
        if not self.polyhedral:
            raise UnsupportedError(
                f"{self.name} has no finitely generated effective cone; {what} is unavailable (mv only)"
            )

    def validate(self) -> List[Tuple[str, str]]:
        """Check the model invariants.

        Returns:
            List[Tuple[str, str]]: `(location, message)` pairs, empty when valid.
        """
        problems: List[Tuple[str, str]] = []
        n = self.rho
        if len(self.ns_gram) != n or any(len(row) != n for row in self.ns_gram):
            return [("ns_gram", f"expected a {n}x{n} matrix")]
        if any(self.ns_gram[i][j] != self.ns_gram[j][i] for i in range(n) for j in range(i)):
            return [("ns_gram", "matrix is not symmetric")]
        if len(self.basis_labels) != n:
            problems.append(("basis", f"expected {n} labels, got {len(self.basis_labels)}"))
        sig = signature_of(self.ns_gram)
        if tuple(sig) != (1, n - 1, 0):
            problems.append(("ns_gram", f"signature {tuple(sig)} is not (1, {n - 1}, 0)"))
        for k, c in enumerate(self.curves):
            if len(c.cls) != n:
                problems.append((f"curves[{k}]", f"class of {c.label} has {len(c.cls)} coordinates, expected {n}"))
                continue
            actual = self.dot(c.cls, c.cls)
            if actual != c.self_intersection:
                problems.append((f"curves[{k}]", f"{c.label}: recorded square {c.self_intersection}, Gram gives {actual}"))
        for k, (label, vec) in enumerate(self.effective_generators):
            if len(vec) != n:
                problems.append((f"effective_generators[{k}]", f"has {len(vec)} coordinates, expected {n}"))
        if problems:
            return problems
        if self.polyhedral:
            generators = {tuple(v) for v in self.generator_vectors}
            for k, c in enumerate(self.curves):
                if c.negative and tuple(Rational(v) for v in c.cls) not in generators:
                    problems.append((f"curves[{k}]", f"negative curve {c.label} is missing from effective_generators"))
        irreducible = [c for c in self.curves if c.irreducible]
        for a, b in itertools.combinations(irreducible, 2):
            if tuple(a.cls) != tuple(b.cls) and self.dot(a.cls, b.cls) < 0:
                problems.append(("curves", f"distinct irreducible curves {a.label} and {b.label} meet negatively"))
        if self.all_negatives_are_minus2:
            for k, c in enumerate(self.curves):
                if c.negative and c.self_intersection != -2:
                    problems.append((f"curves[{k}]", f"{c.label} has square {c.self_intersection}, not -2"))
        return problems


@dataclass(frozen=True)
class ZariskiDecomposition:
    positive: DivisorClass
    negative_coeffs: Dict[str, Rational]

    @property
    def support(self) -> Tuple[str, ...]:
        return tuple(self.negative_coeffs)

    def negative(self, model: SurfaceModel) -> DivisorClass:
        total = DivisorClass((0,) * model.rho)
        for label, a in self.negative_coeffs.items():
            total = total + a * DivisorClass(model.curve(label).cls)
        return total


def _coords(model: SurfaceModel, D) -> Tuple[Rational, ...]:
    coords = as_vector(D.coords if isinstance(D, DivisorClass) else D)
    if len(coords) != model.rho:
        raise ContractViolation(f"divisor has {len(coords)} coordinates, {model.name} has rho = {model.rho}")
    return coords


def is_pseudo_effective(model: SurfaceModel, D) -> bool:
    model.require_polyhedral("pseudo-effectivity")
    return cone_contains(model.generator_vectors, _coords(model, D)).member


def _solve_on_support(model: SurfaceModel, D: Tuple[Rational, ...], support: Sequence[CurveRecord]):
    """Coefficients a with (D - Σ a_i C_i)·C_j = 0 for every C_j in the support."""
    gram = Matrix(len(support), len(support), lambda i, j: model.dot(support[i].cls, support[j].cls))
    if not is_negative_definite(gram):
        raise ModelInconsistencyError(
            f"{model.name}: support {{{', '.join(c.label for c in support)}}} is not negative definite"
        )
    solution = solve_linear(gram, [model.dot(D, c.cls) for c in support])
    if isinstance(solution, SolveOutcome):
        raise ModelInconsistencyError(f"{model.name}: support system is {solution.value}")
    return solution


def _subtract(model: SurfaceModel, D, support: Sequence[CurveRecord], coeffs: Sequence[Rational]):
    P = list(D)
    for c, a in zip(support, coeffs):
        for i, v in enumerate(c.cls):
            P[i] -= a * v
    return tuple(P)


def _check_decomposition(model: SurfaceModel, D, support: Sequence[CurveRecord], coeffs, P) -> List[str]:
    problems = []
    if any(a <= 0 for a in coeffs):
        problems.append("non-positive coefficient on the support")
    for c in support:
        if model.dot(P, c.cls) != 0:
            problems.append(f"P·{c.label} != 0")
    for c in model.curves:
        if model.dot(P, c.cls) < 0:
            problems.append(f"P·{c.label} < 0")
    for label, g in model.effective_generators:
        if model.dot(P, g) < 0:
            problems.append(f"P·{label or g} < 0")
    if _subtract(model, P, support, [-a for a in coeffs]) != tuple(D):
        problems.append("P + N != D")
    return problems


def zariski_decompose(model: SurfaceModel, D) -> ZariskiDecomposition:
    """Zariski decomposition D = P + N relative to the listed negative curves.

    The support grows by every negative curve the current positive part meets
    negatively, until the positive part is nef against all listed curves.

    Args:
        model (SurfaceModel): Surface with a finitely generated effective cone.
        D: Divisor class (`DivisorClass` or coordinate sequence).

    Returns:
        ZariskiDecomposition: Positive part and the coefficients of the negative part.
    """
    D = _coords(model, D)
    if not is_pseudo_effective(model, D):
        raise NotPseudoEffectiveError(f"{model.name}: divisor {D} is not pseudo-effective")
    negatives = model.negative_curves
    chosen: List[int] = []
    coeffs: Tuple[Rational, ...] = ()
    P = D
    while True:
        entering = [i for i, c in enumerate(negatives) if i not in chosen and model.dot(P, c.cls) < 0]
        if not entering:
            break
        chosen = sorted(chosen + entering)
        support = [negatives[i] for i in chosen]
        coeffs = _solve_on_support(model, D, support)
        P = _subtract(model, D, support, coeffs)
    support = [negatives[i] for i in chosen]
    problems = _check_decomposition(model, D, support, coeffs, P)
    if problems:
        raise ModelInconsistencyError(
            f"{model.name}: decomposition on support {{{', '.join(c.label for c in support)}}} fails: "
            + "; ".join(problems)
        )
    return ZariskiDecomposition(DivisorClass(P), {c.label: a for c, a in zip(support, coeffs)})


def zariski_bruteforce(model: SurfaceModel, D) -> ZariskiDecomposition:
    """Try every subset of the negative curves as support and keep the unique valid candidate."""
    D = _coords(model, D)
    if not is_pseudo_effective(model, D):
        raise NotPseudoEffectiveError(f"{model.name}: divisor {D} is not pseudo-effective")
    negatives = model.negative_curves
    found = []
    for size in range(len(negatives) + 1):
        for subset in itertools.combinations(negatives, size):
            gram = [[model.dot(a.cls, b.cls) for b in subset] for a in subset]
            if not is_negative_definite(gram):
                continue
            coeffs = _solve_on_support(model, D, subset) if subset else ()
            P = _subtract(model, D, subset, coeffs)
            if not _check_decomposition(model, D, subset, coeffs, P):
                found.append(ZariskiDecomposition(DivisorClass(P), {c.label: a for c, a in zip(subset, coeffs)}))
    if len(found) != 1:
        raise ModelInconsistencyError(f"{model.name}: {len(found)} candidate decompositions for {D}")
    return found[0]


def nu_of(model: SurfaceModel, D, curve: str) -> Rational:
    model.curve(curve)
    return zariski_decompose(model, D).negative_coeffs.get(curve, Rational(0))


def mu_of(model: SurfaceModel, D, curve: str) -> Rational:
    """Largest t with D - t·C pseudo-effective."""
    C = model.curve(curve)
    model.require_polyhedral("mu")
    D = _coords(model, D)
    if not is_pseudo_effective(model, D):
        raise NotPseudoEffectiveError(f"{model.name}: divisor {D} is not pseudo-effective")
    t = cone_max_param(model.generator_vectors, D, C.cls)
    if t == oo:
        raise UnboundedError(f"{model.name}: D - t·{curve} stays pseudo-effective for every t")
    return Rational(t)


def volume(model: SurfaceModel, D) -> Rational:
    P = zariski_decompose(model, D).positive
    return model.dot(P.coords, P.coords)

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import networkx as nx

from src.geometry.exactmath import bilinear, is_negative_definite
from src.geometry.lattice import EmbeddingStatus, EmbeddingVerdict, Lattice, embeds_root, make_root_lattice
from src.utils.errors import ContractViolation, InconsistentInputError, PreconditionError

logger = logging.getLogger(__name__)

MAX_CURVES = 20


@dataclass(frozen=True)
class CurveRecord:
    label: str
    cls: Tuple[int, ...]
    self_intersection: int
    irreducible: bool = True

    @property
    def negative(self) -> bool:
        return self.self_intersection < 0

    @classmethod
    def from_class(cls, label: str, coords: Sequence[int], gram, irreducible: bool = True) -> "CurveRecord":
        coords = tuple(int(c) for c in coords)
        return cls(label, coords, int(bilinear(coords, gram, coords)), irreducible)


@dataclass(frozen=True)
class NegConfig:
    labels: Tuple[str, ...]
    gram: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.gram) != len(self.labels):
            raise ContractViolation("configuration Gram does not match its labels")
        if not is_negative_definite(self.gram):
            raise PreconditionError(f"configuration {{{', '.join(self.labels)}}} is not negative definite")

    @property
    def k(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class MvBound:
    value: int
    verdict: Optional[EmbeddingVerdict]
    note: str = ""


@dataclass(frozen=True)
class MvReport:
    mv_value: int
    witness: NegConfig
    certified: bool
    upper_bound_used: int
    note: str = ""


@dataclass(frozen=True)
class PicardConstraint:
    rho: Optional[int] = None
    rho_at_least: Optional[int] = None
    no_negative_curves: bool = False
    note: str = ""

    def __str__(self) -> str:
        if self.rho is not None:
            return f"rho = {self.rho}"
        if self.rho_at_least is not None:
            text = f"rho >= {self.rho_at_least}"
            return text + " and no negative curves" if self.no_negative_curves else text
        return self.note or "no constraint"


def dual_graph(config: NegConfig) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(config.labels)
    for i, a in enumerate(config.labels):
        for j in range(i + 1, config.k):
            if config.gram[i][j] > 0:
                graph.add_edge(a, config.labels[j])
    return graph


def mc_of(config: NegConfig) -> int:
    """Size of the largest connected part of the (reduced) configuration."""
    if config.k == 0:
        return 0
    return max(len(part) for part in nx.connected_components(dual_graph(config)))


def mv_of_config(config: NegConfig, rho: int) -> int:
    k = config.k
    if k > rho - 1:
        raise PreconditionError(f"{k} curves in a negative-definite configuration but rho - 1 = {rho - 1}")
    return k + mc_of(config) + (4 if k < rho - 1 else 3)


def intersection_matrix(curves: Sequence[CurveRecord], gram) -> Tuple[Tuple[int, ...], ...]:
    return tuple(tuple(int(bilinear(a.cls, gram, b.cls)) for b in curves) for a in curves)


def mv_upper_bound_via_A2(
    ns: Lattice,
    all_negatives_are_minus2: bool,
    search_bound: int = 6,
    moduli: Sequence[int] = (2, 3, 4),
    max_box: int = 4_000_000,
) -> MvBound:
    """Upper bound on mv(S) for surfaces whose negative curves are all (-2)-curves.

    Two (-2)-curves meeting once span A2, so without an A2 inside NS every
    configuration has mc = 1 and mv ≤ rho + 3.
    """
    if not all_negatives_are_minus2:
        raise PreconditionError("the A2 bound needs every negative curve to be a (-2)-curve")
    rho = ns.rank
    generic = 2 * rho + 1
    verdict = embeds_root(make_root_lattice("A", 2), ns, search_bound, moduli, max_box)
    if verdict.status is EmbeddingStatus.NO:
        return MvBound(min(rho + 3, generic), verdict, f"A2 does not embed (mod {verdict.obstruction.modulus})")
    if verdict.status is EmbeddingStatus.UNKNOWN:
        return MvBound(generic, verdict, "bound not improved: A2 embedding undecided")
    return MvBound(generic, verdict, "A2 embeds")


def mv_surface(
    rho: int,
    curves: Sequence[CurveRecord],
    gram,
    all_negatives_are_minus2: bool = False,
    ns: Optional[Lattice] = None,
    search_bound: int = 6,
    moduli: Sequence[int] = (2, 3, 4),
    max_box: int = 4_000_000,
) -> MvReport:
    """Maximize mv over every negative-definite subset of the listed negative curves.

    Args:
        rho (int): Picard number.
        curves (Sequence[CurveRecord]): Negative irreducible curves.
        gram: NS Gram matrix the curve classes are written in.
        all_negatives_are_minus2 (bool, optional): Assert that the surface has no
            negative curves other than (-2)-curves, enabling the A2 bound.
        ns (Lattice, optional): NS lattice for the A2 bound; built from `gram` if omitted.

    Returns:
        MvReport: The maximum, its witness, and whether a proven upper bound is met.
        Among maximizing subsets the largest one wins, then the lexicographically least.
    """
    if rho < 1:
        raise PreconditionError("rho must be at least 1")
    if len(curves) > MAX_CURVES:
        raise PreconditionError(f"{len(curves)} curves listed, at most {MAX_CURVES} are enumerated")
    for curve in curves:
        actual = int(bilinear(curve.cls, gram, curve.cls))
        if actual != curve.self_intersection:
            raise InconsistentInputError(
                f"curve {curve.label}: recorded square {curve.self_intersection}, Gram gives {actual}"
            )
        if curve.self_intersection >= 0:
            raise PreconditionError(f"curve {curve.label} has square {curve.self_intersection} >= 0, not a negative curve")
        if not curve.irreducible:
            raise PreconditionError(f"curve {curve.label} is not irreducible")

    M = intersection_matrix(curves, gram)
    labels = [c.label for c in curves]

    def restrict(subset: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(M[i][j] for j in subset) for i in subset)

    best: Optional[Tuple[int, Tuple[int, ...]]] = None
    best_key: Tuple[int, int] = (-1, -1)
    stack: List[Tuple[int, ...]] = [()]
    while stack:
        subset = stack.pop()
        config = NegConfig(tuple(labels[i] for i in subset), restrict(subset))
        value = mv_of_config(config, rho)
        # ties in mv go to the larger configuration
        if (value, len(subset)) > best_key:
            best, best_key = (value, subset), (value, len(subset))
        start = subset[-1] + 1 if subset else 0
        # reversed so that pops come out in lexicographic order
        for i in reversed(range(start, len(curves))):
            child = subset + (i,)
            if is_negative_definite(restrict(child)):
                stack.append(child)

    value, subset = best
    witness = NegConfig(tuple(labels[i] for i in subset), restrict(subset))
    generic = 2 * rho + 1
    bound, note = generic, ""
    if all_negatives_are_minus2:
        if ns is None:
            ns = Lattice(gram=tuple(tuple(int(v) for v in row) for row in gram), name="NS")
        a2 = mv_upper_bound_via_A2(ns, True, search_bound, moduli, max_box)
        bound, note = a2.value, a2.note
    if value > bound:
        raise InconsistentInputError(f"mv = {value} exceeds the proven upper bound {bound}")
    logger.debug("mv = %d witnessed by %s", value, witness.labels)
    return MvReport(value, witness, value == bound, bound, note)


def classify_picard(mv: int, has_negative_curve: bool) -> PicardConstraint:
    """Constraint on the Picard number forced by the value of mv(S)."""
    if mv < 3:
        raise PreconditionError(f"mv = {mv} is below the minimum 3")
    if mv == 3:
        if has_negative_curve:
            raise InconsistentInputError("mv = 3 forces rho = 1, which leaves no room for a negative curve")
        return PicardConstraint(rho=1)
    if mv == 4:
        if has_negative_curve:
            raise InconsistentInputError("mv = 4 holds only on surfaces without negative curves")
        return PicardConstraint(rho_at_least=2, no_negative_curves=True)
    if mv == 5 and has_negative_curve:
        return PicardConstraint(rho=2)
    return PicardConstraint(note="no constraint")


def elliptic_picard_constraint(chi: int, mv: int) -> PicardConstraint:
    """Picard constraint on an elliptic surface with a section.

    χ > 0 makes the zero section a negative curve ((O)² = -χ); mv = 4 then
    cannot occur. Elliptic surfaces always have rho ≥ 2.
    """
    if chi < 0:
        raise PreconditionError(f"chi = {chi} is negative")
    if mv == 3:
        raise InconsistentInputError("an elliptic surface with a section has rho >= 2, so mv >= 4")
    if chi > 0:
        if mv == 4:
            raise InconsistentInputError(f"mv = 4 forces chi = 0, got chi = {chi}")
        return classify_picard(mv, True)
    if mv == 4:
        return classify_picard(mv, False)
    return PicardConstraint(note="no constraint: chi = 0 leaves the negative curves undetermined")

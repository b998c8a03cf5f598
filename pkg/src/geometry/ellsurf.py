import logging
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from src.geometry.configmv import CurveRecord
from src.geometry.exactmath import is_negative_definite
from src.geometry.lattice import Lattice, direct_sum, hyperbolic_U, is_even, make_root_lattice, signature
from src.utils.errors import InconsistentInputError, UnsupportedError

logger = logging.getLogger(__name__)

_I_M = re.compile(r"^I_?(\d+)$")


@dataclass(frozen=True)
class FibreSpec:
    kodaira_type: str
    component_count: int
    identity_component_marked: bool = True

    @classmethod
    def parse(cls, text: str) -> "FibreSpec":
        """Accept `I1`, `I2`, `I_5`, ... and `III`."""
        tag = text.strip()
        if tag.upper() == "III":
            return cls("III", 2)
        match = _I_M.match(tag)
        if match and int(match.group(1)) >= 1:
            m = int(match.group(1))
            return cls(f"I{m}", m)
        raise UnsupportedError(f"fibre type {text!r} is not supported (only I_m, m >= 1, and III)")

    @property
    def reducible(self) -> bool:
        return self.component_count > 1

    @property
    def euler_number(self) -> int:
        return 3 if self.kodaira_type == "III" else self.component_count

    def root_block(self) -> Lattice:
        """The A_{m-1} block spanned by the components off the identity component."""
        return make_root_lattice("A", self.component_count - 1)


@dataclass(frozen=True)
class SectionData:
    label: str
    pairing_with_zero: int
    pairings: Dict[str, int] = field(default_factory=dict)
    torsion: bool = False


@dataclass(frozen=True)
class EllipticSurfaceSpec:
    chi: int
    base_genus: int = 0
    fibres: Tuple[FibreSpec, ...] = ()
    sections: Tuple[SectionData, ...] = ()
    declared_rho: Optional[int] = None

    @property
    def reducible_fibres(self) -> List[FibreSpec]:
        return [f for f in self.fibres if f.reducible]


@dataclass
class NSModel:
    lattice: Lattice
    distinguished: Dict[str, Tuple[int, ...]]
    chi: int
    spec: EllipticSurfaceSpec

    @property
    def rho(self) -> int:
        return self.lattice.rank

    def dot(self, a: str, b: str) -> int:
        return self.lattice.dot(self.distinguished[a], self.distinguished[b])

    def curve_records(self) -> List[CurveRecord]:
        """(O), F, every fibre component and every section as curve records."""
        return [
            CurveRecord.from_class(label, cls, self.lattice.gram)
            for label, cls in self.distinguished.items()
        ]

    def negative_curve_records(self) -> List[CurveRecord]:
        return [c for c in self.curve_records() if c.negative]


def trivial_lattice_rank(spec: EllipticSurfaceSpec) -> int:
    return 2 + sum(f.component_count - 1 for f in spec.reducible_fibres)


def shioda_tate_rank(rho: int, spec: EllipticSurfaceSpec) -> int:
    """Mordell-Weil rank r from rho = r + 2 + Σ (m_ν - 1)."""
    trivial = trivial_lattice_rank(spec)
    if rho < trivial:
        raise InconsistentInputError(f"rho = {rho} is smaller than the trivial lattice rank {trivial}")
    return rho - trivial


def _pair(P: SectionData, Q: SectionData) -> int:
    forward, backward = P.pairings.get(Q.label), Q.pairings.get(P.label)
    if forward is None and backward is None:
        raise InconsistentInputError(f"no intersection number given for sections {P.label} and {Q.label}")
    if forward is not None and backward is not None and forward != backward:
        raise InconsistentInputError(f"({P.label})·({Q.label}) given as both {forward} and {backward}")
    return forward if forward is not None else backward


def height_pairing(P: SectionData, Q: SectionData, spec: EllipticSurfaceSpec) -> Rational:
    """Height pairing with every local fibre contribution zero.

    ⟨P, P⟩ = 2χ + 2(P)·(O) and ⟨P, Q⟩ = χ + (P)·(O) + (Q)·(O) - (P)·(Q).
    """
    if spec.reducible_fibres:
        raise UnsupportedError("height pairing with reducible fibres needs local contributions")
    chi = spec.chi
    if P.label == Q.label:
        return Rational(2 * chi + 2 * P.pairing_with_zero)
    return Rational(chi + P.pairing_with_zero + Q.pairing_with_zero - _pair(P, Q))


def section_class(P: SectionData, spec: EllipticSurfaceSpec, ns: NSModel) -> Tuple[int, ...]:
    """(P) = D_P + (O) + ((P)·(O) + χ)·F in the basis of `ns`."""
    if spec.reducible_fibres:
        raise UnsupportedError("section classes with reducible fibres need local contributions")
    D_P = ns.distinguished[f"D_{P.label}"]
    O, F = ns.distinguished["O"], ns.distinguished["F"]
    k = P.pairing_with_zero + spec.chi
    return tuple(d + o + k * f for d, o, f in zip(D_P, O, F))


def _unit(n: int, i: int) -> Tuple[int, ...]:
    return tuple(1 if j == i else 0 for j in range(n))


def _trivial_block(chi: int) -> Tuple[Lattice, Tuple[int, int], Tuple[int, int]]:
    """Zero section and fibre lattice; returns the block with the coordinates of (O) and F.

    For even χ the basis {(O) + χ/2·F, F} is a copy of U.
    """
    if chi % 2 == 0:
        block = Lattice(gram=hyperbolic_U().gram, labels=("U_e", "U_f"), name="U")
        return block, (1, -(chi // 2)), (0, 1)
    block = Lattice(gram=((-chi, 1), (1, 0)), labels=("O", "F"), name="<O,F>")
    return block, (1, 0), (0, 1)


def _pad(coords: Sequence[int], n: int) -> Tuple[int, ...]:
    return tuple(coords) + (0,) * (n - len(coords))


def build_ns(spec: EllipticSurfaceSpec) -> NSModel:
    """Néron-Severi lattice NS = Triv ⊕ MWL⁻ of an elliptic surface.

    Two situations are handled: Mordell-Weil rank 0 with any I_m / III fibres,
    or no reducible fibres with torsion-free sections.

    Args:
        spec (EllipticSurfaceSpec): Fibration data.

    Returns:
        NSModel: Lattice plus the classes of (O), F, fibre components and sections.
    """
    if spec.chi < 0:
        raise InconsistentInputError(f"chi = {spec.chi} is negative")
    if spec.base_genus < 0:
        raise InconsistentInputError(f"base genus {spec.base_genus} is negative")
    euler = sum(f.euler_number for f in spec.fibres)
    if euler > 12 * spec.chi:
        raise InconsistentInputError(f"singular fibres have Euler number {euler} > 12 chi = {12 * spec.chi}")
    if any(not f.identity_component_marked for f in spec.reducible_fibres):
        raise UnsupportedError("reducible fibres must have the component meeting (O) marked")
    if any(s.torsion for s in spec.sections):
        raise UnsupportedError("torsion sections are not supported")
    reducible = spec.reducible_fibres
    if reducible and spec.sections:
        raise UnsupportedError("reducible fibres together with sections of positive rank are not supported")
    r = len(spec.sections)
    rho = trivial_lattice_rank(spec) + r
    if spec.declared_rho is not None and shioda_tate_rank(spec.declared_rho, spec) != r:
        raise InconsistentInputError(
            f"declared rho = {spec.declared_rho} gives Mordell-Weil rank "
            f"{shioda_tate_rank(spec.declared_rho, spec)} but {r} sections were supplied"
        )
    # h^{1,1} = 10 chi + 2q, and q = g except for chi = 0 where it may be g + 1
    h11 = 10 * spec.chi + 2 * spec.base_genus + (2 if spec.chi == 0 else 0)
    if rho > h11:
        raise InconsistentInputError(f"rho = {rho} exceeds h^(1,1) <= {h11} over a base of genus {spec.base_genus}")

    lattice, O_coords, F_coords = _trivial_block(spec.chi)
    theta_blocks = []
    for nu, fibre in enumerate(reducible, start=1):
        block = fibre.root_block()
        block = Lattice(
            gram=block.gram,
            labels=tuple(f"Theta{nu}_{j}" for j in range(1, fibre.component_count)),
            name=block.name,
        )
        theta_blocks.append((nu, fibre, lattice.rank))
        lattice = direct_sum(lattice, block)

    sections = list(spec.sections)
    if sections:
        heights = Matrix(len(sections), len(sections), lambda i, j: height_pairing(sections[i], sections[j], spec))
        if not is_negative_definite(-heights):
            raise InconsistentInputError("height pairing is not positive definite: the sections are dependent")
        mwl = Lattice(
            gram=tuple(tuple(int(-heights[i, j]) for j in range(len(sections))) for i in range(len(sections))),
            labels=tuple(f"D_{s.label}" for s in sections),
            name="MWL-",
        )
        offset = lattice.rank
        lattice = direct_sum(lattice, mwl)
    lattice = Lattice(gram=lattice.gram, labels=lattice.labels, name="NS")

    n = lattice.rank
    distinguished: Dict[str, Tuple[int, ...]] = {"O": _pad(O_coords, n), "F": _pad(F_coords, n)}
    F = distinguished["F"]
    for nu, fibre, offset_nu in theta_blocks:
        components = [_unit(n, offset_nu + j) for j in range(fibre.component_count - 1)]
        theta0 = tuple(f - sum(c[i] for c in components) for i, f in enumerate(F))
        distinguished[f"Theta{nu}_0"] = theta0
        for j, c in enumerate(components, start=1):
            distinguished[f"Theta{nu}_{j}"] = c
    ns = NSModel(lattice, distinguished, spec.chi, spec)
    for k, s in enumerate(sections):
        distinguished[f"D_{s.label}"] = _unit(n, offset + k)
    for s in sections:
        distinguished[s.label] = section_class(s, spec, ns)
    for s in sections:
        del distinguished[f"D_{s.label}"]

    _check_ns(ns, rho)
    logger.debug("built NS of rank %d for chi = %d", rho, spec.chi)
    return ns


def _check_ns(ns: NSModel, rho: int) -> None:
    spec = ns.spec
    failures = []
    if ns.dot("O", "O") != -spec.chi:
        failures.append(f"(O)^2 = {ns.dot('O', 'O')}, expected {-spec.chi}")
    if ns.dot("O", "F") != 1:
        failures.append("(O)·F != 1")
    if ns.dot("F", "F") != 0:
        failures.append("F^2 != 0")
    for nu, fibre in enumerate(spec.reducible_fibres, start=1):
        total = [0] * ns.rho
        for j in range(fibre.component_count):
            total = [a + b for a, b in zip(total, ns.distinguished[f"Theta{nu}_{j}"])]
        if tuple(total) != ns.distinguished["F"]:
            failures.append(f"components of fibre {nu} do not sum to F")
    for s in spec.sections:
        if ns.dot(s.label, "O") != s.pairing_with_zero:
            failures.append(f"({s.label})·(O) = {ns.dot(s.label, 'O')}, expected {s.pairing_with_zero}")
        if ns.dot(s.label, s.label) != -spec.chi:
            failures.append(f"({s.label})^2 = {ns.dot(s.label, s.label)}, expected {-spec.chi}")
        for t in spec.sections:
            if t.label != s.label and ns.dot(s.label, t.label) != _pair(s, t):
                failures.append(f"({s.label})·({t.label}) = {ns.dot(s.label, t.label)}, expected {_pair(s, t)}")
    if ns.rho != rho:
        failures.append(f"rank {ns.rho}, expected rho = {rho}")
    sig = signature(ns.lattice)
    if (sig.n_plus, sig.n_minus, sig.n_zero) != (1, rho - 1, 0):
        failures.append(f"signature {tuple(sig)}, expected (1, {rho - 1}, 0)")
    if spec.chi % 2 == 0 and not is_even(ns.lattice):
        failures.append("lattice is odd although chi is even")
    if failures:
        raise InconsistentInputError("; ".join(failures))

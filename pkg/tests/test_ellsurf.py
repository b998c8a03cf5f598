import pytest
from sympy import Rational

from src.geometry.ellsurf import (
    EllipticSurfaceSpec,
    FibreSpec,
    SectionData,
    build_ns,
    height_pairing,
    section_class,
    shioda_tate_rank,
    trivial_lattice_rank,
)
from src.geometry.lattice import lattice_from_name, signature
from src.utils.errors import InconsistentInputError, UnsupportedError

S1 = EllipticSurfaceSpec(chi=2, fibres=(FibreSpec.parse("I2"),), declared_rho=3)
S2 = EllipticSurfaceSpec(
    chi=2,
    sections=(SectionData("P", 0, {"Q": 0}), SectionData("Q", 0)),
    declared_rho=4,
)


def test_fibre_parsing():
    assert FibreSpec.parse("I2") == FibreSpec("I2", 2)
    assert FibreSpec.parse("I_5").component_count == 5
    assert FibreSpec.parse("III").root_block().gram == ((-2,),)
    assert not FibreSpec.parse("I1").reducible
    for bad in ("I0*", "II", "I0", "IV"):
        with pytest.raises(UnsupportedError):
            FibreSpec.parse(bad)


def test_shioda_tate():
    assert shioda_tate_rank(3, S1) == 0
    assert shioda_tate_rank(4, S2) == 2
    spec = EllipticSurfaceSpec(chi=2, fibres=(FibreSpec.parse("I2"), FibreSpec.parse("I3")))
    assert trivial_lattice_rank(spec) == 5
    with pytest.raises(InconsistentInputError):
        shioda_tate_rank(4, spec)


def test_ns_of_s1():
    ns = build_ns(S1)
    assert ns.lattice.labels == ("U_e", "U_f", "Theta1_1")
    assert ns.lattice.gram == lattice_from_name("U+A1").gram
    assert ns.distinguished == {
        "O": (1, -1, 0),
        "F": (0, 1, 0),
        "Theta1_0": (0, 1, -1),
        "Theta1_1": (0, 0, 1),
    }
    assert ns.dot("O", "O") == -2
    assert ns.dot("O", "Theta1_0") == 1
    assert ns.dot("Theta1_0", "Theta1_1") == 2
    assert [c.label for c in ns.negative_curve_records()] == ["O", "Theta1_0", "Theta1_1"]


def test_ns_of_s2():
    ns = build_ns(S2)
    assert ns.lattice.gram == ((0, 1, 0, 0), (1, 0, 0, 0), (0, 0, -4, -2), (0, 0, -2, -4))
    assert signature(ns.lattice) == (1, 3, 0)
    for a, b, expected in [("P", "P", -2), ("Q", "Q", -2), ("P", "Q", 0), ("P", "O", 0), ("P", "F", 1)]:
        assert ns.dot(a, b) == expected
    assert [c.label for c in ns.curve_records()] == ["O", "F", "P", "Q"]


def test_height_pairing_of_s2():
    P, Q = S2.sections
    assert height_pairing(P, P, S2) == 4
    assert height_pairing(Q, Q, S2) == 4
    assert height_pairing(P, Q, S2) == 2
    assert height_pairing(Q, P, S2) == Rational(2)


def test_height_pairing_needs_irreducible_fibres():
    with pytest.raises(UnsupportedError):
        height_pairing(SectionData("P", 0), SectionData("P", 0), S1)


def test_odd_chi_uses_zero_section_and_fibre():
    ns = build_ns(EllipticSurfaceSpec(chi=1))
    assert ns.lattice.labels == ("O", "F")
    assert ns.lattice.gram == ((-1, 1), (1, 0))
    assert ns.dot("O", "O") == -1


def test_inconsistent_fibrations():
    with pytest.raises(InconsistentInputError):
        build_ns(EllipticSurfaceSpec(chi=2, fibres=(FibreSpec.parse("I3"),), declared_rho=3))
    dependent = EllipticSurfaceSpec(chi=1, sections=(SectionData("P", 0, {"Q": 3}), SectionData("Q", 0)))
    with pytest.raises(InconsistentInputError):
        build_ns(dependent)
    with pytest.raises(InconsistentInputError):
        build_ns(EllipticSurfaceSpec(chi=-1))
    with pytest.raises(UnsupportedError):
        build_ns(EllipticSurfaceSpec(chi=2, sections=(SectionData("T", 0, torsion=True),)))


def test_section_classes():
    ns = build_ns(S2)
    assert ns.distinguished["P"] == (1, 1, 1, 0)
    assert ns.distinguished["Q"] == (1, 1, 0, 1)
    with pytest.raises(UnsupportedError):
        section_class(SectionData("P", 0), S1, build_ns(S1))


def test_fibration_bounds_from_chi_and_base_genus():
    with pytest.raises(InconsistentInputError, match="base genus"):
        build_ns(EllipticSurfaceSpec(chi=2, base_genus=-1))
    with pytest.raises(InconsistentInputError, match="Euler number"):
        build_ns(EllipticSurfaceSpec(chi=1, fibres=(FibreSpec.parse("I_13"),)))
    rational = EllipticSurfaceSpec(chi=1, fibres=tuple(FibreSpec.parse("I2") for _ in range(6)))
    assert build_ns(rational).rho == 8
    sections = tuple(SectionData(f"P{i}", 0, {f"P{j}": 0 for j in range(i + 1, 9)}) for i in range(9))
    with pytest.raises(InconsistentInputError, match="h\\^\\(1,1\\)"):
        build_ns(EllipticSurfaceSpec(chi=1, sections=sections))
    assert build_ns(EllipticSurfaceSpec(chi=1, base_genus=1, sections=sections)).rho == 11


def test_unmarked_identity_component_is_rejected():
    with pytest.raises(UnsupportedError, match="meeting"):
        build_ns(EllipticSurfaceSpec(chi=2, fibres=(FibreSpec("I2", 2, identity_component_marked=False),)))
    irreducible = EllipticSurfaceSpec(chi=2, fibres=(FibreSpec("I1", 1, identity_component_marked=False),))
    assert build_ns(irreducible).rho == 2

import pytest

from scripts.abelian import AbelianType, abelian_invariants
from scripts.errors import NotAbelian
from scripts.fpgroup import center, derived_subgroup


@pytest.mark.parametrize(
    "text, factors, rendered",
    [
        ("C4xC2", (2, 4), "C4xC2"),
        ("C2xC4", (2, 4), "C4xC2"),
        ("C2xC2xC2", (2, 2, 2), "(C2)^3"),
        ("(C2)^3", (2, 2, 2), "(C2)^3"),
        ("C4x(C2)^2", (2, 2, 4), "C4xC2xC2"),
        ("C16xC2", (2, 16), "C16xC2"),
        ("1", (), "1"),
    ],
)
def test_parse_and_render(text, factors, rendered):
    t = AbelianType.parse(text)
    assert t.factors == factors
    assert t.render() == rendered
    assert str(t) == rendered


def test_from_cyclic_orders_normalises():
    assert AbelianType.from_cyclic_orders([2, 3]).factors == (6,)
    assert AbelianType.from_cyclic_orders([4, 2, 8]) == AbelianType.parse("C8xC4xC2")


def test_properties():
    t = AbelianType.parse("C8xC2")
    assert t.order == 16
    assert t.exponent == 8
    assert t.rank == 2
    assert not t.is_cyclic()
    assert AbelianType.parse("C8").is_cyclic()


def test_bad_factors():
    with pytest.raises(ValueError):
        AbelianType((4, 2))
    with pytest.raises(ValueError):
        AbelianType.parse("D8")


def test_invariants_of_files(group):
    assert abelian_invariants(group("c4xc2")) == AbelianType.parse("C4xC2")
    assert str(abelian_invariants(group("elementary256"))) == "(C2)^8"
    assert str(abelian_invariants(derived_subgroup(group("dihedral16")))) == "C4"
    assert str(abelian_invariants(center(group("heisenberg27")))) == "C3"


def test_nonabelian_input(group):
    with pytest.raises(NotAbelian):
        abelian_invariants(group("dihedral8"))

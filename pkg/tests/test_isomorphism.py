from itertools import combinations

import pytest

from scripts.abelian import abelian_invariants
from scripts.fpgroup import derived_subgroup, group_from_generators, is_abelian, subgroup_generated
from scripts.isomorphism import greedy_generators, invariant_screen, is_isomorphic
from scripts.perm import parse_cycles


def _from_cycles(*cycles, degree=10):
    return group_from_generators([parse_cycles(c, degree) for c in cycles])


def test_dihedral_vs_quaternion(group):
    D8, Q8 = group("dihedral8"), group("quaternion8")
    assert not is_isomorphic(D8, Q8)
    assert is_isomorphic(D8, D8)
    # same order and exponent, different histograms
    assert invariant_screen(D8) != invariant_screen(Q8)


def test_file_groups_match_catalog_entries(group, small, order32):
    assert is_isomorphic(group("dihedral8"), small.get("S(8,3)").group)
    assert is_isomorphic(group("quaternion8"), small.get("S(8,4)").group)
    assert is_isomorphic(group("dihedral16"), small.get("S(16,7)").group)
    assert is_isomorphic(group("dihedral32"), order32.get("S(32,18)").group)
    assert not is_isomorphic(group("dihedral16"), small.get("S(16,8)").group)


def test_subgroups_compare_as_groups(group):
    D = derived_subgroup(group("dihedral16"))
    A = group("c4xc2")
    four = next(g for g in A.generators if A.element_orders[g] == 4)
    assert is_isomorphic(D, subgroup_generated(A, [four]))
    assert not is_isomorphic(D, A)


def test_greedy_generators_generate(order32):
    for gid in ("S(32,2)", "S(32,17)", "S(32,49)"):
        G = order32.get(gid).group
        assert subgroup_generated(G, greedy_generators(G)).order == 32


def test_c4xc4_vs_c8xc2():
    A = _from_cycles("(1,2,3,4)", "(5,6,7,8)")
    B = _from_cycles("(1,2,3,4,5,6,7,8)", "(9,10)")
    assert A.order == B.order == 16
    assert not is_isomorphic(A, B)
    assert not is_isomorphic(B, A)
    assert is_isomorphic(A, _from_cycles("(1,2,3,4)(5,6,7,8)", "(5,6,7,8)"))


@pytest.mark.parametrize("order", [8, 16])
def test_symmetric_and_matches_abelian_invariants(small, order):
    groups = [e.group for e in small if e.group.order == order]
    for a, b in combinations(groups, 2):
        forward = is_isomorphic(a, b)
        assert forward == is_isomorphic(b, a)
        if is_abelian(a) and is_abelian(b):
            assert forward == (abelian_invariants(a) == abelian_invariants(b))
    for a in groups:
        assert is_isomorphic(a, a)

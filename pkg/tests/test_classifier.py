import pytest

from scripts.classifier import (
    Atom,
    StructuralProfile,
    canonical,
    match_k14,
    match_k15,
    match_table,
    parse_atom,
    parse_term,
    row_holds,
    structural_profile,
    verify_biconditional,
)
from scripts.errors import NotLieNilpotent


def _profile_for(row, p, *, augmented=False):
    """Smallest synthetic profile that satisfies every atom of a case row."""
    terms, inclusions, equalities = {}, [], []
    atoms = row.atoms + (row.augmented_atoms if augmented else ())
    for atom in atoms:
        if atom.kind == "iso":
            terms[atom.left] = atom.right
        elif atom.kind == "order":
            terms[atom.left] = int(atom.right)
        elif atom.kind == "sub":
            inclusions.append((atom.left, atom.right))
        else:
            equalities.append((atom.left, atom.right))
    return StructuralProfile.synthetic(p, row.derived[0], terms, inclusions, equalities, label=row.case_id)


# ── Term language ─────────────────────────────────────────────────────────────

def test_parse_term_precedence():
    assert parse_term("G'^2 & g3") == ("meet", ("pow", ("base", "G'"), 2), ("base", "g3"))
    assert parse_term("g3^2*G'^4 & g4") == (
        "meet",
        ("join", ("pow", ("base", "g3"), 2), ("pow", ("base", "G'"), 4)),
        ("base", "g4"),
    )


def test_canonical_spelling():
    assert canonical(" G'^2&g3 ") == "G'^2 & g3"
    assert canonical("(g3*g4)^2") == "(g3*g4)^2"
    assert canonical("(g3^2 * G'^4)") == "g3^2*G'^4"


@pytest.mark.parametrize("text", ["g7", "G'^", "(g3", "g3 g4", "G'^0"])
def test_bad_terms(text):
    with pytest.raises(ValueError):
        parse_term(text)


def test_parse_atom():
    assert parse_atom("g4 <= G'^4") == Atom("sub", "g4", "G'^4")
    assert parse_atom("G'^4 == g3^2") == Atom("eq", "G'^4", "g3^2")
    assert parse_atom("g3 ~ C2xC8") == Atom("iso", "g3", "C8xC2")
    assert parse_atom("|G'^2&g3| = 2") == Atom("order", "G'^2 & g3", "2")
    assert parse_atom("|g3| = 4").render() == "|g3| = 4"
    with pytest.raises(ValueError):
        parse_atom("g3 > g4")


# ── Case tables ───────────────────────────────────────────────────────────────

def test_tables_load(case_tables):
    assert set(case_tables) == {"K14", "K15_P2", "K15_P17"}
    assert case_tables["K14"].k == 14
    assert [r.case_id for r in case_tables["K14"].rows][:3] == ["i", "ii(a)", "ii(b)"]
    assert len({r.case for r in case_tables["K14"].rows}) == 13
    assert len({r.case for r in case_tables["K15_P2"].rows}) == 20
    assert case_tables["K15_P17"].p == 17


@pytest.mark.parametrize("name", ["K14", "K15_P2", "K15_P17"])
def test_every_row_matches_its_own_profile(case_tables, name):
    table = case_tables[name]
    for row in table.rows:
        profile = _profile_for(row, table.p)
        assert row_holds(profile, row), row.case_id
        assert match_table(profile, table) is not None


def test_k14_case_i(case_tables):
    profile = StructuralProfile.synthetic(
        2, "C16xC2", {"g3": "C8xC2"}, inclusions=[("G'^2", "g3"), ("g4", "g3^2")]
    )
    match = match_k14(profile, case_tables)
    assert match.theorem == "K14"
    assert match.case == "i"
    assert match.matched_atoms == ("G'^2 <= g3", "g3 ~ C8xC2", "g4 <= g3^2")
    assert match.overlaps == ()


def test_derived_type_selects_the_row(case_tables):
    profile = StructuralProfile.synthetic(
        2, "C8xC4", {"g3": "C8xC2"}, inclusions=[("G'^2", "g3"), ("g4", "g3^2")]
    )
    assert match_k14(profile, case_tables).case == "v"
    profile.derived = "C4xC4"
    assert match_k14(profile, case_tables) is None


def test_trivial_term_is_inside_everything():
    profile = StructuralProfile.synthetic(2, "C16xC2", {"g5": 1})
    assert profile.includes("g5", "g3^2")
    assert not profile.includes("g3", "g5")


def test_k15_augmented_case_v(case_tables):
    (row,) = [r for r in case_tables["K15_P2"].rows if r.case == "v"]
    plain = _profile_for(row, 2)
    assert match_k15(plain, tables=case_tables).case == "v"
    assert match_k15(plain, tables=case_tables, augmented=True) is None
    full = _profile_for(row, 2, augmented=True)
    assert match_k15(full, tables=case_tables, augmented=True).case == "v"


def test_k15_routes_by_characteristic(case_tables):
    p17 = StructuralProfile.synthetic(17, "C17xC17", {"g3": "C17"})
    match = match_k15(p17, tables=case_tables)
    assert (match.theorem, match.case) == ("K15_P17", "i")
    p3 = StructuralProfile.synthetic(3, "C17xC17", {"g3": "C17"})
    assert match_k15(p3, tables=case_tables) is None
    assert match_k14(p17, case_tables) is None


def test_consistency_issues():
    profile = StructuralProfile.synthetic(2, "C16xC2", {"G'": "C16xC2", "g3": "C8", "g4": 3})
    issues = profile.consistency_issues()
    assert "g4 not inside g3" in issues
    assert "|g4| = 3 does not divide |G'| = 32" in issues


# ── Real groups ───────────────────────────────────────────────────────────────

def test_structural_profile_of_dihedral16(group):
    profile = structural_profile(group("dihedral16"), 2)
    assert profile.derived == "C4"
    assert profile.order("G'") == 4
    assert profile.order("g3") == 2
    assert profile.order("g4") == 1
    assert profile.includes("g3", "G'")
    assert profile.consistency_issues() == []
    assert profile.to_dict()["terms"]["g3"] == {"order": 2, "type": "C2"}


def test_small_groups_fall_outside_every_case(group, case_tables):
    report = verify_biconditional(group("dihedral32"), 2, 14, tables=case_tables)
    assert report.matched_case is None
    assert report.consistent
    assert report.dseq_consistent is None
    assert report.target == 8 - 14 + 1
    assert report.to_dict()["d_seq"] == {"2": 1, "3": 1, "5": 1}

    report = verify_biconditional(group("heisenberg27"), 3, 15, tables=case_tables)
    assert report.matched_case is None
    assert report.consistent


def test_bad_inputs(group, case_tables):
    with pytest.raises(ValueError):
        verify_biconditional(group("dihedral8"), 2, 13, tables=case_tables)
    with pytest.raises(NotLieNilpotent):
        verify_biconditional(group("s3"), 2, 14, tables=case_tables)


@pytest.mark.slow
@pytest.mark.parametrize(
    "name, k, theorem, case",
    [
        ("k14_order512", 14, "K14", "ii(a)"),
        ("k15_order256", 15, "K15_P2", "i"),
        ("k15_order256_c8xc4", 15, "K15_P2", "xii"),
    ],
)
def test_fixture_groups(group, order32, case_tables, name, k, theorem, case):
    report = verify_biconditional(group(name), 2, k, order32, tables=case_tables)
    assert report.matched_case is not None
    assert (report.matched_case.theorem, report.matched_case.case) == (theorem, case)
    assert report.t_upper == report.target
    assert report.consistent
    assert report.dseq_consistent

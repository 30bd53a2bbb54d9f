import random
from fractions import Fraction

import pytest

from qhs.exact import DomainError, ExactMatrix, IncompatibleOracleError, ScaledScalar
from qhs.frobenius import frobenius_to_fix, frobenius_to_hom
from qhs.oracle import OracleGroup, OracleRealization, dual_z2
from qhs.partitions import CategorySpec, parse_partition, partition_vector
from qhs.relations import (
    Relation,
    med_spans_max,
    parse_relation_system,
    relations_hom,
    relations_max,
    relations_med,
    verify_relations,
)
from qhs.weingarten import IndexSet

S4 = CategorySpec("S", 4)
S3 = CategorySpec("S", 3)
I12_4 = IndexSet.parse("1,2", 4)


def test_frobenius_identity_gives_duality_vector():
    T = ExactMatrix.identity(3)
    xi, word = frobenius_to_fix(T, "o", "o", 3)
    assert word == "ob"
    assert xi.entries == partition_vector(parse_partition("12"), 3).entries


def test_frobenius_row_reverses_indices():
    T = ExactMatrix(1, 4, (1, 2, 3, 4))
    xi, word = frobenius_to_fix(T, "oo", "", 2)
    assert word == "bb"
    # index (j1, j2) of T lands at (j2, j1)
    assert xi.entries == (1, 3, 2, 4)


def test_frobenius_of_diagonal_vector_is_identity_matrix():
    xi = partition_vector(parse_partition("12"), 3)
    assert frobenius_to_hom(xi, "o", "o", 3) == ExactMatrix.identity(3)


def test_frobenius_roundtrip_random():
    rng = random.Random(4242)
    for n in (2, 3):
        for k_len, l_len in ((0, 2), (1, 1), (2, 1), (2, 2)):
            for _ in range(25):
                entries = [rng.randrange(0, 2) for _ in range(n ** (k_len + l_len))]
                T = ExactMatrix(n**l_len, n**k_len, entries)
                xi, _ = frobenius_to_fix(T, "o" * k_len, "o" * l_len, n)
                assert frobenius_to_hom(xi, "o" * k_len, "o" * l_len, n) == T


def test_frobenius_roundtrip_at_full_depth():
    # module contract runs to k+l = 6 at N <= 4
    rng = random.Random(977)
    for n in (2, 4):
        for k_len in range(7):
            for l_len in range(7 - k_len):
                if k_len + l_len < 5:
                    continue
                kw = "".join(rng.choice("ob") for _ in range(k_len))
                lw = "".join(rng.choice("ob") for _ in range(l_len))
                entries = [rng.randrange(-2, 3) for _ in range(n ** (k_len + l_len))]
                T = ExactMatrix(n**l_len, n**k_len, entries)
                xi, word = frobenius_to_fix(T, kw, lw, n)
                assert len(word) == k_len + l_len
                assert frobenius_to_hom(xi, kw, lw, n) == T


def test_frobenius_shape_mismatch():
    with pytest.raises(DomainError):
        frobenius_to_fix(ExactMatrix.identity(3), "oo", "o", 3)


def test_med_first_relation_is_row_sum():
    system = relations_med(S4, I12_4, 2)
    first = system.relations[0]
    assert first.left_word == "o" and first.right_word == ""
    assert first.coefficients.entries == (1, 1, 1, 1)
    assert first.rhs == ScaledScalar(Fraction(2), 1, 2)  # sqrt(2)


def test_med_unit_length_relation_for_o_family():
    system = relations_med(CategorySpec("O", 3), IndexSet.parse("1", 3), 2)
    assert [r.left_word for r in system.relations] == ["oo"]
    rel = system.relations[0]
    assert rel.coefficients.entries == partition_vector(parse_partition("12"), 3).entries
    assert rel.rhs == 1


def test_trivial_systems_at_zero_bounds():
    for build in (
        lambda: relations_med(S4, I12_4, 0),
        lambda: relations_max(S4, I12_4, 0),
        lambda: relations_hom(S4, I12_4, 0, 0),
    ):
        system = build()
        assert len(system.relations) == 1
        rel = system.relations[0]
        assert rel.left_word == rel.right_word == ""
        assert rel.coefficients.entries == (1,)
        assert rel.rhs == 1


def test_max_row_relation_values():
    system = relations_max(S4, I12_4, 1)
    rel = system.relations[0]
    assert rel.left_word == "o"
    assert all(x == Fraction(1, 4) for x in rel.coefficients.entries)
    assert rel.rhs == ScaledScalar(Fraction(1, 2), 1, 2)  # sqrt(2)/4


def test_max_row_count_o3():
    system = relations_max(CategorySpec("O", 3), IndexSet.parse("1", 3), 2)
    counts = {}
    for rel in system.relations:
        counts[rel.left_word] = counts.get(rel.left_word, 0) + 1
    assert counts == {"o": 3, "oo": 9}


def test_hom_unit_relation():
    system = relations_hom(S4, I12_4, 1, 1)
    pairs = [(r.left_word, r.right_word) for r in system.relations]
    assert ("o", "o") in pairs
    for rel in system.relations:
        if (rel.left_word, rel.right_word) == ("o", "o") and rel.coefficients.is_identity():
            assert rel.rhs == 1
            break
    else:
        pytest.fail("identity intertwiner relation missing")


def test_hom_all_ones_relation_s3():
    I1 = IndexSet.parse("1", 3)
    system = relations_hom(S3, I1, 1, 1)
    ones = [
        r
        for r in system.relations
        if (r.left_word, r.right_word) == ("o", "o")
        and all(x == 1 for x in r.coefficients.entries)
    ]
    assert len(ones) == 1
    assert ones[0].rhs == 1


def test_hom_with_empty_right_side_equals_med():
    med = relations_med(S4, I12_4, 2)
    hom = relations_hom(S4, I12_4, 0, 2)
    med_payload = [r.to_json() for r in med.relations]
    hom_payload = [r.to_json() for r in hom.relations]
    assert med_payload == hom_payload


def test_rhs_recomputable_invariant():
    for system in (
        relations_med(S4, I12_4, 2),
        relations_max(S4, I12_4, 2),
        relations_hom(S4, I12_4, 2, 1),
    ):
        for rel in system.relations:
            assert rel.recompute_rhs(system.I) == rel.rhs


def test_verify_relations_all_forms_pass_on_oracle():
    real = OracleRealization(OracleGroup.symmetric(4), I12_4)
    for system in (
        relations_med(S4, I12_4, 3),
        relations_max(S4, I12_4, 2),
        relations_hom(S4, I12_4, 2, 1),
    ):
        report = verify_relations(system, real)
        assert report["passed"], report


def test_verify_relations_hom_s3_full_index_set():
    I = IndexSet.parse("1,2,3", 3)
    real = OracleRealization(OracleGroup.symmetric(3), I)
    report = verify_relations(relations_hom(S3, I, 2, 2), real)
    assert report["passed"]


def test_verify_relations_on_dual_realization():
    z2 = dual_z2(2)
    I1 = IndexSet.parse("1", 2)
    spec = CategorySpec("U+", 2)
    real = OracleRealization(z2, I1)
    report = verify_relations(relations_med(spec, I1, 2), real)
    assert report["passed"]


def test_verify_relations_across_families_on_signed_permutations():
    # signed permutations are orthogonal and unitary, so the O- and
    # U-category relations must hold on that oracle as well
    from qhs.oracle import OracleGroup as OG

    I = IndexSet.parse("1", 3)
    real = OracleRealization(OG.hyperoctahedral(3), I)
    for spec in (CategorySpec("O", 3), CategorySpec("U", 3), CategorySpec("O+", 3)):
        report = verify_relations(relations_med(spec, I, 2), real)
        assert report["passed"], str(spec)
        report = verify_relations(relations_hom(spec, I, 1, 1), real)
        assert report["passed"], str(spec)


def test_corrupted_relation_fails_with_witness():
    system = relations_med(S4, I12_4, 1)
    rel = system.relations[0]
    bad_entries = list(rel.coefficients.entries)
    bad_entries[0] += 1
    bad = Relation(
        rel.left_word,
        rel.right_word,
        ExactMatrix(rel.coefficients.rows, 1, bad_entries),
        rel.rhs,
    )
    broken = type(system)(system.spec, system.I, system.provenance, (bad,))
    report = verify_relations(broken, OracleRealization(OracleGroup.symmetric(4), I12_4))
    assert not report["passed"]
    assert "witness" in report["relations"][0]


def test_incompatible_oracle_rejected():
    real = OracleRealization(OracleGroup.hyperoctahedral(4), I12_4)
    with pytest.raises(IncompatibleOracleError):
        verify_relations(relations_med(S4, I12_4, 1), real)
    real3 = OracleRealization(OracleGroup.symmetric(3), IndexSet.parse("1,2", 3))
    with pytest.raises(IncompatibleOracleError):
        verify_relations(relations_med(S4, I12_4, 1), real3)


def test_med_spans_max():
    report = med_spans_max(S4, I12_4, 3)
    assert report["passed"]
    assert all(entry["contained"] for entry in report["words"])


def test_relation_system_json_roundtrip():
    system = relations_hom(S4, I12_4, 1, 1)
    data = system.to_json()
    back = parse_relation_system(data)
    assert back.to_json() == data

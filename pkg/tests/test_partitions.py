import pytest
from hypothesis import given, strategies as st

from qhs.exact import ParseError
from qhs.partitions import (
    CategorySpec,
    SetPartition,
    all_partitions,
    conjugate_word,
    enumerate_category,
    fix_basis,
    format_partition,
    parse_partition,
    partition_vector,
    select_basis,
)

words = st.text(alphabet="ob", max_size=8)


@given(words)
def test_conjugation_is_an_involution(word):
    assert conjugate_word(conjugate_word(word)) == word


@given(words)
def test_conjugation_reverses_and_flips(word):
    conj = conjugate_word(word)
    assert len(conj) == len(word)
    for i, ch in enumerate(word):
        assert conj[len(word) - 1 - i] != ch


def test_partition_literals_roundtrip():
    for text in ("", "123", "12|34", "1|2|3", "14|2|3"):
        assert format_partition(parse_partition(text)) == text


def test_bad_literals_rejected():
    with pytest.raises(ParseError):
        parse_partition("13")  # does not cover 1..k
    with pytest.raises(ParseError):
        parse_partition("1a")


def test_canonical_enumeration_order_k3():
    assert [format_partition(p) for p in all_partitions(3)] == [
        "123",
        "12|3",
        "13|2",
        "1|23",
        "1|2|3",
    ]


def test_enumerate_s_family_counts_bell():
    spec = CategorySpec("S", 4)
    assert len(enumerate_category(spec, "ooo")) == 5


def test_enumerate_noncrossing_pairings_k4():
    spec = CategorySpec("O+", 4)
    pairs = enumerate_category(spec, "oooo")
    assert [format_partition(p) for p in pairs] == ["12|34", "14|23"]


def test_enumerate_unitary_needs_color_match():
    spec = CategorySpec("U", 3)
    assert enumerate_category(spec, "oo") == []
    matched = enumerate_category(spec, "ob")
    assert [format_partition(p) for p in matched] == ["12"]


def test_enumerate_pairings_odd_length_empty():
    assert enumerate_category(CategorySpec("O", 3), "ooo") == []


def test_partition_vector_examples():
    ones = partition_vector(SetPartition.from_blocks(1, [(0,)]), 3)
    assert ones.entries == (1, 1, 1)
    free = partition_vector(parse_partition("1|2"), 2)
    assert free.entries == (1, 1, 1, 1)
    diag = partition_vector(parse_partition("12"), 2)
    assert diag.entries == (1, 0, 0, 1)


def test_join_examples():
    a = parse_partition("12|34")
    b = parse_partition("13|24")
    assert format_partition(a.join(b)) == "1234"
    top = parse_partition("1234")
    assert a.join(top) == top
    assert a.join(a) == a


def partitions_of(k):
    return st.sampled_from(all_partitions(k))


@given(st.integers(min_value=0, max_value=5), st.data())
def test_join_lattice_properties(k, data):
    a = data.draw(partitions_of(k))
    b = data.draw(partitions_of(k))
    c = data.draw(partitions_of(k))
    assert a.join(b) == b.join(a)
    assert a.join(a) == a
    assert a.join(b).join(c) == a.join(b.join(c))
    assert a.join(b).block_count <= min(a.block_count, b.block_count)
    assert a.refines(a.join(b))


def test_select_basis_keeps_all_when_n_large():
    spec = CategorySpec("S", 4)
    basis = fix_basis(spec, "oo")
    assert basis.dimension == 2
    assert basis.independent == (0, 1)
    # full independence whenever N >= k
    assert fix_basis(spec, "oooo").dimension == 15
    assert fix_basis(CategorySpec("S", 3), "ooo").dimension == 5


def test_select_basis_drops_dependent_vectors_at_small_n():
    spec = CategorySpec("S", 2)
    basis = fix_basis(spec, "ooo")
    assert len(basis.members) == 5
    assert basis.dimension == 4
    # greedy scan keeps the earliest partitions that raise the rank
    assert basis.independent == (0, 1, 2, 3)


def test_select_basis_empty_input():
    basis = select_basis([], 3, "oo")
    assert basis.dimension == 0 and basis.members == ()


def test_pairing_and_crossing_predicates():
    assert parse_partition("12|34").is_pairing()
    assert not parse_partition("123").is_pairing()
    assert parse_partition("12|34").is_noncrossing()
    assert not parse_partition("13|24").is_noncrossing()


def test_spec_parsing():
    assert str(CategorySpec.parse("S+(4)")) == "S+(4)"
    assert CategorySpec.parse("U(3)").N == 3
    with pytest.raises(ParseError):
        CategorySpec.parse("Q(4)")
    with pytest.raises(ParseError):
        CategorySpec.parse("S(x)")
